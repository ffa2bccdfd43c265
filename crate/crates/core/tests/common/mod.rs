//! Brute-force oracles shared by the integration tests. They work from the
//! raw truth tables and perturbation sets only.
#![allow(dead_code)]

use std::collections::BTreeSet;

use robust_oig::fixtures::{example1, example2_discrete, f1, f2, random_instance, RandomInstanceParams};
use robust_oig::learners::{fit, Learner};
use robust_oig::rational::{self, Rational};
use robust_oig::{DiscreteDistribution, Example, GlobalOig, Label, PointId, ProblemInstance};

/// Small named fixtures with exactly computable dimensions.
pub fn fixtures() -> Vec<(&'static str, ProblemInstance)> {
    vec![
        ("f1", f1()),
        ("f2", f2()),
        ("example1-3", example1(3).unwrap()),
        ("example2-1-1", example2_discrete(1, 1, 64, 0).unwrap()),
    ]
}

pub fn random_small(count: usize, seed: u64) -> Vec<ProblemInstance> {
    (0..count as u64)
        .map(|i| {
            let params = RandomInstanceParams {
                points: 2 + (i % 3) as usize,
                hypotheses: 2 + (i % 4) as usize,
                max_perturbation: 1 + (i % 3) as usize,
                identity: false,
                include_self: i % 5 != 0,
            };
            random_instance(&params, seed.wrapping_mul(1000).wrapping_add(i))
        })
        .collect()
}

pub fn random_identity(count: usize, seed: u64) -> Vec<ProblemInstance> {
    (0..count as u64)
        .map(|i| {
            let params = RandomInstanceParams {
                points: 3 + (i % 3) as usize,
                hypotheses: 3 + (i % 6) as usize,
                max_perturbation: 1,
                identity: true,
                include_self: true,
            };
            random_instance(&params, seed.wrapping_mul(1000).wrapping_add(i))
        })
        .collect()
}

/// `h` agrees with `y` on all of `U(x)`.
pub fn fits(inst: &ProblemInstance, labels: &[Label], e: Example) -> bool {
    inst.perturbation(e.point).iter().all(|z| labels[z.0] == e.label)
}

pub fn realizable(inst: &ProblemInstance, examples: &[Example]) -> bool {
    inst.hypotheses().iter().any(|h| examples.iter().all(|&e| fits(inst, &h.labels, e)))
}

fn all_examples(inst: &ProblemInstance) -> Vec<Example> {
    (0..inst.num_points())
        .flat_map(|x| [Example::new(PointId(x), Label::Neg), Example::new(PointId(x), Label::Pos)])
        .collect()
}

/// Every realizable sorted multiset of size `n`.
pub fn vertices(inst: &ProblemInstance, n: usize) -> Vec<Vec<Example>> {
    let all = all_examples(inst);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(all: &[Example], start: usize, n: usize, cur: &mut Vec<Example>, out: &mut Vec<Vec<Example>>, inst: &ProblemInstance) {
        if !realizable(inst, cur) {
            return;
        }
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..all.len() {
            cur.push(all[i]);
            rec(all, i, n, cur, out, inst);
            cur.pop();
        }
    }
    rec(&all, 0, n, &mut cur, &mut out, inst);
    out
}

fn remove_one(v: &[Example], e: Example) -> Option<Vec<Example>> {
    let i = v.iter().position(|&x| x == e)?;
    let mut w = v.to_vec();
    w.remove(i);
    Some(w)
}

/// Edges by definition: `u = w + (x, y)`, `v = w + (x', -y)`, one per
/// common perturbation `z`. Returned as `(u, v, z)` with `u < v` indexing
/// `verts`.
pub fn edges(inst: &ProblemInstance, verts: &[Vec<Example>]) -> BTreeSet<(usize, usize, PointId)> {
    let mut out = BTreeSet::new();
    for (i, u) in verts.iter().enumerate() {
        for (j, v) in verts.iter().enumerate().skip(i + 1) {
            for &e in u.iter().collect::<BTreeSet<_>>() {
                for &f in v.iter().collect::<BTreeSet<_>>() {
                    if e.label == f.label {
                        continue;
                    }
                    if remove_one(u, e) != remove_one(v, f) {
                        continue;
                    }
                    for z in inst.perturbation(e.point) {
                        if inst.perturbation(f.point).contains(z) {
                            out.insert((i, j, *z));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Out-degree per vertex for heads given per edge, counted as distinct
/// elements of the vertex on edges leaving it.
pub fn out_degrees(g: &GlobalOig, heads: &[usize]) -> Vec<usize> {
    let mut sets: Vec<BTreeSet<Example>> = vec![BTreeSet::new(); g.num_vertices()];
    for (i, e) in g.edges().iter().enumerate() {
        let tail = if heads[i] == e.a { e.b } else { e.a };
        sets[tail].insert(if tail == e.a { e.a_elem } else { e.b_elem });
    }
    sets.into_iter().map(|s| s.len()).collect()
}

/// Minimum over all `2^|E|` orientations of the maximum out-degree.
pub fn min_max_out_degree(g: &GlobalOig) -> usize {
    let m = g.edges().len();
    assert!(m <= 20, "brute force over {m} edges");
    let mut best = usize::MAX;
    for mask in 0u32..(1u32 << m) {
        let heads: Vec<usize> =
            g.edges().iter().enumerate().map(|(i, e)| if mask >> i & 1 == 1 { e.b } else { e.a }).collect();
        let d = out_degrees(g, &heads).into_iter().max().unwrap_or(0);
        best = best.min(d);
        if best == 0 {
            break;
        }
    }
    if m == 0 {
        0
    } else {
        best
    }
}

/// Largest set of points on which the tables realize every labeling.
pub fn vc(inst: &ProblemInstance) -> usize {
    let n = inst.num_points();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let pts: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let patterns: BTreeSet<Vec<Label>> =
            inst.hypotheses().iter().map(|h| pts.iter().map(|&p| h.labels[p]).collect()).collect();
        if patterns.len() == 1 << pts.len() {
            best = best.max(pts.len());
        }
    }
    best
}

/// `R_U(h; D)` straight from the definition.
pub fn risk(inst: &ProblemInstance, labels: &[Label], d: &DiscreteDistribution) -> Rational {
    d.atoms().iter().filter(|(e, _)| !fits(inst, labels, *e)).map(|(_, w)| w.clone()).sum()
}

/// `E_{S ~ D^n} R_U(A(S); D)` by enumerating all ordered samples.
pub fn expected_risk(inst: &ProblemInstance, learner: &dyn Learner, d: &DiscreteDistribution, n: usize) -> Rational {
    let atoms = d.atoms();
    let mut idx = vec![0usize; n];
    let mut total = rational::zero();
    loop {
        let sample: Vec<Example> = idx.iter().map(|&i| atoms[i].0).collect();
        let p: Rational = idx.iter().map(|&i| atoms[i].1.clone()).product();
        let h = fit(learner, inst, &sample).unwrap();
        total += p * risk(inst, &h.labels, d);
        let mut k = n;
        loop {
            if k == 0 {
                return total;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < atoms.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Robust mistakes of the best hypothesis on `sample`.
pub fn best_in_class_mistakes(inst: &ProblemInstance, sample: &[Example]) -> usize {
    inst.hypotheses().iter().map(|h| sample.iter().filter(|&&e| !fits(inst, &h.labels, e)).count()).min().unwrap_or(sample.len())
}

/// Robust shattering dimension by trying every point set and every anchor
/// choice.
pub fn robust_shattering(inst: &ProblemInstance) -> usize {
    let n = inst.num_points();
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let zs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if zs.len() <= best {
            continue;
        }
        // Anchor choices per z: (x_pos, x_neg) with z in both perturbation sets.
        let choices: Vec<Vec<(usize, usize)>> = zs
            .iter()
            .map(|&z| {
                let xs: Vec<usize> = (0..n).filter(|&x| inst.perturbation(PointId(x)).contains(&PointId(z))).collect();
                xs.iter().flat_map(|&a| xs.iter().map(move |&b| (a, b))).collect()
            })
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; zs.len()];
        'outer: loop {
            let anchors: Vec<(usize, usize)> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            let shattered = (0..1u32 << zs.len()).all(|pattern| {
                inst.hypotheses().iter().any(|h| {
                    anchors.iter().enumerate().all(|(i, &(xp, xn))| {
                        if pattern >> i & 1 == 0 {
                            fits(inst, &h.labels, Example::new(PointId(xp), Label::Pos))
                        } else {
                            fits(inst, &h.labels, Example::new(PointId(xn), Label::Neg))
                        }
                    })
                })
            });
            if shattered {
                best = zs.len();
                break;
            }
            let mut k = idx.len();
            loop {
                if k == 0 {
                    break 'outer;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
    best
}
