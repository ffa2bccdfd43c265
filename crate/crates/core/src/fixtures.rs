//! Shared instance constructors: the small reference instances used across
//! the test suites, the parametric generators behind the `fixtures` CLI
//! subcommand, and a seeded random-instance generator.

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{DiscreteDistribution, Example, Label, NamedDistribution, PointId, ProblemInstance};
use crate::rational;

/// Hard ceiling for generated hypothesis tables.
pub const MAX_GENERATED_HYPOTHESES: usize = 1 << 16;

fn letter_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("p{i}") })
        .collect()
}

fn all_tables(k: usize) -> Vec<(String, Vec<Label>)> {
    (0..1usize << k)
        .map(|mask| {
            let labels = (0..k).map(|i| if mask & (1 << i) != 0 { Label::Neg } else { Label::Pos }).collect();
            (format!("h{mask}"), labels)
        })
        .collect()
}

/// Every function on `k` points with the all-powerful perturbation `U(x) = X`.
pub fn example1(k: usize) -> Result<ProblemInstance> {
    if k == 0 || (1usize << k.min(63)) > MAX_GENERATED_HYPOTHESES {
        return Err(Error::TooLarge { what: "hypothesis count", cap: MAX_GENERATED_HYPOTHESES as u64 });
    }
    let all: Vec<PointId> = (0..k).map(PointId).collect();
    ProblemInstance::new(letter_names(k), all_tables(k), vec![all; k])
}

/// F1: `X = {a, b}`, `U(a) = U(b) = {a, b}`, `H` = all four functions.
pub fn f1() -> ProblemInstance {
    example1(2).expect("fixed fixture")
}

/// F2: thresholds on `{1, 2, 3}` with identity perturbations;
/// `h_t(x) = +1` iff `x >= t` for `t` in `1..=4`.
pub fn f2() -> ProblemInstance {
    let points = vec!["1".to_string(), "2".to_string(), "3".to_string()];
    let hyps = (1..=4)
        .map(|t| (format!("h{t}"), (1..=3).map(|x| if x >= t { Label::Pos } else { Label::Neg }).collect()))
        .collect();
    let u = (0..3).map(|x| vec![PointId(x)]).collect();
    ProblemInstance::new(points, hyps, u).expect("fixed fixture")
}

/// Point layout of the local-learner separation instance.
#[derive(Clone, Debug)]
pub struct SeparationLayout {
    pub blocks: usize,
    /// Per block: `true` when `z_i ∈ U(x⁺_i)`, `false` when `z_i ∈ U(x⁻_i)`.
    pub coins: Vec<bool>,
}

impl SeparationLayout {
    pub fn x_pos(&self, i: usize) -> PointId {
        PointId(3 * i)
    }
    pub fn x_neg(&self, i: usize) -> PointId {
        PointId(3 * i + 1)
    }
    pub fn z(&self, i: usize) -> PointId {
        PointId(3 * i + 2)
    }

    /// Perturbation map for the layout's coins.
    pub fn perturbations(&self) -> Vec<Vec<PointId>> {
        let mut u = Vec::with_capacity(3 * self.blocks);
        for i in 0..self.blocks {
            let (xp, xn, z) = (self.x_pos(i), self.x_neg(i), self.z(i));
            if self.coins[i] {
                u.push(vec![xp, z]);
                u.push(vec![xn]);
            } else {
                u.push(vec![xp]);
                u.push(vec![xn, z]);
            }
            u.push(vec![xp, xn, z]);
        }
        u
    }

    /// Uniform distribution over `(x⁺_i, +1), (x⁻_i, -1)` for every block.
    pub fn target_distribution(&self) -> DiscreteDistribution {
        let atoms: Vec<Example> = (0..self.blocks)
            .flat_map(|i| [Example::new(self.x_pos(i), Label::Pos), Example::new(self.x_neg(i), Label::Neg)])
            .collect();
        DiscreteDistribution::uniform(&atoms).expect("non-empty")
    }
}

/// Draws the per-block coins of the random perturbation map.
pub fn separation_coins<R: Rng>(blocks: usize, rng: &mut R) -> Vec<bool> {
    (0..blocks).map(|_| rng.gen_bool(0.5)).collect()
}

/// The sign patterns on `z_1..z_blocks` that index the class. When
/// `2^blocks > pattern_cap`, `pattern_cap` distinct patterns are drawn with
/// `seed` and kept in ascending order.
pub fn separation_patterns(blocks: usize, pattern_cap: usize, seed: u64) -> Result<Vec<u64>> {
    if blocks > 63 {
        return Err(Error::TooLarge { what: "separation blocks", cap: 63 });
    }
    let total = 1u64 << blocks;
    if total <= pattern_cap as u64 {
        return Ok((0..total).collect());
    }
    if pattern_cap > MAX_GENERATED_HYPOTHESES {
        return Err(Error::TooLarge { what: "hypothesis count", cap: MAX_GENERATED_HYPOTHESES as u64 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7061_7474_6572_6e73);
    let mut chosen: Vec<u64> = if total <= usize::MAX as u64 {
        sample_indices(&mut rng, total as usize, pattern_cap).into_iter().map(|i| i as u64).collect()
    } else {
        unreachable!("blocks <= 63")
    };
    chosen.sort_unstable();
    Ok(chosen)
}

/// Builds the separation instance for a fixed layout and pattern set:
/// points `x⁺_i, x⁻_i, z_i`; each hypothesis is `+1` on every `x⁺`, `-1` on
/// every `x⁻`, and follows its pattern on the `z_i` (bit set means `-1`).
pub fn separation_instance(layout: &SeparationLayout, patterns: &[u64]) -> Result<ProblemInstance> {
    let blocks = layout.blocks;
    let mut points = Vec::with_capacity(3 * blocks);
    for i in 1..=blocks {
        points.push(format!("xp{i}"));
        points.push(format!("xm{i}"));
        points.push(format!("z{i}"));
    }
    let hyps = patterns
        .iter()
        .map(|&p| {
            let mut labels = Vec::with_capacity(3 * blocks);
            for i in 0..blocks {
                labels.push(Label::Pos);
                labels.push(Label::Neg);
                labels.push(if p & (1 << i) != 0 { Label::Neg } else { Label::Pos });
            }
            (format!("h{p}"), labels)
        })
        .collect();
    ProblemInstance::new(points, hyps, layout.perturbations())?.with_distributions(vec![NamedDistribution {
        name: "P".into(),
        distribution: layout.target_distribution(),
    }])
}

/// F3(m, seed): `3m` blocks, perturbations drawn with `seed`, class truncated
/// to at most `pattern_cap` sign patterns.
pub fn thm1(m: usize, seed: u64, pattern_cap: usize) -> Result<(ProblemInstance, SeparationLayout)> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let blocks = 3 * m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layout = SeparationLayout { blocks, coins: separation_coins(blocks, &mut rng) };
    let patterns = separation_patterns(blocks, pattern_cap, seed)?;
    Ok((separation_instance(&layout, &patterns)?, layout))
}

/// Discretized projection example: points are bit strings of length
/// `d + k`; `U(x)` is every point agreeing with `x` on the first `d`
/// coordinates. The class holds constants, dictators/anti-dictators and
/// count thresholds on the first `d` coordinates, then copies of those base
/// hypotheses with labels flipped on points whose junk coordinates are not
/// all zero, until `hypothesis_cap` tables exist.
pub fn example2_discrete(d: usize, k: usize, hypothesis_cap: usize, seed: u64) -> Result<ProblemInstance> {
    let width = d + k;
    if width == 0 || width > 12 {
        return Err(Error::TooLarge { what: "coordinate count", cap: 12 });
    }
    if hypothesis_cap > MAX_GENERATED_HYPOTHESES {
        return Err(Error::TooLarge { what: "hypothesis count", cap: MAX_GENERATED_HYPOTHESES as u64 });
    }
    let num = 1usize << width;
    let bits = |x: usize, j: usize| (x >> (width - 1 - j)) & 1;
    let points: Vec<String> = (0..num).map(|x| (0..width).map(|j| char::from(b'0' + bits(x, j) as u8)).collect()).collect();
    let relevant = |x: usize| x >> k;
    let perturbations: Vec<Vec<PointId>> =
        (0..num).map(|x| (0..num).filter(|&z| relevant(z) == relevant(x)).map(PointId).collect()).collect();

    let mut base: Vec<(String, Vec<Label>)> = Vec::new();
    let lab = |b: bool| if b { Label::Pos } else { Label::Neg };
    for j in 0..d {
        base.push((format!("dict{j}"), (0..num).map(|x| lab(bits(x, j) == 1)).collect()));
        base.push((format!("anti{j}"), (0..num).map(|x| lab(bits(x, j) == 0)).collect()));
    }
    for t in 0..=d + 1 {
        base.push((format!("thr{t}"), (0..num).map(|x| lab((0..d).filter(|&j| bits(x, j) == 1).count() >= t)).collect()));
    }
    // thr0 is constant +1 and thr{d+1} constant -1.
    let mut hyps = base.clone();
    let junk: Vec<usize> = (0..num).filter(|&x| x & ((1 << k) - 1) != 0).collect();
    if !junk.is_empty() && hyps.len() < hypothesis_cap {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max_masks = 1u64.checked_shl(junk.len() as u32).unwrap_or(u64::MAX);
        let mut used = std::collections::HashSet::new();
        let mut attempts = 0u64;
        'outer: while hyps.len() < hypothesis_cap && attempts < 64 * hypothesis_cap as u64 {
            attempts += 1;
            let mask = if max_masks == u64::MAX { rng.gen::<u64>() } else { rng.gen_range(1..max_masks) };
            for (bi, (name, labels)) in base.iter().enumerate() {
                if !used.insert((bi, mask)) {
                    continue;
                }
                let mut labels = labels.clone();
                for (pos, &x) in junk.iter().enumerate() {
                    if mask & (1 << pos) != 0 {
                        labels[x] = labels[x].flip();
                    }
                }
                hyps.push((format!("{name}^{mask}"), labels));
                if hyps.len() >= hypothesis_cap {
                    break 'outer;
                }
            }
        }
    }
    ProblemInstance::new(points, hyps, perturbations)
}

/// Parameters for [`random_instance`].
#[derive(Clone, Debug)]
pub struct RandomInstanceParams {
    pub points: usize,
    pub hypotheses: usize,
    /// Maximum `|U(x)|`.
    pub max_perturbation: usize,
    /// Force `U(x) = {x}`.
    pub identity: bool,
    /// Force `x ∈ U(x)`.
    pub include_self: bool,
}

impl Default for RandomInstanceParams {
    fn default() -> Self {
        RandomInstanceParams { points: 3, hypotheses: 4, max_perturbation: 2, identity: false, include_self: true }
    }
}

/// A random instance with uniformly drawn truth tables and perturbation sets.
pub fn random_instance(params: &RandomInstanceParams, seed: u64) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.points.max(1);
    let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let hyps = (0..params.hypotheses)
        .map(|h| (format!("h{h}"), (0..n).map(|_| if rng.gen_bool(0.5) { Label::Pos } else { Label::Neg }).collect()))
        .collect();
    let perturbations = (0..n)
        .map(|x| {
            if params.identity {
                return vec![PointId(x)];
            }
            let size = rng.gen_range(1..=params.max_perturbation.clamp(1, n));
            let mut set: Vec<PointId> =
                sample_indices(&mut rng, n, size).into_iter().map(PointId).collect();
            if params.include_self && !set.contains(&PointId(x)) {
                set[0] = PointId(x);
            }
            set
        })
        .collect();
    ProblemInstance::new(points, hyps, perturbations).expect("generated instances are valid")
}

/// Uniform distribution named `uniform` over every robustly realizable
/// singleton; convenient for CLI runs on generated fixtures.
pub fn with_uniform_realizable(instance: ProblemInstance) -> Result<ProblemInstance> {
    let support: Vec<Example> = instance
        .point_ids()
        .flat_map(|x| [Example::new(x, Label::Neg), Example::new(x, Label::Pos)])
        .filter(|e| (0..instance.hypotheses().len()).any(|h| instance.consistent_set(h).contains(*e)))
        .collect();
    if support.is_empty() {
        return Ok(instance);
    }
    let k = support.len() as i64;
    let dist = DiscreteDistribution::new(support.into_iter().map(|e| (e, rational::ratio(1, k))).collect())?;
    let mut existing = instance.distributions().to_vec();
    existing.push(NamedDistribution { name: "uniform".into(), distribution: dist });
    instance.with_distributions(existing)
}

/// Adds `target`: uniform over the points where hypothesis `h` is robustly
/// correct, labeled by `h`. Samples from it are robustly realizable.
pub fn with_target_distribution(instance: ProblemInstance, h: usize) -> Result<ProblemInstance> {
    let hyp = instance.hypotheses().get(h).ok_or(Error::EmptyClass)?;
    let support: Vec<Example> = instance
        .point_ids()
        .map(|x| Example::new(x, hyp.label(x)))
        .filter(|&e| instance.consistent_set(h).contains(e))
        .collect();
    if support.is_empty() {
        return Err(Error::NotRealizable(format!("`{}` is robustly correct nowhere", hyp.name())));
    }
    let k = support.len() as i64;
    let atoms = support.into_iter().map(|e| (e, rational::ratio(1, k))).collect();
    let mut existing = instance.distributions().to_vec();
    existing.push(NamedDistribution { name: "target".into(), distribution: DiscreteDistribution::new(atoms)? });
    instance.with_distributions(existing)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f1_shape() {
        let f1 = f1();
        assert_eq!(f1.points(), &["a".to_string(), "b".to_string()]);
        assert_eq!(f1.hypotheses().len(), 4);
        assert_eq!(f1.perturbation(PointId(0)), &[PointId(0), PointId(1)]);
    }

    #[test]
    fn f2_shape() {
        let f2 = f2();
        assert_eq!(f2.hypotheses().len(), 4);
        assert!(f2.is_identity_perturbation());
        // h_2 is -1 on point 1 only.
        assert_eq!(f2.hypotheses()[1].labels, vec![Label::Neg, Label::Pos, Label::Pos]);
    }

    #[test]
    fn thm1_m1_has_nine_points() {
        let (inst, layout) = thm1(1, 3, 4096).unwrap();
        assert_eq!(inst.num_points(), 9);
        assert_eq!(inst.hypotheses().len(), 8);
        let (again, layout2) = thm1(1, 3, 4096).unwrap();
        assert_eq!(inst, again);
        assert_eq!(layout.coins, layout2.coins);
        for i in 0..3 {
            let z = layout.z(i);
            assert_eq!(inst.perturbation(z).len(), 3);
            let in_pos = inst.perturbation(layout.x_pos(i)).contains(&z);
            let in_neg = inst.perturbation(layout.x_neg(i)).contains(&z);
            assert!(in_pos ^ in_neg);
            assert_eq!(in_pos, layout.coins[i]);
        }
    }

    #[test]
    fn pattern_cap_samples_distinct() {
        let p = separation_patterns(12, 100, 9).unwrap();
        assert_eq!(p.len(), 100);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(p, separation_patterns(12, 100, 9).unwrap());
    }

    #[test]
    fn example1_two_points_is_f1() {
        assert_eq!(example1(2).unwrap(), f1());
    }

    #[test]
    fn example2_small() {
        let inst = example2_discrete(1, 1, 64, 0).unwrap();
        assert_eq!(inst.num_points(), 4);
        assert_eq!(inst.perturbation(PointId(0)), &[PointId(0), PointId(1)]);
        assert!(inst.hypotheses().len() > 4);
    }

    #[test]
    fn random_instances_valid_and_seeded() {
        let params = RandomInstanceParams { points: 4, hypotheses: 5, max_perturbation: 3, ..Default::default() };
        let a = random_instance(&params, 11);
        let b = random_instance(&params, 11);
        assert_eq!(a, b);
        for x in a.point_ids() {
            assert!(a.perturbation(x).contains(&x));
        }
    }
}
