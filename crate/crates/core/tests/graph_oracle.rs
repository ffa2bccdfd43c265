mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use robust_oig::fixtures::{random_instance, RandomInstanceParams};
use robust_oig::{build_global_oig, GlobalOig, GraphConfig, Label, LabeledMultiset, PointId, ProblemInstance};

fn check_against_definition(inst: &ProblemInstance, n: usize) {
    let g = build_global_oig(inst, n).unwrap();
    let verts = common::vertices(inst, n);
    assert_eq!(g.num_vertices(), verts.len(), "vertex count at n={n}");
    // Map oracle indices to graph indices.
    let map: Vec<usize> = verts
        .iter()
        .map(|v| g.vertex_index(&LabeledMultiset::from_examples(v.iter().copied())).expect("oracle vertex in graph"))
        .collect();
    let want: BTreeSet<(usize, usize, PointId)> = common::edges(inst, &verts)
        .into_iter()
        .map(|(i, j, z)| (map[i].min(map[j]), map[i].max(map[j]), z))
        .collect();
    let got: BTreeSet<(usize, usize, PointId)> = g.edges().iter().map(|e| (e.a, e.b, e.witness)).collect();
    assert_eq!(got.len(), g.edges().len(), "duplicate edge records");
    assert_eq!(got, want, "edge set at n={n}");
    for v in 0..g.num_vertices() {
        let elems: BTreeSet<_> = g.incident(v).iter().map(|&e| g.edges()[e].element_at(v)).collect();
        assert_eq!(g.adv_degree(v).unwrap(), elems.len());
    }
}

#[test]
fn fixtures_match_definition() {
    for (name, inst) in common::fixtures() {
        for n in 1..=3 {
            if common::vertices(&inst, n).len() > 400 {
                continue;
            }
            eprintln!("{name} n={n}");
            check_against_definition(&inst, n);
        }
    }
}

#[test]
fn random_instances_match_definition() {
    for inst in common::random_small(40, 3) {
        for n in 1..=3 {
            check_against_definition(&inst, n);
        }
    }
}

#[test]
fn edge_order_is_canonical() {
    for inst in common::random_small(10, 8) {
        let g = build_global_oig(&inst, 2).unwrap();
        let keys: Vec<_> = g.edges().iter().map(|e| (e.a, e.b, e.witness)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(g.edges().iter().all(|e| e.a < e.b));
    }
}

#[test]
fn vertex_cap_is_enforced() {
    let inst = common::fixtures().remove(3).1;
    let err = GlobalOig::build(&inst, 4, GraphConfig { vertex_cap: 10 }).unwrap_err();
    assert!(matches!(err, robust_oig::Error::TooLarge { .. }));
}

fn permuted(inst: &ProblemInstance, perm: &[usize]) -> ProblemInstance {
    // Point i of the new instance is point perm[i] of the old one.
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let points = perm.iter().map(|&p| inst.points()[p].clone()).collect();
    let hyps = inst
        .hypotheses()
        .iter()
        .map(|h| (h.name().to_string(), perm.iter().map(|&p| h.labels[p]).collect::<Vec<Label>>()))
        .collect();
    let u = perm
        .iter()
        .map(|&p| inst.perturbation(PointId(p)).iter().map(|z| PointId(inv[z.0])).collect())
        .collect();
    ProblemInstance::new(points, hyps, u).unwrap()
}

fn signature(inst: &ProblemInstance, n: usize) -> (usize, usize, usize, Vec<usize>) {
    let g = build_global_oig(inst, n).unwrap();
    let mut degrees: Vec<usize> = (0..g.num_vertices()).map(|v| g.adv_degree(v).unwrap()).collect();
    degrees.sort();
    (g.num_vertices(), g.edges().len(), g.max_adv_degree(), degrees)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariant_under_point_relabeling(seed in 0u64..10_000, n in 1usize..=3, rot in 0usize..4) {
        let params = RandomInstanceParams { points: 4, hypotheses: 5, max_perturbation: 2, ..Default::default() };
        let inst = random_instance(&params, seed);
        let perm: Vec<usize> = (0..4).map(|i| (i + rot) % 4).rev().collect();
        prop_assert_eq!(signature(&inst, n), signature(&permuted(&inst, &perm), n));
    }

    #[test]
    fn more_hypotheses_never_shrink_the_graph(seed in 0u64..10_000, n in 1usize..=3) {
        let params = RandomInstanceParams { points: 3, hypotheses: 5, max_perturbation: 2, ..Default::default() };
        let big = random_instance(&params, seed);
        let small = ProblemInstance::new(
            big.points().to_vec(),
            big.hypotheses().iter().take(2).map(|h| (h.name().to_string(), h.labels.clone())).collect(),
            big.perturbations().to_vec(),
        ).unwrap();
        let (gs, gb) = (build_global_oig(&small, n).unwrap(), build_global_oig(&big, n).unwrap());
        prop_assert!(gs.num_vertices() <= gb.num_vertices());
        // The subclass graph is the induced subgraph on its vertices.
        let idx: Vec<usize> = gs.vertices().iter().map(|v| gb.vertex_index(v).unwrap()).collect();
        let induced = gb.induced_subgraph(&big, &idx);
        prop_assert_eq!(induced.edges().len(), gs.edges().len());
    }
}
