mod common;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust_oig::eval::EvalConfig;
use robust_oig::learners::{leave_one_out_mistakes, ConstantLearner, OrientationLearner, RermLearner};
use robust_oig::orient::{
    adv_outdegree, learner_induced_orientation, optimal_orientation, orientation_stats, solve_orientation,
    validate_orientation, Orientation, SolverConfig,
};
use robust_oig::{build_global_oig, GlobalOig, Label};

fn small_graphs(max_edges: usize) -> Vec<GlobalOig> {
    let mut out = Vec::new();
    let mut insts: Vec<_> = common::fixtures().into_iter().map(|(_, i)| i).collect();
    insts.extend(common::random_small(60, 17));
    for inst in &insts {
        for n in 1..=3 {
            let g = build_global_oig(inst, n).unwrap();
            if g.edges().len() <= max_edges {
                out.push(g);
            }
        }
    }
    out
}

#[test]
fn solver_matches_brute_force() {
    let graphs = small_graphs(14);
    assert!(graphs.len() >= 60, "only {} graphs", graphs.len());
    for g in &graphs {
        let (o, stats) = optimal_orientation(g, SolverConfig::default()).unwrap();
        assert!(validate_orientation(g, &o).ok);
        assert_eq!(stats.out_degrees, common::out_degrees(g, &o.heads));
        assert_eq!(stats.max_out_degree, common::min_max_out_degree(g), "n={} |E|={}", g.n(), g.edges().len());
    }
}

#[test]
fn exhausted_budget_reports_bracket() {
    let inst = common::fixtures().remove(3).1;
    let g = build_global_oig(&inst, 3).unwrap();
    let out = solve_orientation(&g, SolverConfig { time_budget: None, node_budget: Some(1) });
    assert!(out.lower <= out.stats.max_out_degree);
    assert!(validate_orientation(&g, &out.orientation).ok);
}

#[test]
fn optimal_never_exceeds_learner_induced() {
    for inst in common::random_small(20, 5) {
        let g = build_global_oig(&inst, 2).unwrap();
        let (_, opt) = optimal_orientation(&g, SolverConfig::default()).unwrap();
        for induced in [
            learner_induced_orientation(&inst, &g, &RermLearner, &EvalConfig::exact_only()).unwrap(),
            learner_induced_orientation(&inst, &g, &ConstantLearner(Label::Pos), &EvalConfig::exact_only()).unwrap(),
        ] {
            assert!(validate_orientation(&g, &induced.orientation).ok);
            assert!(opt.max_out_degree <= induced.stats.max_out_degree);
        }
    }
}

#[test]
fn leave_one_out_bounded_by_out_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut insts: Vec<_> = common::fixtures().into_iter().map(|(_, i)| i).collect();
    insts.extend(common::random_small(15, 2));
    for inst in &insts {
        for n in 1..=3 {
            let g = Arc::new(build_global_oig(inst, n).unwrap());
            if g.num_vertices() > 120 {
                continue;
            }
            for _ in 0..8 {
                let heads = g.edges().iter().map(|e| if rng.gen_bool(0.5) { e.a } else { e.b }).collect();
                let o = Orientation::new(&g, heads).unwrap();
                let learner = OrientationLearner::new(g.clone(), o.clone()).unwrap();
                for v in 0..g.num_vertices() {
                    let loo = leave_one_out_mistakes(inst, &learner, g.vertex(v)).unwrap();
                    assert!(loo <= adv_outdegree(&g, &o, v).unwrap());
                }
            }
        }
    }
}

#[test]
fn orientation_json_round_trip() {
    let inst = common::fixtures().remove(1).1;
    let g = build_global_oig(&inst, 2).unwrap();
    let (o, _) = optimal_orientation(&g, SolverConfig::default()).unwrap();
    let back: Orientation = serde_json::from_str(&serde_json::to_string(&o).unwrap()).unwrap();
    assert_eq!(orientation_stats(&g, &back), orientation_stats(&g, &o));
}
