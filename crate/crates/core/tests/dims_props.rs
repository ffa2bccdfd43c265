mod common;

use robust_oig::dims::{
    d_dimension, dimension_report, full_degree_dimension, loss_class_vc, vc_dimension, verify_report, DimConfig,
    DimValue,
};
use robust_oig::ProblemInstance;

const BUDGET: u64 = 1_000_000;

#[test]
fn vc_matches_brute_force() {
    let mut insts: Vec<_> = common::fixtures().into_iter().map(|(_, i)| i).collect();
    insts.extend(common::random_small(30, 4));
    insts.extend(common::random_identity(20, 4));
    for inst in &insts {
        assert_eq!(vc_dimension(inst, BUDGET).value, DimValue::Exact(common::vc(inst)));
    }
}

#[test]
fn identity_perturbations_reduce_to_classical() {
    let cfg = DimConfig::default();
    for inst in common::random_identity(20, 9) {
        let vc = common::vc(&inst);
        assert_eq!(full_degree_dimension(&inst, &cfg).unwrap().value.exact(), Some(vc));
        assert_eq!(loss_class_vc(&inst, BUDGET).value, DimValue::Exact(vc));
    }
}

#[test]
fn every_witness_replays() {
    let cfg = DimConfig::default();
    let mut insts: Vec<_> = common::fixtures().into_iter().map(|(_, i)| i).collect();
    insts.extend(common::random_small(20, 6));
    for inst in &insts {
        let report = dimension_report(inst, &cfg).unwrap();
        assert_eq!(verify_report(inst, &report, &cfg).unwrap(), Vec::<&str>::new());
    }
}

#[test]
fn known_d_values() {
    let cfg = DimConfig { n_cap: 12, ..DimConfig::default() };
    let fx = common::fixtures();
    let want = [("f1", 1), ("f2", 3), ("example1-3", 1)];
    for (name, d) in want {
        let inst = &fx.iter().find(|f| f.0 == name).unwrap().1;
        assert_eq!(d_dimension(inst, &cfg).unwrap().value, DimValue::Exact(d), "{name}");
    }
}

fn prefix_class(inst: &ProblemInstance, k: usize) -> ProblemInstance {
    ProblemInstance::new(
        inst.points().to_vec(),
        inst.hypotheses().iter().take(k).map(|h| (h.name().to_string(), h.labels.clone())).collect(),
        inst.perturbations().to_vec(),
    )
    .unwrap()
}

#[test]
fn dimensions_are_monotone_in_the_class() {
    let cfg = DimConfig { n_cap: 9, ..DimConfig::default() };
    for inst in common::random_small(20, 12) {
        let small = prefix_class(&inst, 1.max(inst.hypotheses().len() / 2));
        assert!(vc_dimension(&small, BUDGET).value.lower() <= vc_dimension(&inst, BUDGET).value.lower());
        assert!(d_dimension(&small, &cfg).unwrap().value.lower() <= d_dimension(&inst, &cfg).unwrap().value.lower());
    }
}

#[test]
fn cap_below_point_count_is_marked() {
    let inst = common::fixtures().remove(1).1;
    let cfg = DimConfig { n_cap: 2, ..DimConfig::default() };
    assert_eq!(d_dimension(&inst, &cfg).unwrap().value, DimValue::AtLeast(2));
}

#[test]
fn robust_shattering_matches_brute_force() {
    use robust_oig::dims::{robust_shattering_dimension, verify_robust_shattering};
    let mut insts: Vec<_> = common::fixtures().into_iter().map(|(_, i)| i).collect();
    insts.extend(common::random_small(40, 21));
    insts.extend(common::random_identity(10, 21));
    for inst in &insts {
        let d = robust_shattering_dimension(inst, BUDGET);
        assert_eq!(d.value, DimValue::Exact(common::robust_shattering(inst)));
        assert!(verify_robust_shattering(inst, &d.witness).unwrap());
    }
}
