mod common;

use robust_oig::eval::{
    exact_expected_risk, expectation, sup_risk_over_family, vertex_family, EstimateMode, EvalConfig,
};
use robust_oig::learners::{optimal_learner, ClassicalOigLearner, ConstantLearner, Learner, RermLearner};
use robust_oig::rational::{self, Rational};
use robust_oig::{build_global_oig, DiscreteDistribution, Label};

#[test]
fn exact_risk_matches_enumeration() {
    for (name, inst) in common::fixtures().into_iter().take(3) {
        let g = build_global_oig(&inst, 2).unwrap();
        let family = vertex_family(&g);
        let opt = optimal_learner(&inst, 3).unwrap();
        let learners: [&dyn Learner; 4] = [&RermLearner, &ConstantLearner(Label::Neg), &ClassicalOigLearner, &opt];
        for d in family.iter().take(6) {
            for l in learners {
                let n = l.sample_size().unwrap_or(2);
                let got = exact_expected_risk(&inst, l, d, n, &EvalConfig::exact_only()).unwrap();
                assert_eq!(got.mode, EstimateMode::Exact);
                assert_eq!(got.exact.unwrap(), common::expected_risk(&inst, l, d, n), "{name} {}", l.name());
            }
        }
    }
}

#[test]
fn family_sup_is_max_of_members() {
    let inst = common::fixtures().remove(1).1;
    let g = build_global_oig(&inst, 3).unwrap();
    let family = vertex_family(&g);
    let sup = sup_risk_over_family(&inst, &RermLearner, &family, 2, &EvalConfig::exact_only()).unwrap();
    let best = family.iter().map(|d| common::expected_risk(&inst, &RermLearner, d, 2)).max().unwrap();
    assert_eq!(sup.estimate.exact.unwrap(), best);
}

#[test]
fn monte_carlo_is_seeded_and_close() {
    let atoms: Vec<_> = (0..4)
        .map(|i| (robust_oig::Example::pos(i), rational::ratio(1, 4)))
        .collect();
    let cfg = EvalConfig { exact_cap: 1, trials: 4000, seed: Some(5), allow_monte_carlo: true };
    let f = |s: &[robust_oig::Example]| -> robust_oig::Result<Rational> {
        Ok(if s.iter().any(|e| e.point.0 == 0) { rational::one() } else { rational::zero() })
    };
    let a = expectation(&atoms, 3, true, &cfg, f).unwrap();
    let b = expectation(&atoms, 3, true, &cfg, f).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.mode, EstimateMode::MonteCarlo);
    let exact = 1.0 - 0.75f64.powi(3);
    assert!((a.value - exact).abs() < 4.0 * a.standard_error.unwrap() + 1e-9);
    let missing = EvalConfig { seed: None, ..cfg };
    assert!(expectation(&atoms, 3, true, &missing, f).is_err());
}

#[test]
fn non_realizable_family_member_rejected() {
    let inst = common::fixtures().remove(1).1;
    let bad = DiscreteDistribution::uniform(&inst.examples(&[("2", 1), ("2", -1)]).unwrap()).unwrap();
    assert!(sup_risk_over_family(&inst, &RermLearner, &[bad], 1, &EvalConfig::exact_only()).is_err());
}
