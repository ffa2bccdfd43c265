//! Robust loss, robust risk, empirical robust risk and robust realizability.
//!
//! The supremum over `U(x)` is exact: every perturbation is enumerated.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::instance::{DiscreteDistribution, Example, Hypothesis, Label, LabeledMultiset, PointId, ProblemInstance};
use crate::rational::{self, Rational};

/// Anything that labels every point of the instance.
pub trait Classifier {
    fn predict(&self, x: PointId) -> Label;
}

impl Classifier for Hypothesis {
    fn predict(&self, x: PointId) -> Label {
        self.label(x)
    }
}

impl<C: Classifier + ?Sized> Classifier for &C {
    fn predict(&self, x: PointId) -> Label {
        (**self).predict(x)
    }
}

/// A robust risk in `[0, 1]`, held exactly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RiskValue(Rational);

impl RiskValue {
    pub fn new(value: Rational) -> Self {
        debug_assert!(rational::is_probability(&value), "risk outside [0,1]");
        RiskValue(value)
    }

    pub fn zero() -> Self {
        RiskValue(rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == rational::zero()
    }
}

impl fmt::Display for RiskValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for RiskValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

/// Whether `h` errs on some `z ∈ U(x)`. Unchecked; `x` must be in range.
pub fn robust_mistake<C: Classifier + ?Sized>(instance: &ProblemInstance, h: &C, e: Example) -> bool {
    instance.perturbation(e.point).iter().any(|&z| h.predict(z) != e.label)
}

/// `sup_{z ∈ U(x)} 1{h(z) ≠ y}` as 0 or 1.
pub fn robust_loss<C: Classifier + ?Sized>(instance: &ProblemInstance, h: &C, x: PointId, y: Label) -> Result<u8> {
    instance.check_point(x)?;
    Ok(u8::from(robust_mistake(instance, h, Example::new(x, y))))
}

/// Exact robust risk of `h` under `dist`.
pub fn robust_risk<C: Classifier + ?Sized>(
    instance: &ProblemInstance,
    h: &C,
    dist: &DiscreteDistribution,
) -> Result<RiskValue> {
    let mut total = rational::zero();
    for (e, w) in dist.atoms() {
        instance.check_point(e.point)?;
        if robust_mistake(instance, h, *e) {
            total += w;
        }
    }
    Ok(RiskValue::new(total))
}

/// Robust risk against the empirical distribution of `sample`.
pub fn empirical_robust_risk<C: Classifier + ?Sized>(
    instance: &ProblemInstance,
    h: &C,
    sample: &LabeledMultiset,
) -> Result<RiskValue> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut mistakes = 0u64;
    for &(e, c) in sample.entries() {
        instance.check_point(e.point)?;
        if robust_mistake(instance, h, e) {
            mistakes += c as u64;
        }
    }
    Ok(RiskValue::new(rational::ratio(mistakes as i64, sample.len() as i64)))
}

/// Number of robust mistakes of `h` on `sample`, counting multiplicity.
pub fn robust_mistakes<C: Classifier + ?Sized>(instance: &ProblemInstance, h: &C, sample: &[Example]) -> usize {
    sample.iter().filter(|&&e| robust_mistake(instance, h, e)).count()
}

/// First hypothesis (instance order) with zero empirical robust risk on
/// `sample`, if any.
pub fn realizable_witness(instance: &ProblemInstance, sample: &LabeledMultiset) -> Option<usize> {
    (0..instance.hypotheses().len())
        .find(|&h| sample.distinct().all(|e| instance.consistent_set(h).contains(e)))
}

/// Whether every element of `examples` is robustly fit by one hypothesis.
pub fn is_realizable(instance: &ProblemInstance, examples: impl IntoIterator<Item = Example> + Clone) -> bool {
    (0..instance.hypotheses().len())
        .any(|h| examples.clone().into_iter().all(|e| instance.consistent_set(h).contains(e)))
}

/// `{(x, y) : robust_loss(h, x, y) = 0}` in canonical order.
pub fn robustly_consistent_set(instance: &ProblemInstance, h: usize) -> Vec<Example> {
    instance.consistent_set(h).iter().collect()
}

/// The robust-consistency predicate `∀ z ∈ U(x): h(z) = h(x)`.
pub fn robustly_constant_at<C: Classifier + ?Sized>(instance: &ProblemInstance, h: &C, x: PointId) -> bool {
    let y = h.predict(x);
    instance.perturbation(x).iter().all(|&z| h.predict(z) == y)
}
