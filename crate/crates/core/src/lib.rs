//! Robust learning on finite instance spaces with global one-inclusion graphs.

pub mod error;
pub mod boost;
pub mod dims;
pub mod eval;
pub mod fixtures;
pub mod instance;
pub mod learners;
pub mod oig;
pub mod orient;
pub mod rational;
pub mod risk;

pub use error::{Error, Result};
pub use instance::{
    canonical_multiset, parse_instance, DiscreteDistribution, Example, Hypothesis, Label, LabeledMultiset, PointId,
    ProblemInstance,
};
pub use oig::{build_classical_oig, build_global_oig, ClassicalOig, Edge, GlobalOig, GraphConfig};
pub use rational::Rational;
pub use risk::{robust_loss, robust_risk, Classifier, RiskValue};
