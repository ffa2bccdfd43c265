//! Expected robust risk of learners, exactly or by seeded Monte Carlo,
//! plus the experiments built on top of it.

use std::collections::HashMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fixtures::{self, separation_coins, separation_instance, separation_patterns, SeparationLayout};
use crate::instance::{DiscreteDistribution, Example, LabeledMultiset, ProblemInstance};
use crate::learners::{fit, leave_one_out_mistakes, optimal_learner_with, Learner, OrientationLearner, Predictor};
use crate::oig::{for_each_multichoose, GlobalOig, GraphConfig};
use crate::orient::{
    adv_outdegree, learner_induced_orientation, optimal_orientation, uniform_vertex_law, weighted_learner_orientation,
    weighted_sample_size, weighted_vertex_law, SolverConfig,
};
use crate::rational::{self, Rational};
use crate::risk::{is_realizable, robust_risk};

pub const DEFAULT_EXACT_CAP: u64 = 1_000_000;

/// How expectations over i.i.d. draws are computed.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    /// Largest `|support|^m` that is enumerated exactly.
    pub exact_cap: u64,
    /// Monte Carlo trials when the cap is exceeded.
    pub trials: usize,
    /// Required for Monte Carlo.
    pub seed: Option<u64>,
    pub allow_monte_carlo: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { exact_cap: DEFAULT_EXACT_CAP, trials: 1000, seed: None, allow_monte_carlo: true }
    }
}

impl EvalConfig {
    pub fn exact_only() -> Self {
        EvalConfig { allow_monte_carlo: false, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMode {
    Exact,
    MonteCarlo,
}

fn ser_opt_rational<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskEstimate {
    pub value: f64,
    /// Exact value, present in exact mode.
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<Rational>,
    pub mode: EstimateMode,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub standard_error: Option<f64>,
}

impl RiskEstimate {
    fn exact(value: Rational) -> Self {
        RiskEstimate {
            value: rational::to_f64(&value),
            exact: Some(value),
            mode: EstimateMode::Exact,
            trials: None,
            seed: None,
            standard_error: None,
        }
    }
}

fn saturating_pow(base: u64, exp: usize) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// `E f(S)` for `S` of `m` i.i.d. draws from `atoms`. Exact enumeration
/// when `|atoms|^m <= exact_cap`, grouping draws by count vector when the
/// integrand is order-insensitive; otherwise seeded Monte Carlo. In exact
/// mode with `exchangeable`, `f` receives samples in canonical order.
pub fn expectation(
    atoms: &[(Example, Rational)],
    m: usize,
    exchangeable: bool,
    cfg: &EvalConfig,
    mut f: impl FnMut(&[Example]) -> Result<Rational>,
) -> Result<RiskEstimate> {
    let k = atoms.len();
    if k == 0 && m > 0 {
        return Err(Error::EmptySample);
    }
    let mut sorted: Vec<(Example, Rational)> = atoms.to_vec();
    sorted.sort_by_key(|(e, _)| *e);
    if saturating_pow(k as u64, m) <= cfg.exact_cap {
        let mut total = rational::zero();
        let mut buf = Vec::with_capacity(m);
        if exchangeable {
            for_each_multichoose(k, m, |idx| {
                let mut counts = vec![0usize; k];
                for &i in idx {
                    counts[i] += 1;
                }
                let mut p = Rational::from_integer(rational::multinomial(&counts));
                for (i, &c) in counts.iter().enumerate() {
                    if c > 0 {
                        p *= rational::pow(&sorted[i].1, c);
                    }
                }
                buf.clear();
                buf.extend(idx.iter().map(|&i| sorted[i].0));
                total += p * f(&buf)?;
                Ok(())
            })?;
        } else {
            let mut idx = vec![0usize; m];
            loop {
                let mut p = rational::one();
                for &i in &idx {
                    p *= &sorted[i].1;
                }
                buf.clear();
                buf.extend(idx.iter().map(|&i| sorted[i].0));
                total += p * f(&buf)?;
                // Odometer increment.
                let mut pos = m;
                loop {
                    if pos == 0 {
                        return Ok(RiskEstimate::exact(total));
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < k {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        return Ok(RiskEstimate::exact(total));
    }
    if !cfg.allow_monte_carlo {
        return Err(Error::TooLarge { what: "exact enumeration size", cap: cfg.exact_cap });
    }
    let seed = cfg
        .seed
        .ok_or_else(|| Error::InvalidArgument("Monte Carlo evaluation requires an explicit seed".into()))?;
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("Monte Carlo evaluation needs at least one trial".into()));
    }
    let weights: Vec<f64> = sorted.iter().map(|(_, w)| rational::to_f64(w)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut buf = Vec::with_capacity(m);
    for _ in 0..cfg.trials {
        buf.clear();
        buf.extend((0..m).map(|_| sorted[dist.sample(&mut rng)].0));
        if exchangeable {
            buf.sort_unstable();
        }
        let v = rational::to_f64(&f(&buf)?);
        sum += v;
        sum_sq += v * v;
    }
    let t = cfg.trials as f64;
    let mean = sum / t;
    let var = if cfg.trials > 1 { ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0) } else { 0.0 };
    Ok(RiskEstimate {
        value: mean,
        exact: None,
        mode: EstimateMode::MonteCarlo,
        trials: Some(cfg.trials),
        seed: Some(seed),
        standard_error: Some((var / t).sqrt()),
    })
}

/// Trains through `fit`, memoizing by sample (by multiset for exchangeable
/// learners).
pub struct TrainingCache<'a> {
    instance: &'a ProblemInstance,
    learner: &'a dyn Learner,
    cache: HashMap<Vec<Example>, Predictor>,
}

impl<'a> TrainingCache<'a> {
    pub fn new(instance: &'a ProblemInstance, learner: &'a dyn Learner) -> Self {
        TrainingCache { instance, learner, cache: HashMap::new() }
    }

    pub fn predictor(&mut self, sample: &[Example]) -> Result<&Predictor> {
        let mut key = sample.to_vec();
        if self.learner.exchangeable() {
            key.sort_unstable();
        }
        if !self.cache.contains_key(&key) {
            let p = fit(self.learner, self.instance, &key)?;
            self.cache.insert(key.clone(), p);
        }
        Ok(&self.cache[&key])
    }
}

/// `E_{S ~ D^n} R_U(A(S); D)`.
pub fn exact_expected_risk(
    instance: &ProblemInstance,
    learner: &dyn Learner,
    dist: &DiscreteDistribution,
    n: usize,
    cfg: &EvalConfig,
) -> Result<RiskEstimate> {
    let mut cache = TrainingCache::new(instance, learner);
    expectation(dist.atoms(), n, learner.exchangeable(), cfg, |s| {
        Ok(robust_risk(instance, cache.predictor(s)?, dist)?.into_inner())
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyRisk {
    /// Labelled "family-restricted sup" in reports: the max over the given
    /// distributions only.
    pub estimate: RiskEstimate,
    pub argmax: usize,
}

/// Max of the expected risk over a finite family of realizable
/// distributions.
pub fn sup_risk_over_family(
    instance: &ProblemInstance,
    learner: &dyn Learner,
    family: &[DiscreteDistribution],
    n: usize,
    cfg: &EvalConfig,
) -> Result<FamilyRisk> {
    if family.is_empty() {
        return Err(Error::InvalidArgument("empty distribution family".into()));
    }
    let mut best: Option<FamilyRisk> = None;
    for (i, d) in family.iter().enumerate() {
        if !is_realizable(instance, d.support().collect::<Vec<_>>()) {
            return Err(Error::NotRealizable(format!("family member {i}")));
        }
        let est = exact_expected_risk(instance, learner, d, n, cfg)?;
        let better = match &best {
            None => true,
            Some(b) => match (&est.exact, &b.estimate.exact) {
                (Some(x), Some(y)) => x > y,
                _ => est.value > b.estimate.value,
            },
        };
        if better {
            best = Some(FamilyRisk { estimate: est, argmax: i });
        }
    }
    Ok(best.expect("non-empty family"))
}

/// `{P_v}`: for each vertex, the uniform law over its positions.
pub fn vertex_family(g: &GlobalOig) -> Vec<DiscreteDistribution> {
    g.vertices()
        .iter()
        .map(|v| DiscreteDistribution::new(uniform_vertex_law(v)).expect("valid law"))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LearnerSandwich {
    pub learner: String,
    pub induced_max_out_degree: usize,
    pub argmax_vertex: usize,
    /// `E_{S ~ P_v*^n} R_U(A(S); P_v*)`.
    pub risk_at_argmax: RiskEstimate,
    /// `max out-degree / (8n)`.
    pub lower_bound: f64,
    pub optimal_at_most_induced: bool,
    pub lower_bound_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub n: usize,
    pub graph_vertices: usize,
    pub graph_edges: usize,
    pub optimal_max_out_degree: usize,
    /// `max out-degree(O*) / (2n)`.
    pub upper: f64,
    /// Family-restricted sup of the optimal learner at sample size `2n - 1`.
    pub optimal_family_risk: Option<FamilyRisk>,
    pub upper_bound_holds: bool,
    pub leave_one_out_holds: bool,
    pub learners: Vec<LearnerSandwich>,
    pub all_hold: bool,
}

/// Checks the lower/upper chain on `G_{2n}`: the optimal orientation beats
/// every learner-induced one, each learner's risk at its worst vertex is at
/// least a quarter of its normalized out-degree, and the optimal learner's
/// family-restricted risk at `2n - 1` samples is at most `max/(2n)`.
pub fn sandwich_bounds(
    instance: &ProblemInstance,
    n: usize,
    learners: &[&dyn Learner],
    graph: GraphConfig,
    solver: SolverConfig,
    cfg: &EvalConfig,
) -> Result<SandwichReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let g = GlobalOig::build(instance, 2 * n, graph)?;
    let (o, stats) = optimal_orientation(&g, solver)?;
    let star = stats.max_out_degree;
    let two_n = rational::int(2 * n as i64);
    let upper = rational::int(star as i64) / two_n.clone();

    let g = std::sync::Arc::new(g);
    let opt = OrientationLearner::new(g.clone(), o.clone())?;
    let mut leave_one_out_holds = true;
    for v in 0..g.num_vertices() {
        if leave_one_out_mistakes(instance, &opt, g.vertex(v))? > adv_outdegree(&g, &o, v)? {
            leave_one_out_holds = false;
        }
    }
    let (optimal_family_risk, upper_bound_holds) = if g.num_vertices() == 0 {
        (None, true)
    } else {
        let fam = sup_risk_over_family(instance, &opt, &vertex_family(&g), 2 * n - 1, cfg)?;
        let holds = match &fam.estimate.exact {
            Some(x) => *x <= upper,
            None => fam.estimate.value <= rational::to_f64(&upper) + 4.0 * fam.estimate.standard_error.unwrap_or(0.0),
        };
        (Some(fam), holds)
    };

    let mut rows = Vec::new();
    for &a in learners {
        let induced = learner_induced_orientation(instance, &g, a, cfg)?;
        let max = induced.stats.max_out_degree;
        let argmax = induced.stats.out_degrees.iter().position(|&d| d == max).unwrap_or(0);
        let bound = rational::ratio(max as i64, 8 * n as i64);
        let (risk, holds) = if g.num_vertices() == 0 {
            (RiskEstimate::exact(rational::zero()), true)
        } else {
            let p = DiscreteDistribution::new(uniform_vertex_law(g.vertex(argmax)))?;
            let r = exact_expected_risk(instance, a, &p, n, cfg)?;
            let holds = match &r.exact {
                Some(x) => *x >= bound,
                None => r.value + 4.0 * r.standard_error.unwrap_or(0.0) >= rational::to_f64(&bound),
            };
            (r, holds)
        };
        rows.push(LearnerSandwich {
            learner: a.name(),
            induced_max_out_degree: max,
            argmax_vertex: argmax,
            risk_at_argmax: risk,
            lower_bound: rational::to_f64(&bound),
            optimal_at_most_induced: star <= max,
            lower_bound_holds: holds,
        });
    }
    let all_hold = upper_bound_holds
        && leave_one_out_holds
        && rows.iter().all(|r| r.optimal_at_most_induced && r.lower_bound_holds);
    Ok(SandwichReport {
        n,
        graph_vertices: g.num_vertices(),
        graph_edges: g.edges().len(),
        optimal_max_out_degree: star,
        upper: rational::to_f64(&upper),
        optimal_family_risk,
        upper_bound_holds,
        leave_one_out_holds,
        learners: rows,
        all_hold,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinedBoundReport {
    pub n: usize,
    pub eps: String,
    pub sample_size: usize,
    pub induced_max_out_degree: usize,
    pub argmax_vertex: usize,
    pub risk_at_argmax: RiskEstimate,
    /// `eps * q * (max - 1) / (2 (2n - 1))` with `q = (1 - eps/(2n-1))^m`,
    /// which follows from the per-vertex counting argument.
    pub proven_bound: f64,
    pub proven_bound_holds: bool,
    /// `(eps/2) (max - 1) / (n - 1)`, reported for comparison; absent for
    /// `n = 1`.
    pub stated_bound: Option<f64>,
    pub stated_bound_holds: Option<bool>,
}

/// Weighted-law lower bound at `ceil(n/eps)` samples on `G_{2n}`.
pub fn refined_bound_report(
    instance: &ProblemInstance,
    n: usize,
    learner: &dyn Learner,
    eps: &Rational,
    graph: GraphConfig,
    cfg: &EvalConfig,
) -> Result<RefinedBoundReport> {
    let g = GlobalOig::build(instance, 2 * n, graph)?;
    let induced = weighted_learner_orientation(instance, &g, learner, eps, cfg)?;
    let m = weighted_sample_size(n, eps);
    let max = induced.stats.max_out_degree;
    let argmax = induced.stats.out_degrees.iter().position(|&d| d == max).unwrap_or(0);
    let risk = if g.num_vertices() == 0 {
        RiskEstimate::exact(rational::zero())
    } else {
        let p = DiscreteDistribution::new(weighted_vertex_law(g.vertex(argmax), eps))?;
        exact_expected_risk(instance, learner, &p, m, cfg)?
    };
    let excess = rational::int(max.saturating_sub(1) as i64);
    let spread = rational::int(2 * n as i64 - 1);
    let q = rational::pow(&(rational::one() - eps.clone() / spread.clone()), m);
    let proven = eps.clone() * q * excess.clone() / (rational::int(2) * spread);
    let holds = |b: &Rational| match &risk.exact {
        Some(x) => x >= b,
        None => risk.value + 4.0 * risk.standard_error.unwrap_or(0.0) >= rational::to_f64(b),
    };
    let stated = (n > 1).then(|| eps.clone() / rational::int(2) * excess / rational::int(n as i64 - 1));
    Ok(RefinedBoundReport {
        n,
        eps: eps.to_string(),
        sample_size: m,
        induced_max_out_degree: max,
        argmax_vertex: argmax,
        proven_bound: rational::to_f64(&proven),
        proven_bound_holds: holds(&proven),
        stated_bound: stated.as_ref().map(rational::to_f64),
        stated_bound_holds: stated.as_ref().map(holds),
        risk_at_argmax: risk,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm1Report {
    pub m: usize,
    pub blocks: usize,
    pub trials: usize,
    pub seed: u64,
    pub learner: String,
    pub hypotheses: usize,
    pub mean_local_risk: f64,
    pub standard_error: f64,
    /// `1/6 - 3 * standard_error`.
    pub threshold: f64,
    pub local_meets_bound: bool,
    pub optimal_max_risk: f64,
    pub optimal_zero_every_trial: bool,
    pub note: &'static str,
}

/// Separation between local learners and the optimal learner: per trial a
/// fresh perturbation map is drawn, the local learner trains on `m` draws
/// through a local view, and the optimal learner trains on none.
pub fn thm1_experiment(
    m: usize,
    trials: usize,
    seed: u64,
    learner: &dyn Learner,
    pattern_cap: usize,
) -> Result<Thm1Report> {
    if !learner.local() {
        return Err(Error::NotLocal(learner.name()));
    }
    if m == 0 || trials == 0 {
        return Err(Error::InvalidArgument("m and trials must be positive".into()));
    }
    let blocks = 3 * m;
    let patterns = separation_patterns(blocks, pattern_cap, seed)?;
    let results: Vec<(f64, Rational)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(f64, Rational)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64 + 1);
            let layout = SeparationLayout { blocks, coins: separation_coins(blocks, &mut rng) };
            let inst = separation_instance(&layout, &patterns)?;
            let p = layout.target_distribution();
            let atoms = p.atoms();
            let sample: Vec<Example> = (0..m)
                .map(|_| atoms[rand::Rng::gen_range(&mut rng, 0..atoms.len())].0)
                .collect();
            let local = robust_risk(&inst, &fit(learner, &inst, &sample)?, &p)?;
            let opt = optimal_learner_with(&inst, 1, GraphConfig::default(), SolverConfig::default())?;
            let opt_risk = robust_risk(&inst, &fit(&opt, &inst, &[])?, &p)?;
            Ok((local.to_f64(), opt_risk.into_inner()))
        })
        .collect::<Result<_>>()?;
    let t = trials as f64;
    let mean = results.iter().map(|r| r.0).sum::<f64>() / t;
    let var = if trials > 1 {
        results.iter().map(|r| (r.0 - mean).powi(2)).sum::<f64>() / (t - 1.0)
    } else {
        0.0
    };
    let se = (var / t).sqrt();
    let threshold = 1.0 / 6.0 - 3.0 * se;
    let optimal_max = results.iter().map(|r| rational::to_f64(&r.1)).fold(0.0, f64::max);
    Ok(Thm1Report {
        m,
        blocks,
        trials,
        seed,
        learner: learner.name(),
        hypotheses: patterns.len(),
        mean_local_risk: mean,
        standard_error: se,
        threshold,
        local_meets_bound: mean >= threshold,
        optimal_max_risk: optimal_max,
        optimal_zero_every_trial: results.iter().all(|r| r.1 == rational::zero()),
        note: "checks the named local learner only; the bound quantifies over all local learners",
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    Example1 { points: usize },
    Example2Discrete { d: usize, k: usize, hypothesis_cap: usize },
    Thm1 { m: usize, pattern_cap: usize },
}

pub fn fixture_generator(kind: &FixtureKind, seed: u64) -> Result<ProblemInstance> {
    match *kind {
        FixtureKind::Example1 { points } => fixtures::with_uniform_realizable(fixtures::example1(points)?),
        FixtureKind::Example2Discrete { d, k, hypothesis_cap } => {
            fixtures::with_uniform_realizable(fixtures::example2_discrete(d, k, hypothesis_cap, seed)?)
        }
        FixtureKind::Thm1 { m, pattern_cap } => Ok(fixtures::thm1(m, seed, pattern_cap)?.0),
    }
}

/// `m` i.i.d. draws from `dist`, each label flipped with probability
/// `noise`. Deterministic in `seed`.
pub fn draw_sample(dist: &DiscreteDistribution, m: usize, noise: f64, seed: u64) -> Result<Vec<Example>> {
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::InvalidArgument(format!("noise must lie in [0, 1], got {noise}")));
    }
    let atoms = dist.atoms();
    let weights: Vec<f64> = atoms.iter().map(|(_, w)| rational::to_f64(w)).collect();
    let index = WeightedIndex::new(&weights).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..m)
        .map(|_| {
            let e = atoms[index.sample(&mut rng)].0;
            if rand::Rng::gen_bool(&mut rng, noise) {
                e.flipped()
            } else {
                e
            }
        })
        .collect())
}

/// Samples are multisets; convenience for callers holding one.
pub fn multiset_risk(
    instance: &ProblemInstance,
    learner: &dyn Learner,
    train: &LabeledMultiset,
    dist: &DiscreteDistribution,
) -> Result<Rational> {
    Ok(robust_risk(instance, &fit(learner, instance, &train.examples())?, dist)?.into_inner())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{f1, f2};
    use crate::instance::Label;
    use crate::learners::{ConstantLearner, RermLearner};

    #[test]
    fn constant_on_positive_distribution_is_zero() {
        let f1 = f1();
        let d = DiscreteDistribution::uniform(&f1.examples(&[("a", 1), ("b", 1)]).unwrap()).unwrap();
        for n in 0..4 {
            let r = exact_expected_risk(&f1, &ConstantLearner(Label::Pos), &d, n, &EvalConfig::default()).unwrap();
            assert_eq!(r.exact, Some(rational::zero()));
        }
    }

    #[test]
    fn rerm_on_mixed_f1() {
        // Every hypothesis errs robustly on one of the two atoms (U = X), so
        // the expected risk is 1/2 whatever the sample.
        let f1 = f1();
        let d = DiscreteDistribution::uniform(&f1.examples(&[("a", 1), ("b", -1)]).unwrap()).unwrap();
        let r = exact_expected_risk(&f1, &RermLearner, &d, 1, &EvalConfig::default()).unwrap();
        assert!(r.exact.unwrap() >= rational::ratio(1, 2));
    }

    #[test]
    fn exchangeable_and_sequence_enumeration_agree() {
        let f2 = f2();
        let d = DiscreteDistribution::new(vec![
            (f2.examples(&[("1", -1)]).unwrap()[0], rational::ratio(1, 2)),
            (f2.examples(&[("2", 1)]).unwrap()[0], rational::ratio(1, 3)),
            (f2.examples(&[("3", 1)]).unwrap()[0], rational::ratio(1, 6)),
        ])
        .unwrap();
        let mut cache = TrainingCache::new(&f2, &RermLearner);
        let a = expectation(d.atoms(), 3, true, &EvalConfig::default(), |s| {
            Ok(robust_risk(&f2, cache.predictor(s)?, &d)?.into_inner())
        })
        .unwrap();
        let mut cache = TrainingCache::new(&f2, &RermLearner);
        let b = expectation(d.atoms(), 3, false, &EvalConfig::default(), |s| {
            Ok(robust_risk(&f2, cache.predictor(s)?, &d)?.into_inner())
        })
        .unwrap();
        assert_eq!(a.exact, b.exact);
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let f2 = f2();
        let d = DiscreteDistribution::uniform(&f2.examples(&[("1", -1), ("2", 1), ("3", 1)]).unwrap()).unwrap();
        let cfg = EvalConfig { exact_cap: 1, trials: 200, seed: Some(5), allow_monte_carlo: true };
        let a = exact_expected_risk(&f2, &RermLearner, &d, 2, &cfg).unwrap();
        let b = exact_expected_risk(&f2, &RermLearner, &d, 2, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mode, EstimateMode::MonteCarlo);
        let exact = exact_expected_risk(&f2, &RermLearner, &d, 2, &EvalConfig::default()).unwrap();
        assert!((a.value - exact.value).abs() <= 4.0 * a.standard_error.unwrap() + 1e-12);
        let no_seed = EvalConfig { exact_cap: 1, ..Default::default() };
        assert!(matches!(exact_expected_risk(&f2, &RermLearner, &d, 2, &no_seed), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn family_edge_cases() {
        let f1 = f1();
        let l = ConstantLearner(Label::Pos);
        assert!(sup_risk_over_family(&f1, &l, &[], 1, &EvalConfig::default()).is_err());
        let d = DiscreteDistribution::uniform(&f1.examples(&[("a", 1)]).unwrap()).unwrap();
        let single = sup_risk_over_family(&f1, &l, &[d.clone()], 1, &EvalConfig::default()).unwrap();
        assert_eq!(single.estimate, exact_expected_risk(&f1, &l, &d, 1, &EvalConfig::default()).unwrap());
        let bad = DiscreteDistribution::uniform(&f1.examples(&[("a", 1), ("b", -1)]).unwrap()).unwrap();
        assert!(matches!(sup_risk_over_family(&f1, &l, &[bad], 1, &EvalConfig::default()), Err(Error::NotRealizable(_))));
    }

    #[test]
    fn sandwich_on_fixtures() {
        let learners: Vec<Box<dyn Learner>> =
            vec![Box::new(RermLearner), Box::new(ConstantLearner(Label::Pos)), Box::new(ConstantLearner(Label::Neg))];
        let refs: Vec<&dyn Learner> = learners.iter().map(|b| b.as_ref()).collect();
        for (inst, n) in [(f1(), 1), (f2(), 1), (f2(), 2)] {
            let r = sandwich_bounds(&inst, n, &refs, GraphConfig::default(), SolverConfig::default(), &EvalConfig::default())
                .unwrap();
            assert!(r.all_hold, "{r:?}");
        }
    }

    #[test]
    fn thm1_small_run_is_reproducible() {
        let a = thm1_experiment(1, 4, 3, &RermLearner, 4096).unwrap();
        let b = thm1_experiment(1, 4, 3, &RermLearner, 4096).unwrap();
        assert_eq!(a.mean_local_risk, b.mean_local_risk);
        assert!(a.optimal_zero_every_trial);
        let opt = crate::learners::optimal_learner(&f1(), 1).unwrap();
        assert!(matches!(thm1_experiment(1, 1, 0, &opt, 16), Err(Error::NotLocal(_))));
    }

    #[test]
    fn fixture_kinds() {
        let f = fixture_generator(&FixtureKind::Example1 { points: 2 }, 0).unwrap();
        assert_eq!(f.hypotheses(), f1().hypotheses());
        let t = fixture_generator(&FixtureKind::Thm1 { m: 1, pattern_cap: 4096 }, 9).unwrap();
        assert_eq!(t.num_points(), 9);
        let e = fixture_generator(&FixtureKind::Example2Discrete { d: 1, k: 1, hypothesis_cap: 64 }, 1).unwrap();
        assert_eq!(e.num_points(), 4);
    }
}
