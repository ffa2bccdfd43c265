//! Robust α-Boost over a training sequence, the sample-compression bound,
//! the boosted realizable learner and the agnostic reduction built on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Example, Label, ProblemInstance};
use crate::learners::{optimal_learner_with, Learner, OrientationLearner, PerturbationView, Predictor};
use crate::oig::GraphConfig;
use crate::orient::SolverConfig;

/// Step size used unless the caller picks another.
pub const DEFAULT_ALPHA: f64 = 0.125;
/// Largest robust risk a weak hypothesis may have under the round's
/// distribution.
pub const WEAK_RISK: f64 = 1.0 / 3.0;
pub const DEFAULT_TUPLE_BUDGET: u64 = 1_000_000;
const TOL: f64 = 1e-12;

/// `1 + ⌈48 ln s⌉` rounds for a sample of `s` examples.
pub fn default_rounds(s: usize) -> usize {
    if s <= 1 {
        return 1;
    }
    1 + (48.0 * (s as f64).ln()).ceil() as usize
}

fn mistake(view: &dyn PerturbationView, p: &Predictor, e: Example) -> Result<bool> {
    Ok(view.perturbation(e.point)?.iter().any(|&z| p.labels[z.0] != e.label))
}

/// How a weak hypothesis can be rebuilt from the training sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeakKey {
    /// Indices into the sequence the hypothesis was trained on.
    Tuple(Vec<usize>),
    /// A hypothesis of the class, by index.
    Hypothesis(usize),
}

#[derive(Clone, Debug)]
pub struct WeakHypothesis {
    pub key: WeakKey,
    pub predictor: Predictor,
}

pub trait WeakLearner {
    fn name(&self) -> String;
    /// A hypothesis with robust risk at most 1/3 under `weights` over
    /// `sample`, or a weak-learning failure tagged with `round`.
    fn weak(&self, view: &dyn PerturbationView, sample: &[Example], weights: &[f64], round: usize)
        -> Result<WeakHypothesis>;
    fn reconstruct(&self, view: &dyn PerturbationView, sample: &[Example], key: &WeakKey) -> Result<Predictor>;
}

fn weighted_risk(view: &dyn PerturbationView, p: &Predictor, sample: &[Example], weights: &[f64]) -> Result<f64> {
    let mut r = 0.0;
    for (&e, &w) in sample.iter().zip(weights) {
        if mistake(view, p, e)? {
            r += w;
        }
    }
    Ok(r)
}

/// Searches training tuples of the optimal learner at size `m0` in
/// lexicographic order (nondecreasing indices, repetition allowed) for the
/// first whose predictor is weak under the round's distribution.
pub struct WeakFromOptimal {
    learner: OrientationLearner,
    m0: usize,
    pub budget: u64,
}

impl WeakFromOptimal {
    pub fn new(instance: &ProblemInstance, m0: usize) -> Result<Self> {
        Self::with_config(instance, m0, GraphConfig::default(), SolverConfig::default())
    }

    pub fn with_config(instance: &ProblemInstance, m0: usize, graph: GraphConfig, solver: SolverConfig) -> Result<Self> {
        Ok(WeakFromOptimal {
            learner: optimal_learner_with(instance, m0 + 1, graph, solver)?,
            m0,
            budget: DEFAULT_TUPLE_BUDGET,
        })
    }

    pub fn m0(&self) -> usize {
        self.m0
    }

    fn train_tuple(&self, view: &dyn PerturbationView, sample: &[Example], tuple: &[usize]) -> Result<Predictor> {
        let s: Vec<Example> = tuple.iter().map(|&i| sample[i]).collect();
        self.learner.train(view, &s)
    }
}

impl WeakLearner for WeakFromOptimal {
    fn name(&self) -> String {
        format!("optimal-tuples(m0={})", self.m0)
    }

    fn weak(
        &self,
        view: &dyn PerturbationView,
        sample: &[Example],
        weights: &[f64],
        round: usize,
    ) -> Result<WeakHypothesis> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut tuple = vec![0usize; self.m0];
        let mut searched = 0u64;
        loop {
            if searched >= self.budget {
                return Err(Error::WeakLearningFailure { round, searched });
            }
            searched += 1;
            let p = self.train_tuple(view, sample, &tuple)?;
            if weighted_risk(view, &p, sample, weights)? <= WEAK_RISK + TOL {
                return Ok(WeakHypothesis { key: WeakKey::Tuple(tuple), predictor: p });
            }
            // Next nondecreasing tuple.
            let mut i = self.m0;
            loop {
                if i == 0 {
                    return Err(Error::WeakLearningFailure { round, searched });
                }
                i -= 1;
                if tuple[i] + 1 < sample.len() {
                    let v = tuple[i] + 1;
                    tuple[i..].iter_mut().for_each(|t| *t = v);
                    break;
                }
            }
        }
    }

    fn reconstruct(&self, view: &dyn PerturbationView, sample: &[Example], key: &WeakKey) -> Result<Predictor> {
        match key {
            WeakKey::Tuple(t) if t.len() == self.m0 && t.iter().all(|&i| i < sample.len()) => {
                self.train_tuple(view, sample, t)
            }
            other => Err(Error::InvalidArgument(format!("not a tuple of length {}: {other:?}", self.m0))),
        }
    }
}

/// Picks the hypothesis of least weighted robust risk.
#[derive(Clone, Copy, Debug, Default)]
pub struct RermWeak;

impl WeakLearner for RermWeak {
    fn name(&self) -> String {
        "rerm".into()
    }

    fn weak(
        &self,
        view: &dyn PerturbationView,
        sample: &[Example],
        weights: &[f64],
        round: usize,
    ) -> Result<WeakHypothesis> {
        let hyps = view.hypotheses();
        if hyps.is_empty() {
            return Err(Error::EmptyClass);
        }
        let mut best = (f64::INFINITY, 0);
        for (i, h) in hyps.iter().enumerate() {
            let r = weighted_risk(view, &Predictor::from_hypothesis(h), sample, weights)?;
            if r < best.0 - TOL {
                best = (r, i);
            }
        }
        if best.0 > WEAK_RISK + TOL {
            return Err(Error::WeakLearningFailure { round, searched: hyps.len() as u64 });
        }
        Ok(WeakHypothesis { key: WeakKey::Hypothesis(best.1), predictor: Predictor::from_hypothesis(&hyps[best.1]) })
    }

    fn reconstruct(&self, view: &dyn PerturbationView, _sample: &[Example], key: &WeakKey) -> Result<Predictor> {
        match key {
            WeakKey::Hypothesis(i) if *i < view.hypotheses().len() => Ok(Predictor::from_hypothesis(&view.hypotheses()[*i])),
            other => Err(Error::InvalidArgument(format!("not a hypothesis index: {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub key: WeakKey,
    /// Rounds so far (before this one) in which each example was robustly
    /// correct. The round's distribution is proportional to
    /// `exp(-2α · count)`.
    pub correct_counts: Vec<u32>,
    /// FNV-1a hash of `correct_counts`.
    pub snapshot_hash: String,
    pub weak_risk: f64,
    /// Smallest fraction of rounds so far (this one included) in which an
    /// example was robustly correct.
    pub margin: f64,
    /// The guaranteed floor for that fraction.
    pub margin_floor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostRun {
    pub rounds: usize,
    pub alpha: f64,
    pub weak_learner: String,
    pub records: Vec<RoundRecord>,
    /// Weak predictors by round; rebuilt by [`replay`].
    #[serde(skip)]
    pub weak: Vec<Predictor>,
    pub majority: Vec<Label>,
    pub margin_ok: bool,
}

impl BoostRun {
    pub fn predictor(&self) -> Predictor {
        Predictor { labels: self.majority.clone() }
    }

    /// All training tuples in round order.
    pub fn certificate(&self) -> Vec<usize> {
        self.records
            .iter()
            .flat_map(|r| match &r.key {
                WeakKey::Tuple(t) => t.clone(),
                WeakKey::Hypothesis(_) => Vec::new(),
            })
            .collect()
    }
}

/// Normalized distribution for the given correctness counts.
pub fn distribution(counts: &[u32], alpha: f64) -> Vec<f64> {
    let min = counts.iter().copied().min().unwrap_or(0);
    // Shifting by the minimum count keeps the largest weight at 1.
    let raw: Vec<f64> = counts.iter().map(|&c| (-2.0 * alpha * (c - min) as f64).exp()).collect();
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / z).collect()
}

fn fnv1a(counts: &[u32]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in counts {
        for b in c.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}

/// Floor on the round-averaged correctness after `t` rounds over `s`
/// examples, given every weak hypothesis had risk at most 1/3.
pub fn margin_floor(s: usize, t: usize, alpha: f64) -> f64 {
    2.0 / 3.0 - 2.0 * alpha / 3.0 - (s as f64).ln() / (2.0 * alpha * t as f64)
}

fn majority_vote(weak: &[Predictor], points: usize) -> Vec<Label> {
    (0..points)
        .map(|z| {
            let pos = weak.iter().filter(|p| p.labels[z] == Label::Pos).count();
            if 2 * pos >= weak.len() {
                Label::Pos
            } else {
                Label::Neg
            }
        })
        .collect()
}

/// Runs `rounds` rounds of multiplicative reweighting: examples the weak
/// hypothesis gets robustly right have their weight multiplied by
/// `exp(-2α)`.
pub fn alpha_boost(
    view: &dyn PerturbationView,
    sample: &[Example],
    weak: &dyn WeakLearner,
    rounds: usize,
    alpha: f64,
) -> Result<BoostRun> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if rounds == 0 || !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("rounds={rounds}, alpha={alpha}")));
    }
    let mut counts = vec![0u32; sample.len()];
    let mut records = Vec::with_capacity(rounds);
    let mut predictors = Vec::with_capacity(rounds);
    let mut margin_ok = true;
    for round in 0..rounds {
        let d = distribution(&counts, alpha);
        let h = weak.weak(view, sample, &d, round)?;
        let risk = weighted_risk(view, &h.predictor, sample, &d)?;
        let before = counts.clone();
        for (c, &e) in counts.iter_mut().zip(sample) {
            if !mistake(view, &h.predictor, e)? {
                *c += 1;
            }
        }
        let t = round + 1;
        let margin = counts.iter().copied().min().unwrap_or(0) as f64 / t as f64;
        let floor = margin_floor(sample.len(), t, alpha);
        margin_ok &= margin >= floor - TOL;
        records.push(RoundRecord {
            round,
            key: h.key,
            snapshot_hash: fnv1a(&before),
            correct_counts: before,
            weak_risk: risk,
            margin,
            margin_floor: floor,
        });
        predictors.push(h.predictor);
    }
    let majority = majority_vote(&predictors, view.num_points());
    Ok(BoostRun { rounds, alpha, weak_learner: weak.name(), records, weak: predictors, majority, margin_ok })
}

/// Rebuilds every weak hypothesis from its key and the majority vote from
/// those; fails if anything differs from the stored run.
pub fn replay(view: &dyn PerturbationView, sample: &[Example], weak: &dyn WeakLearner, run: &BoostRun) -> Result<bool> {
    let mut predictors = Vec::with_capacity(run.records.len());
    for r in &run.records {
        predictors.push(weak.reconstruct(view, sample, &r.key)?);
    }
    if !run.weak.is_empty() && run.weak != predictors {
        return Ok(false);
    }
    Ok(majority_vote(&predictors, view.num_points()) == run.majority)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressionBound {
    pub k: usize,
    pub m: usize,
    pub delta: f64,
    pub value: f64,
}

/// `(k ln m + ln(1/δ)) / (m - k)`: the risk bound for a predictor rebuilt
/// from `k` of `m` training points with no robust mistakes on the sample.
pub fn compression_bound(k: usize, m: usize, delta: f64) -> Result<CompressionBound> {
    if m <= k {
        return Err(Error::SampleTooSmall { required: k as u64 + 1, got: m });
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1], got {delta}")));
    }
    let value = (k as f64 * (m as f64).ln() + (1.0 / delta).ln()) / (m - k) as f64;
    Ok(CompressionBound { k, m, delta, value })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostedOutput {
    pub run: BoostRun,
    pub certificate: Vec<usize>,
    /// `None` when the certificate is not smaller than the sample.
    pub bound: Option<CompressionBound>,
    pub empirical_mistakes: usize,
}

/// α-Boost over tuples of the optimal learner at size `m0`, with the
/// default rounds and step.
pub struct BoostedLearner {
    weak: WeakFromOptimal,
    pub alpha: f64,
    pub delta: f64,
    /// Overrides the default round count.
    pub rounds: Option<usize>,
}

/// The boosted learner for robustly realizable samples.
pub fn realizable_boosted_learner(instance: &ProblemInstance, m0: usize) -> Result<BoostedLearner> {
    Ok(BoostedLearner { weak: WeakFromOptimal::new(instance, m0)?, alpha: DEFAULT_ALPHA, delta: 0.05, rounds: None })
}

impl BoostedLearner {
    pub fn with_weak(weak: WeakFromOptimal) -> Self {
        BoostedLearner { weak, alpha: DEFAULT_ALPHA, delta: 0.05, rounds: None }
    }

    pub fn m0(&self) -> usize {
        self.weak.m0
    }

    pub fn weak_learner(&self) -> &WeakFromOptimal {
        &self.weak
    }

    pub fn run(&self, view: &dyn PerturbationView, sample: &[Example]) -> Result<BoostedOutput> {
        let rounds = self.rounds.unwrap_or_else(|| default_rounds(sample.len()));
        let run = alpha_boost(view, sample, &self.weak, rounds, self.alpha)?;
        let certificate = run.certificate();
        let bound = compression_bound(certificate.len(), sample.len(), self.delta).ok();
        let p = run.predictor();
        let mut empirical_mistakes = 0;
        for &e in sample {
            empirical_mistakes += mistake(view, &p, e)? as usize;
        }
        Ok(BoostedOutput { run, certificate, bound, empirical_mistakes })
    }
}

impl Learner for BoostedLearner {
    fn name(&self) -> String {
        format!("boosted(m0={})", self.weak.m0)
    }

    fn exchangeable(&self) -> bool {
        false
    }

    fn local(&self) -> bool {
        false
    }

    fn train(&self, view: &dyn PerturbationView, sample: &[Example]) -> Result<Predictor> {
        Ok(self.run(view, sample)?.run.predictor())
    }
}

/// Robust mistakes of each hypothesis on `sample`.
fn hypothesis_mistakes(view: &dyn PerturbationView, sample: &[Example]) -> Result<Vec<usize>> {
    view.hypotheses()
        .iter()
        .map(|h| {
            let p = Predictor::from_hypothesis(h);
            let mut c = 0;
            for &e in sample {
                c += mistake(view, &p, e)? as usize;
            }
            Ok(c)
        })
        .collect()
}

/// A longest subsequence of `sample` on which one hypothesis makes no
/// robust mistakes, with that hypothesis. Order is preserved.
pub fn max_realizable_subsequence(view: &dyn PerturbationView, sample: &[Example]) -> Result<(Vec<Example>, Option<usize>)> {
    let mistakes = hypothesis_mistakes(view, sample)?;
    let Some((h, _)) = mistakes.iter().enumerate().min_by_key(|&(i, &m)| (m, i)) else {
        return Ok((Vec::new(), None));
    };
    let p = Predictor::from_hypothesis(&view.hypotheses()[h]);
    let mut kept = Vec::new();
    for &e in sample {
        if !mistake(view, &p, e)? {
            kept.push(e);
        }
    }
    Ok((kept, Some(h)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgnosticBound {
    pub m: usize,
    pub m0: usize,
    pub rounds: usize,
    pub delta: f64,
    /// Excess over the best empirical robust risk in the class.
    pub value: f64,
}

/// `sqrt((m0 T ln m + ln(2/δ)) / (2m - 2 m0 T))` with `T = 1 + ⌈48 ln m⌉`;
/// requires `m > 2 m0 T`.
pub fn agnostic_bound(m: usize, m0: usize, delta: f64) -> Result<AgnosticBound> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1], got {delta}")));
    }
    let t = default_rounds(m);
    let k = m0 * t;
    if m <= 2 * k {
        return Err(Error::SampleTooSmall { required: 2 * k as u64 + 1, got: m });
    }
    let mf = m as f64;
    let value = ((k as f64 * mf.ln() + (2.0 / delta).ln()) / (2.0 * mf - 2.0 * k as f64)).sqrt();
    Ok(AgnosticBound { m, m0, rounds: t, delta, value })
}

/// Smallest sample size meeting the agnostic precondition for `m0`.
pub fn agnostic_min_sample(m0: usize) -> usize {
    (1..).find(|&m| m > 2 * m0 * default_rounds(m)).expect("unbounded search")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgnosticOutput {
    pub predictor: Vec<Label>,
    /// The realizable subsequence with repeats removed, which is what gets
    /// boosted.
    pub boosted_on: Vec<Example>,
    pub realizable_size: usize,
    pub boosted: Option<BoostedOutput>,
    pub empirical_mistakes: usize,
    pub best_in_class_mistakes: usize,
    pub bound: AgnosticBound,
}

/// Keeps the largest robustly realizable subsequence, drops repeats and
/// boosts on what is left.
pub struct AgnosticLearner {
    boosted: BoostedLearner,
}

pub fn agnostic_learner(instance: &ProblemInstance, m0: usize) -> Result<AgnosticLearner> {
    Ok(AgnosticLearner { boosted: realizable_boosted_learner(instance, m0)? })
}

impl AgnosticLearner {
    pub fn with_boosted(boosted: BoostedLearner) -> Self {
        AgnosticLearner { boosted }
    }

    pub fn run(&self, view: &dyn PerturbationView, sample: &[Example]) -> Result<AgnosticOutput> {
        let bound = agnostic_bound(sample.len(), self.boosted.m0(), self.boosted.delta)?;
        let (kept, _) = max_realizable_subsequence(view, sample)?;
        let mut distinct = Vec::new();
        for &e in &kept {
            if !distinct.contains(&e) {
                distinct.push(e);
            }
        }
        let (labels, boosted) = if distinct.is_empty() {
            (vec![Label::Pos; view.num_points()], None)
        } else {
            let out = self.boosted.run(view, &distinct)?;
            (out.run.majority.clone(), Some(out))
        };
        let p = Predictor { labels };
        let mut empirical_mistakes = 0;
        for &e in sample {
            empirical_mistakes += mistake(view, &p, e)? as usize;
        }
        let best_in_class_mistakes = hypothesis_mistakes(view, sample)?.into_iter().min().unwrap_or(sample.len());
        Ok(AgnosticOutput {
            predictor: p.labels,
            boosted_on: distinct,
            realizable_size: kept.len(),
            boosted,
            empirical_mistakes,
            best_in_class_mistakes,
            bound,
        })
    }
}

impl Learner for AgnosticLearner {
    fn name(&self) -> String {
        format!("agnostic(m0={})", self.boosted.m0())
    }

    fn exchangeable(&self) -> bool {
        false
    }

    fn local(&self) -> bool {
        false
    }

    fn train(&self, view: &dyn PerturbationView, sample: &[Example]) -> Result<Predictor> {
        Ok(Predictor { labels: self.run(view, sample)?.predictor })
    }
}
