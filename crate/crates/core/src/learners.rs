//! Learners: trained maps from labeled samples to total predictors.
//!
//! Local learners only ever see the perturbation sets of their training
//! points; `fit` routes them through a [`LocalSample`] that rejects every
//! other query.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Example, Hypothesis, Label, LabeledMultiset, PointId, ProblemInstance};
use crate::oig::{build_classical_oig, ClassicalOig, GlobalOig, GraphConfig};
use crate::orient::{optimal_orientation, Orientation, SolverConfig};
use crate::risk::{robust_mistake, Classifier};

/// What a learner may know about the instance.
pub trait PerturbationView {
    fn num_points(&self) -> usize;
    fn hypotheses(&self) -> &[Hypothesis];
    fn perturbation(&self, x: PointId) -> Result<&[PointId]>;
    /// `{x : z ∈ U(x)}`.
    fn inverse_perturbation(&self, z: PointId) -> Result<&[PointId]>;
}

impl PerturbationView for ProblemInstance {
    fn num_points(&self) -> usize {
        ProblemInstance::num_points(self)
    }

    fn hypotheses(&self) -> &[Hypothesis] {
        ProblemInstance::hypotheses(self)
    }

    fn perturbation(&self, x: PointId) -> Result<&[PointId]> {
        self.check_point(x)?;
        Ok(ProblemInstance::perturbation(self, x))
    }

    fn inverse_perturbation(&self, z: PointId) -> Result<&[PointId]> {
        self.check_point(z)?;
        Ok(ProblemInstance::inverse_perturbation(self, z))
    }
}

/// The training sample together with snapshots of `U` at its points.
#[derive(Clone, Debug)]
pub struct LocalSample<'a> {
    instance: &'a ProblemInstance,
    entries: Vec<(Example, Vec<PointId>)>,
}

impl LocalSample<'_> {
    pub fn entries(&self) -> &[(Example, Vec<PointId>)] {
        &self.entries
    }
}

pub fn local_view<'a>(sample: &[Example], instance: &'a ProblemInstance) -> Result<LocalSample<'a>> {
    let mut entries = Vec::with_capacity(sample.len());
    for &e in sample {
        instance.check_point(e.point)?;
        entries.push((e, instance.perturbation(e.point).to_vec()));
    }
    Ok(LocalSample { instance, entries })
}

impl PerturbationView for LocalSample<'_> {
    fn num_points(&self) -> usize {
        self.instance.num_points()
    }

    fn hypotheses(&self) -> &[Hypothesis] {
        self.instance.hypotheses()
    }

    fn perturbation(&self, x: PointId) -> Result<&[PointId]> {
        self.instance.check_point(x)?;
        self.entries
            .iter()
            .find(|(e, _)| e.point == x)
            .map(|(_, u)| u.as_slice())
            .ok_or_else(|| Error::LocalityViolation(self.instance.point_name(x).to_string()))
    }

    fn inverse_perturbation(&self, z: PointId) -> Result<&[PointId]> {
        self.instance.check_point(z)?;
        Err(Error::LocalityViolation(self.instance.point_name(z).to_string()))
    }
}

/// A total labeling of the instance's points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Predictor {
    pub labels: Vec<Label>,
}

impl Classifier for Predictor {
    fn predict(&self, x: PointId) -> Label {
        self.labels[x.0]
    }
}

impl Predictor {
    pub fn from_hypothesis(h: &Hypothesis) -> Self {
        Predictor { labels: h.labels.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LearnerTraits {
    pub name: String,
    /// Declared training size, if fixed.
    pub sample_size: Option<usize>,
    /// Output depends only on the multiset of training examples.
    pub exchangeable: bool,
    /// Sees `U` only at training points.
    pub local: bool,
}

pub trait Learner: Send + Sync {
    fn name(&self) -> String;
    fn sample_size(&self) -> Option<usize> {
        None
    }
    fn exchangeable(&self) -> bool {
        true
    }
    fn local(&self) -> bool;
    fn train(&self, view: &dyn PerturbationView, sample: &[Example]) -> Result<Predictor>;

    fn traits(&self) -> LearnerTraits {
        LearnerTraits {
            name: self.name(),
            sample_size: self.sample_size(),
            exchangeable: self.exchangeable(),
            local: self.local(),
        }
    }
}

/// Trains `learner`, handing local learners only a [`LocalSample`].
pub fn fit(learner: &dyn Learner, instance: &ProblemInstance, sample: &[Example]) -> Result<Predictor> {
    if learner.local() {
        learner.train(&local_view(sample, instance)?, sample)
    } else {
        learner.train(instance, sample)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConstantLearner(pub Label);

impl Learner for ConstantLearner {
    fn name(&self) -> String {
        format!("constant:{}", self.0)
    }

    fn local(&self) -> bool {
        true
    }

    fn train(&self, view: &dyn PerturbationView, _sample: &[Example]) -> Result<Predictor> {
        Ok(Predictor { labels: vec![self.0; view.num_points()] })
    }
}

/// Robust empirical risk minimization: the first hypothesis with the fewest
/// robust mistakes on the sample.
#[derive(Clone, Copy, Debug, Default)]
pub struct RermLearner;

pub fn rerm_index(view: &dyn PerturbationView, sample: &[Example]) -> Result<usize> {
    let hyps = view.hypotheses();
    if hyps.is_empty() {
        return Err(Error::EmptyClass);
    }
    let mut best = (usize::MAX, 0);
    for (i, h) in hyps.iter().enumerate() {
        let mut mistakes = 0;
        for &e in sample {
            if view.perturbation(e.point)?.iter().any(|&z| h.label(z) != e.label) {
                mistakes += 1;
            }
        }
        if mistakes < best.0 {
            best = (mistakes, i);
        }
    }
    Ok(best.1)
}

impl Learner for RermLearner {
    fn name(&self) -> String {
        "rerm".into()
    }

    fn local(&self) -> bool {
        true
    }

    fn train(&self, view: &dyn PerturbationView, sample: &[Example]) -> Result<Predictor> {
        Ok(Predictor::from_hypothesis(&view.hypotheses()[rerm_index(view, sample)?]))
    }
}

/// Classical one-inclusion-graph prediction: per test point, orient the
/// graph on training points plus the test point to minimize the maximum
/// out-degree and follow the edge at the test coordinate. Ignores `U`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClassicalOigLearner;

/// Heads of an orientation of `g` minimizing the maximum (plain) out-degree.
pub fn classical_min_outdegree(g: &ClassicalOig) -> Vec<usize> {
    let nv = g.vertices.len();
    let mut deg = vec![0usize; nv];
    for &(u, v, _) in &g.edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    let (mut lo, mut hi) = (0, deg.iter().copied().max().unwrap_or(0));
    let mut best = tails_within(g, hi).expect("max degree is always feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match tails_within(g, mid) {
            Some(t) => {
                best = t;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    g.edges.iter().zip(best).map(|(&(u, v, _), tail)| if tail == u { v } else { u }).collect()
}

/// Assigns each edge a tail endpoint with at most `k` tails per vertex.
fn tails_within(g: &ClassicalOig, k: usize) -> Option<Vec<usize>> {
    let mut tail: Vec<usize> = vec![usize::MAX; g.edges.len()];
    let mut load = vec![0usize; g.vertices.len()];
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); g.vertices.len()];
    fn augment(
        e: usize,
        g: &ClassicalOig,
        k: usize,
        tail: &mut [usize],
        load: &mut [usize],
        by_vertex: &mut [Vec<usize>],
        seen: &mut [bool],
    ) -> bool {
        let (u, v, _) = g.edges[e];
        for w in [u, v] {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if load[w] < k {
                load[w] += 1;
                tail[e] = w;
                by_vertex[w].push(e);
                return true;
            }
            for i in 0..by_vertex[w].len() {
                let f = by_vertex[w][i];
                let (fu, fv, _) = g.edges[f];
                let other = if fu == w { fv } else { fu };
                if seen[other] {
                    continue;
                }
                by_vertex[w].remove(i);
                load[w] -= 1;
                if augment(f, g, k, tail, load, by_vertex, seen) {
                    tail[e] = w;
                    load[w] += 1;
                    by_vertex[w].push(e);
                    return true;
                }
                by_vertex[w].insert(i, f);
                load[w] += 1;
            }
        }
        false
    }
    for e in 0..g.edges.len() {
        let mut seen = vec![false; g.vertices.len()];
        if !augment(e, g, k, &mut tail, &mut load, &mut by_vertex, &mut seen) {
            return None;
        }
    }
    Some(tail)
}

impl ClassicalOigLearner {
    fn predict_one(&self, sample: &[Example], x: PointId, hyps: &ProblemInstance) -> Label {
        let mut points: Vec<PointId> = sample.iter().map(|e| e.point).collect();
        points.sort_unstable();
        points.dedup();
        let test = match points.binary_search(&x) {
            Ok(i) => i,
            Err(i) => {
                points.insert(i, x);
                i
            }
        };
        let g = build_classical_oig(hyps, &points).expect("non-empty point list");
        let disagreements = |v: &[Label]| {
            sample.iter().filter(|e| v[points.binary_search(&e.point).expect("present")] != e.label).count()
        };
        let best = g.vertices.iter().map(|v| disagreements(v)).min().expect("non-empty class");
        let candidates: Vec<usize> = (0..g.vertices.len()).filter(|&i| disagreements(&g.vertices[i]) == best).collect();
        let first = &g.vertices[candidates[0]];
        if candidates.iter().all(|&i| g.vertices[i][test] == first[test]) {
            return first[test];
        }
        let heads = classical_min_outdegree(&g);
        for (i, &(u, v, c)) in g.edges.iter().enumerate() {
            if c == test && candidates.contains(&u) && candidates.contains(&v) {
                return g.vertices[heads[i]][test];
            }
        }
        first[test]
    }
}

impl Learner for ClassicalOigLearner {
    fn name(&self) -> String {
        "classical-oig".into()
    }

    fn local(&self) -> bool {
        true
    }

    fn train(&self, view: &dyn PerturbationView, sample: &[Example]) -> Result<Predictor> {
        if view.hypotheses().is_empty() {
            return Err(Error::EmptyClass);
        }
        // Only the truth tables are used; a table-only instance carries them.
        let n = view.num_points();
        let tables = ProblemInstance::new(
            (0..n).map(|i| i.to_string()).collect(),
            view.hypotheses().iter().map(|h| (h.name().to_string(), h.labels.clone())).collect(),
            (0..n).map(|i| vec![PointId(i)]).collect(),
        )?;
        let labels = (0..n).map(|x| self.predict_one(sample, PointId(x), &tables)).collect();
        Ok(Predictor { labels })
    }
}

/// The learner read off an orientation of `G_n`: trained on `n - 1`
/// examples, it labels a test point `z` by the side of the cross edges at
/// `z` that all point its way.
pub struct OrientationLearner {
    graph: Arc<GlobalOig>,
    orientation: Orientation,
    edge_at: HashMap<(usize, usize, PointId), usize>,
    cache: Mutex<HashMap<LabeledMultiset, Predictor>>,
}

impl OrientationLearner {
    pub fn new(graph: Arc<GlobalOig>, orientation: Orientation) -> Result<Self> {
        let report = crate::orient::validate_orientation(&graph, &orientation);
        if !report.ok {
            return Err(Error::InvalidOrientation(format!("{:?}", report.violations[0])));
        }
        let edge_at = graph.edges().iter().enumerate().map(|(i, e)| ((e.a, e.b, e.witness), i)).collect();
        Ok(OrientationLearner { graph, orientation, edge_at, cache: Mutex::new(HashMap::new()) })
    }

    pub fn graph(&self) -> &GlobalOig {
        &self.graph
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    fn extensions(&self, w: &LabeledMultiset, xs: &[PointId], y: Label) -> Vec<usize> {
        xs.iter().filter_map(|&x| self.graph.vertex_index(&w.insert_one(Example::new(x, y)))).collect()
    }

    /// Whether every cross edge at witness `z` between `v` and `others` is
    /// directed toward `v`.
    fn wins(&self, v: usize, others: &[usize], z: PointId) -> bool {
        others.iter().all(|&u| {
            let key = (v.min(u), v.max(u), z);
            match self.edge_at.get(&key) {
                Some(&e) => self.orientation.points_to(e, v),
                None => {
                    debug_assert!(false, "cross vertices must be joined by an edge at the test point");
                    false
                }
            }
        })
    }

    fn label_at(&self, view: &dyn PerturbationView, w: &LabeledMultiset, z: PointId) -> Result<Label> {
        let xs = view.inverse_perturbation(z)?;
        let pos = self.extensions(w, xs, Label::Pos);
        let neg = self.extensions(w, xs, Label::Neg);
        let pos_wins = pos.iter().any(|&v| self.wins(v, &neg, z));
        let neg_wins = neg.iter().any(|&v| self.wins(v, &pos, z));
        debug_assert!(!(pos_wins && neg_wins && !pos.is_empty() && !neg.is_empty()), "both labels win at a test point");
        Ok(if pos_wins {
            Label::Pos
        } else if neg_wins {
            Label::Neg
        } else {
            Label::Pos
        })
    }
}

impl Learner for OrientationLearner {
    fn name(&self) -> String {
        format!("orientation(n={})", self.graph.n())
    }

    fn sample_size(&self) -> Option<usize> {
        Some(self.graph.n() - 1)
    }

    fn local(&self) -> bool {
        false
    }

    fn train(&self, view: &dyn PerturbationView, sample: &[Example]) -> Result<Predictor> {
        let expected = self.graph.n() - 1;
        if sample.len() != expected {
            return Err(Error::SampleSize { expected, got: sample.len() });
        }
        let w = LabeledMultiset::from_examples(sample.iter().copied());
        if let Some(p) = self.cache.lock().expect("cache lock").get(&w) {
            return Ok(p.clone());
        }
        let labels = (0..view.num_points()).map(|z| self.label_at(view, &w, PointId(z))).collect::<Result<_>>()?;
        let p = Predictor { labels };
        self.cache.lock().expect("cache lock").insert(w, p.clone());
        Ok(p)
    }
}

/// The learner induced by an optimal orientation of `G_n`; it trains on
/// `n - 1` examples.
pub fn optimal_learner(instance: &ProblemInstance, n: usize) -> Result<OrientationLearner> {
    optimal_learner_with(instance, n, GraphConfig::default(), SolverConfig::default())
}

pub fn optimal_learner_with(
    instance: &ProblemInstance,
    n: usize,
    graph: GraphConfig,
    solver: SolverConfig,
) -> Result<OrientationLearner> {
    let g = GlobalOig::build(instance, n, graph)?;
    let (o, _) = optimal_orientation(&g, solver)?;
    OrientationLearner::new(Arc::new(g), o)
}

/// Number of positions `i` (with multiplicity) at which the learner trained
/// on `v` minus position `i` errs robustly on the held-out example.
pub fn leave_one_out_mistakes(instance: &ProblemInstance, learner: &dyn Learner, v: &LabeledMultiset) -> Result<usize> {
    let mut count = 0;
    for &(e, c) in v.entries() {
        let rest = v.remove_one(e).expect("present").examples();
        if robust_mistake(instance, &fit(learner, instance, &rest)?, e) {
            count += c as usize;
        }
    }
    Ok(count)
}

pub const LEARNER_NAMES: [&str; 5] = ["optimal", "rerm", "classical-oig", "constant:+1", "constant:-1"];

/// Looks a learner up by its registry name. `training_size` is only used by
/// `optimal`, whose graph has size `training_size + 1`.
pub fn learner_by_name(name: &str, instance: &ProblemInstance, training_size: usize) -> Result<Box<dyn Learner>> {
    Ok(match name {
        "optimal" => Box::new(optimal_learner(instance, training_size + 1)?),
        "rerm" => Box::new(RermLearner),
        "classical-oig" => Box::new(ClassicalOigLearner),
        "constant:+1" | "constant:1" => Box::new(ConstantLearner(Label::Pos)),
        "constant:-1" => Box::new(ConstantLearner(Label::Neg)),
        other => return Err(Error::UnknownLearner(other.to_string())),
    })
}
