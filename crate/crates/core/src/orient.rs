//! Orientations of the global one-inclusion graph.
//!
//! The exact solver works on *slots*: a slot is a pair (vertex, element that
//! witnesses an edge). A slot is clean when all of its edges point into its
//! vertex, and the adversarial out-degree of a vertex is its number of
//! non-clean slots. Every edge joins two slots, and they cannot both be
//! clean. So an orientation with max out-degree at most `k` exists iff
//! there is a set of pairwise non-adjacent clean slots that leaves at most
//! `k` broken slots at every vertex.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{expectation, EvalConfig};
use crate::instance::{Example, LabeledMultiset, ProblemInstance};
use crate::learners::{fit, Learner, Predictor};
use crate::oig::GlobalOig;
use crate::rational::{self, Rational};
use crate::risk::robust_mistake;

/// Head vertex for every edge record, indexed like `GlobalOig::edges`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    pub heads: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    UnassignedEdge { edge: usize },
    ForeignVertex { edge: usize, vertex: usize },
    UnknownEdge { edge: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientationStats {
    pub out_degrees: Vec<usize>,
    pub max_out_degree: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignedEdge {
    pub edge: usize,
    pub vertex: usize,
}

impl Orientation {
    /// Checks `heads` against `g` and wraps it.
    pub fn new(g: &GlobalOig, heads: Vec<usize>) -> Result<Self> {
        let o = Orientation { heads };
        let report = validate_orientation(g, &o);
        if !report.ok {
            return Err(Error::InvalidOrientation(format!("{:?}", report.violations[0])));
        }
        Ok(o)
    }

    /// Every edge toward its lower-index endpoint.
    pub fn toward_lower(g: &GlobalOig) -> Self {
        Orientation { heads: g.edges().iter().map(|e| e.a).collect() }
    }

    /// Builds an orientation from `{edge, vertex}` pairs, as exported.
    pub fn from_assignments(g: &GlobalOig, pairs: &[AssignedEdge]) -> Result<Self> {
        let report = validate_assignments(g, pairs);
        if !report.ok {
            return Err(Error::InvalidOrientation(format!("{:?}", report.violations[0])));
        }
        let mut heads = vec![0; g.edges().len()];
        for p in pairs {
            heads[p.edge] = p.vertex;
        }
        Ok(Orientation { heads })
    }

    pub fn to_assignments(&self) -> Vec<AssignedEdge> {
        self.heads.iter().enumerate().map(|(edge, &vertex)| AssignedEdge { edge, vertex }).collect()
    }

    /// Whether `v` is the head of edge `e`.
    pub fn points_to(&self, e: usize, v: usize) -> bool {
        self.heads[e] == v
    }
}

/// Report-style check of a list of `{edge, vertex}` assignments.
pub fn validate_assignments(g: &GlobalOig, pairs: &[AssignedEdge]) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen = vec![false; g.edges().len()];
    for p in pairs {
        match g.edges().get(p.edge) {
            None => violations.push(Violation::UnknownEdge { edge: p.edge }),
            Some(e) => {
                if p.vertex != e.a && p.vertex != e.b {
                    violations.push(Violation::ForeignVertex { edge: p.edge, vertex: p.vertex });
                }
                seen[p.edge] = true;
            }
        }
    }
    violations.extend(seen.iter().enumerate().filter(|(_, &s)| !s).map(|(edge, _)| Violation::UnassignedEdge { edge }));
    ValidationReport { ok: violations.is_empty(), violations }
}

pub fn validate_orientation(g: &GlobalOig, o: &Orientation) -> ValidationReport {
    validate_assignments(g, &o.to_assignments())
}

/// Number of distinct elements of `v` that witness an edge directed away
/// from `v`.
pub fn adv_outdegree(g: &GlobalOig, o: &Orientation, v: usize) -> Result<usize> {
    if v >= g.num_vertices() {
        return Err(Error::UnknownVertex);
    }
    Ok(g.witnessing_elements(v)
        .iter()
        .filter(|&&el| g.incident(v).iter().any(|&ei| g.edges()[ei].element_at(v) == el && o.heads[ei] != v))
        .count())
}

pub fn orientation_stats(g: &GlobalOig, o: &Orientation) -> OrientationStats {
    let out_degrees: Vec<usize> = (0..g.num_vertices()).map(|v| adv_outdegree(g, o, v).expect("in range")).collect();
    let max_out_degree = out_degrees.iter().copied().max().unwrap_or(0);
    OrientationStats { out_degrees, max_out_degree }
}

/// Limits for the exact search. `None` means unlimited.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub time_budget: Option<Duration>,
    pub node_budget: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { time_budget: None, node_budget: Some(50_000_000) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveOutcome {
    pub orientation: Orientation,
    pub stats: OrientationStats,
    /// Proven lower bound on the optimum.
    pub lower: usize,
    /// Whether `stats.max_out_degree` is proven optimal.
    pub optimal: bool,
    pub nodes: u64,
}

/// Slot graph derived from a global one-inclusion graph.
struct Slots {
    /// Owning vertex of each slot.
    group: Vec<usize>,
    /// Slots per vertex.
    members: Vec<Vec<usize>>,
    /// Deduplicated slot adjacency.
    adj: Vec<Vec<usize>>,
    /// (slot at `a`, slot at `b`) per edge.
    edge_slots: Vec<(usize, usize)>,
}

impl Slots {
    fn new(g: &GlobalOig) -> Self {
        let mut group = Vec::new();
        let mut members = vec![Vec::new(); g.num_vertices()];
        let mut lookup: HashMap<(usize, Example), usize> = HashMap::new();
        for v in 0..g.num_vertices() {
            for &el in g.witnessing_elements(v) {
                lookup.insert((v, el), group.len());
                members[v].push(group.len());
                group.push(v);
            }
        }
        let mut adj = vec![Vec::new(); group.len()];
        let edge_slots: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|e| (lookup[&(e.a, e.a_elem)], lookup[&(e.b, e.b_elem)]))
            .collect();
        for &(s, t) in &edge_slots {
            adj[s].push(t);
            adj[t].push(s);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Slots { group, members, adj, edge_slots }
    }

    fn heads(&self, g: &GlobalOig, clean: &[bool]) -> Vec<usize> {
        g.edges()
            .iter()
            .zip(&self.edge_slots)
            .map(|(e, &(sa, sb))| {
                if clean[sa] {
                    e.a
                } else if clean[sb] {
                    e.b
                } else {
                    e.a
                }
            })
            .collect()
    }

    /// Connected components over vertices, as sorted vertex lists.
    fn components(&self, g: &GlobalOig) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; g.num_vertices()];
        let mut out = Vec::new();
        for start in 0..g.num_vertices() {
            if comp[start] != usize::MAX || self.members[start].is_empty() {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            comp[start] = id;
            let mut list = Vec::new();
            while let Some(v) = stack.pop() {
                list.push(v);
                for &s in &self.members[v] {
                    for &t in &self.adj[s] {
                        let u = self.group[t];
                        if comp[u] == usize::MAX {
                            comp[u] = id;
                            stack.push(u);
                        }
                    }
                }
            }
            list.sort_unstable();
            out.push(list);
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Open = 0,
    Clean = 1,
    Broken = 2,
}

struct Budget {
    start: Instant,
    config: SolverConfig,
    nodes: u64,
}

impl Budget {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if let Some(limit) = self.config.node_budget {
            if self.nodes > limit {
                return false;
            }
        }
        if let Some(t) = self.config.time_budget {
            if self.nodes % 1024 == 0 && self.start.elapsed() > t {
                return false;
            }
        }
        true
    }
}

/// Feasibility search for one component at a fixed `k`.
struct Search<'a> {
    slots: &'a Slots,
    /// Component slots in decision order.
    order: Vec<usize>,
    /// Position of each component slot in `order`.
    pos: HashMap<usize, usize>,
    /// Component vertices, with local index per vertex.
    local_group: HashMap<usize, usize>,
    k: usize,
    status: Vec<Status>,
    broken: Vec<usize>,
    failed: HashSet<Vec<u8>>,
}

enum Outcome {
    Found,
    Infeasible,
    OutOfBudget,
}

impl<'a> Search<'a> {
    fn new(slots: &'a Slots, vertices: &[usize], k: usize) -> Self {
        let order: Vec<usize> = vertices.iter().flat_map(|&v| slots.members[v].iter().copied()).collect();
        let pos = order.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let local_group = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let status = vec![Status::Open; order.len()];
        Search { slots, order, pos, local_group, k, status, broken: vec![0; vertices.len()], failed: HashSet::new() }
    }

    fn local(&self, slot: usize) -> usize {
        self.pos[&slot]
    }

    fn group_of(&self, local_slot: usize) -> usize {
        self.local_group[&self.slots.group[self.order[local_slot]]]
    }

    /// Sets a status and propagates. Returns false on conflict. Every
    /// change is pushed on `trail` for undo.
    fn assign(&mut self, first: usize, st: Status, trail: &mut Vec<usize>) -> bool {
        let mut queue = vec![(first, st)];
        while let Some((i, st)) = queue.pop() {
            match (self.status[i], st) {
                (Status::Open, _) => {}
                (a, b) if a == b => continue,
                _ => return false,
            }
            self.status[i] = st;
            trail.push(i);
            let slot = self.order[i];
            match st {
                Status::Clean => {
                    for &t in &self.slots.adj[slot] {
                        queue.push((self.local(t), Status::Broken));
                    }
                }
                Status::Broken => {
                    let gi = self.group_of(i);
                    self.broken[gi] += 1;
                    if self.broken[gi] > self.k {
                        return false;
                    }
                    let v = self.slots.group[slot];
                    if self.broken[gi] == self.k {
                        for &s in &self.slots.members[v] {
                            let j = self.local(s);
                            if self.status[j] == Status::Open {
                                queue.push((j, Status::Clean));
                            }
                        }
                    }
                    // A slot whose neighbours are all broken can be made
                    // clean at no cost.
                    for &t in &self.slots.adj[slot] {
                        let j = self.local(t);
                        if self.status[j] == Status::Open
                            && self.slots.adj[t].iter().all(|&w| self.status[self.local(w)] == Status::Broken)
                        {
                            queue.push((j, Status::Clean));
                        }
                    }
                }
                Status::Open => unreachable!(),
            }
        }
        true
    }

    fn undo(&mut self, trail: &[usize]) {
        for &i in trail.iter().rev() {
            if self.status[i] == Status::Broken {
                let gi = self.group_of(i);
                self.broken[gi] -= 1;
            }
            self.status[i] = Status::Open;
        }
    }

    fn key(&self, from: usize) -> Vec<u8> {
        let mut key: Vec<u8> = self.status[from..].iter().map(|&s| s as u8).collect();
        // Broken counts of groups that still own undecided slots.
        let mut groups: Vec<usize> = (from..self.order.len()).map(|i| self.group_of(i)).collect();
        groups.dedup();
        for gi in groups {
            key.extend_from_slice(&(self.broken[gi] as u32).to_le_bytes());
        }
        key
    }

    fn dfs(&mut self, from: usize, budget: &mut Budget) -> Outcome {
        let Some(next) = (from..self.order.len()).find(|&i| self.status[i] == Status::Open) else {
            return Outcome::Found;
        };
        let key = self.key(next);
        if self.failed.contains(&key) {
            return Outcome::Infeasible;
        }
        if !budget.tick() {
            return Outcome::OutOfBudget;
        }
        for st in [Status::Clean, Status::Broken] {
            let mut trail = Vec::new();
            if self.assign(next, st, &mut trail) {
                match self.dfs(next + 1, budget) {
                    Outcome::Found => return Outcome::Found,
                    Outcome::OutOfBudget => {
                        self.undo(&trail);
                        return Outcome::OutOfBudget;
                    }
                    Outcome::Infeasible => {}
                }
            }
            self.undo(&trail);
        }
        self.failed.insert(key);
        Outcome::Infeasible
    }

    fn run(&mut self, budget: &mut Budget) -> Outcome {
        // Vertices with at most k slots never constrain anything.
        self.dfs(0, budget)
    }

    fn clean_slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().zip(&self.status).filter(|(_, &s)| s == Status::Clean).map(|(&slot, _)| slot)
    }
}

/// Greedy clean set: scan slots in order, keep a slot clean when none of
/// its neighbours is.
fn greedy_clean(slots: &Slots, vertices: &[usize]) -> Vec<usize> {
    let mut clean: HashSet<usize> = HashSet::new();
    for &v in vertices {
        for &s in &slots.members[v] {
            if slots.adj[s].iter().all(|t| !clean.contains(t)) {
                clean.insert(s);
            }
        }
    }
    let mut out: Vec<usize> = clean.into_iter().collect();
    out.sort_unstable();
    out
}

fn broken_max(slots: &Slots, vertices: &[usize], clean: &[usize]) -> usize {
    let set: HashSet<usize> = clean.iter().copied().collect();
    vertices.iter().map(|&v| slots.members[v].iter().filter(|s| !set.contains(s)).count()).max().unwrap_or(0)
}

/// Exact minimum of the maximum adversarial out-degree, or the best
/// orientation found when the budget runs out (`optimal == false`).
pub fn solve_orientation(g: &GlobalOig, config: SolverConfig) -> SolveOutcome {
    let slots = Slots::new(g);
    let mut clean = vec![false; slots.group.len()];
    let mut budget = Budget { start: Instant::now(), config, nodes: 0 };
    let mut lower = 0;
    let mut optimal = true;
    for comp in slots.components(g) {
        let greedy = greedy_clean(&slots, &comp);
        let mut hi = broken_max(&slots, &comp, &greedy);
        let mut best = greedy;
        // Any edge forces at least one broken slot.
        let mut lo = 1;
        let mut exhausted = false;
        while lo < hi {
            let mid = (lo + hi) / 2;
            let mut search = Search::new(&slots, &comp, mid);
            match search.run(&mut budget) {
                Outcome::Found => {
                    best = search.clean_slots().collect();
                    hi = broken_max(&slots, &comp, &best);
                }
                Outcome::Infeasible => lo = mid + 1,
                Outcome::OutOfBudget => {
                    exhausted = true;
                    break;
                }
            }
        }
        if exhausted {
            optimal = false;
        }
        lower = lower.max(lo.min(hi));
        for s in best {
            clean[s] = true;
        }
    }
    let orientation = Orientation { heads: slots.heads(g, &clean) };
    let stats = orientation_stats(g, &orientation);
    if optimal {
        lower = stats.max_out_degree;
    }
    SolveOutcome { orientation, stats, lower, optimal, nodes: budget.nodes }
}

/// An orientation minimizing the maximum adversarial out-degree.
pub fn optimal_orientation(g: &GlobalOig, config: SolverConfig) -> Result<(Orientation, OrientationStats)> {
    let out = solve_orientation(g, config);
    if !out.optimal {
        return Err(Error::SearchBudgetExceeded { lower: out.lower, upper: out.stats.max_out_degree });
    }
    Ok((out.orientation, out.stats))
}

/// Per-element failure probabilities behind a learner-induced orientation.
#[derive(Clone, Debug, Serialize)]
pub struct InducedOrientation {
    pub orientation: Orientation,
    pub stats: OrientationStats,
    /// `p[v]` lists `(element, p_t)` for the witnessing elements of `v`.
    #[serde(skip)]
    pub p: Vec<Vec<(Example, Rational)>>,
    /// Sample size the learner was evaluated at.
    pub sample_size: usize,
    /// Whether every `p_t` was computed by exact enumeration.
    pub exact: bool,
}

/// Training distribution used for one `p_t`: the per-vertex law over
/// elements with the tested element removed and the rest renormalized.
fn conditional_atoms(weights: &[(Example, Rational)], removed: Example) -> Vec<(Example, Rational)> {
    let kept: Vec<(Example, Rational)> = weights.iter().filter(|(e, _)| *e != removed).cloned().collect();
    let total: Rational = kept.iter().map(|(_, w)| w.clone()).sum();
    kept.into_iter().map(|(e, w)| (e, w / total.clone())).collect()
}

/// `Pr_S[learner errs robustly on e]` with `S` drawn `m` times from `atoms`.
fn failure_probability(
    instance: &ProblemInstance,
    learner: &dyn Learner,
    atoms: &[(Example, Rational)],
    m: usize,
    e: Example,
    cfg: &EvalConfig,
    cache: &mut HashMap<Vec<Example>, Predictor>,
) -> Result<(Rational, bool)> {
    let est = expectation(atoms, m, learner.exchangeable(), cfg, |sample| {
        let key = if learner.exchangeable() {
            let mut s = sample.to_vec();
            s.sort_unstable();
            s
        } else {
            sample.to_vec()
        };
        if !cache.contains_key(&key) {
            let p = fit(learner, instance, &key)?;
            cache.insert(key.clone(), p);
        }
        Ok(if robust_mistake(instance, &cache[&key], e) { rational::one() } else { rational::zero() })
    })?;
    let exact = est.exact.is_some();
    Ok((est.exact.unwrap_or_else(|| rational::from_f64(est.value).unwrap_or_else(rational::zero)), exact))
}

/// Per-vertex training law: uniform over positions of `v`.
pub fn uniform_vertex_law(v: &LabeledMultiset) -> Vec<(Example, Rational)> {
    let n = v.len() as i64;
    v.entries().iter().map(|&(e, c)| (e, rational::ratio(c as i64, n))).collect()
}

/// Per-vertex weighted law: the canonical first position carries `1 - eps`,
/// every other position `eps / (len - 1)`.
pub fn weighted_vertex_law(v: &LabeledMultiset, eps: &Rational) -> Vec<(Example, Rational)> {
    let rest = rational::int(v.len() as i64 - 1);
    v.entries()
        .iter()
        .enumerate()
        .map(|(i, &(e, c))| {
            let mut w = eps.clone() * rational::int(c as i64) / rest.clone();
            if i == 0 {
                w = w - eps.clone() / rest.clone() + (rational::one() - eps.clone());
            }
            (e, w)
        })
        .collect()
}

fn induced(
    instance: &ProblemInstance,
    g: &GlobalOig,
    learner: &dyn Learner,
    m: usize,
    law: impl Fn(&LabeledMultiset) -> Vec<(Example, Rational)>,
    heavy_resolves: bool,
    cfg: &EvalConfig,
) -> Result<InducedOrientation> {
    if let Some(expected) = learner.sample_size() {
        if expected != m {
            return Err(Error::SampleSize { expected, got: m });
        }
    }
    let half = rational::ratio(1, 2);
    let mut cache = HashMap::new();
    let mut exact = true;
    let mut p = Vec::with_capacity(g.num_vertices());
    let mut inward: HashMap<(usize, Example), bool> = HashMap::new();
    for v in 0..g.num_vertices() {
        let weights = law(g.vertex(v));
        let mut row = Vec::new();
        for &e in g.witnessing_elements(v) {
            let atoms = conditional_atoms(&weights, e);
            let (pt, ex) = failure_probability(instance, learner, &atoms, m, e, cfg, &mut cache)?;
            exact &= ex;
            inward.insert((v, e), pt < half);
            row.push((e, pt));
        }
        p.push(row);
    }
    let mut heads = Vec::with_capacity(g.edges().len());
    for (i, edge) in g.edges().iter().enumerate() {
        let ia = inward[&(edge.a, edge.a_elem)];
        let ib = inward[&(edge.b, edge.b_elem)];
        let head = match (ia, ib) {
            (true, false) => edge.a,
            (false, true) => edge.b,
            (false, false) => edge.a,
            (true, true) => {
                // Under the weighted law the two conditional training laws
                // differ only when a differing element is its vertex's heavy
                // entry; that side already pays one unit for the heavy
                // element, so the edge leaves it.
                let heavy_a = g.vertex(edge.a).entries()[0].0 == edge.a_elem;
                let heavy_b = g.vertex(edge.b).entries()[0].0 == edge.b_elem;
                match (heavy_resolves, heavy_a, heavy_b) {
                    (true, true, false) => edge.b,
                    (true, false, true) => edge.a,
                    (true, true, true) => edge.a,
                    _ => return Err(Error::InwardConflict { edge: i }),
                }
            }
        };
        heads.push(head);
    }
    let orientation = Orientation { heads };
    let stats = orientation_stats(g, &orientation);
    Ok(InducedOrientation { orientation, stats, p, sample_size: m, exact })
}

/// Orientation of `G_{2n}` induced by a learner trained on `n` uniform
/// draws from each vertex: an element's edges all point inward when the
/// learner, not having seen it, errs on it with probability below 1/2.
pub fn learner_induced_orientation(
    instance: &ProblemInstance,
    g: &GlobalOig,
    learner: &dyn Learner,
    cfg: &EvalConfig,
) -> Result<InducedOrientation> {
    if g.n() % 2 != 0 {
        return Err(Error::InvalidArgument(format!("graph size {} is not even", g.n())));
    }
    induced(instance, g, learner, g.n() / 2, uniform_vertex_law, false, cfg)
}

/// Sample size used by the weighted construction: `ceil(n / eps)`.
pub fn weighted_sample_size(n: usize, eps: &Rational) -> usize {
    let m = rational::int(n as i64) / eps.clone();
    m.ceil().to_integer().try_into().unwrap_or(usize::MAX)
}

/// Weighted variant: one heavy element of mass `1 - eps` per vertex and
/// `ceil(n / eps)` draws.
pub fn weighted_learner_orientation(
    instance: &ProblemInstance,
    g: &GlobalOig,
    learner: &dyn Learner,
    eps: &Rational,
    cfg: &EvalConfig,
) -> Result<InducedOrientation> {
    if g.n() % 2 != 0 {
        return Err(Error::InvalidArgument(format!("graph size {} is not even", g.n())));
    }
    if *eps >= rational::one() {
        return Err(Error::DegenerateWeight("eps must be below 1 so the heavy element keeps positive mass".into()));
    }
    if *eps <= rational::zero() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let m = weighted_sample_size(g.n() / 2, eps);
    induced(instance, g, learner, m, |v| weighted_vertex_law(v, eps), true, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{f1, f2};
    use crate::oig::build_global_oig;

    fn brute_force(g: &GlobalOig) -> usize {
        let m = g.edges().len();
        (0..1u64 << m)
            .map(|mask| {
                let heads = g.edges().iter().enumerate().map(|(i, e)| if mask >> i & 1 == 1 { e.b } else { e.a }).collect();
                orientation_stats(g, &Orientation { heads }).max_out_degree
            })
            .min()
            .unwrap()
    }

    #[test]
    fn validation_reports() {
        let g = build_global_oig(&f1(), 1).unwrap();
        let plus: Vec<usize> = g
            .edges()
            .iter()
            .map(|e| if g.vertex(e.a).entries()[0].0.label.is_pos() { e.a } else { e.b })
            .collect();
        assert!(validate_orientation(&g, &Orientation { heads: plus.clone() }).ok);
        let mut pairs = Orientation { heads: plus }.to_assignments();
        pairs.pop();
        let r = validate_assignments(&g, &pairs);
        assert_eq!(r.violations, vec![Violation::UnassignedEdge { edge: 7 }]);
        let mut heads = Orientation::toward_lower(&g).heads;
        let e0 = g.edges()[0];
        heads[0] = (0..4).find(|&v| v != e0.a && v != e0.b).unwrap();
        assert!(matches!(validate_orientation(&g, &Orientation { heads }).violations[0], Violation::ForeignVertex { .. }));
    }

    #[test]
    fn outdegree_examples() {
        let g2 = build_global_oig(&f1(), 2).unwrap();
        let empty = Orientation { heads: vec![] };
        assert!((0..6).all(|v| adv_outdegree(&g2, &empty, v).unwrap() == 0));
        let inst = f1();
        let g = build_global_oig(&inst, 1).unwrap();
        let v = g.vertex_index(&LabeledMultiset::from_examples(inst.examples(&[("a", 1)]).unwrap())).unwrap();
        let away = Orientation { heads: g.edges().iter().map(|e| e.other(v)).collect() };
        assert_eq!(adv_outdegree(&g, &away, v).unwrap(), 1);
        let toward = Orientation { heads: g.edges().iter().map(|e| if e.a == v || e.b == v { v } else { e.a }).collect() };
        assert_eq!(adv_outdegree(&g, &toward, v).unwrap(), 0);
        assert_eq!(adv_outdegree(&g, &toward, 17), Err(Error::UnknownVertex));
    }

    #[test]
    fn solver_matches_examples() {
        for (inst, n, want) in [(f1(), 2, 0), (f1(), 1, 1), (f2(), 1, 1), (f2(), 2, 1)] {
            let g = build_global_oig(&inst, n).unwrap();
            let (o, stats) = optimal_orientation(&g, SolverConfig::default()).unwrap();
            assert!(validate_orientation(&g, &o).ok);
            assert_eq!(stats.max_out_degree, want, "n={n}");
            if g.edges().len() <= 16 {
                assert_eq!(brute_force(&g), want);
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = build_global_oig(&crate::fixtures::example1(3).unwrap(), 1).unwrap();
        let out = solve_orientation(&g, SolverConfig { time_budget: None, node_budget: Some(0) });
        assert!(validate_orientation(&g, &out.orientation).ok);
        if !out.optimal {
            assert!(out.lower <= out.stats.max_out_degree);
            assert!(optimal_orientation(&g, SolverConfig { time_budget: None, node_budget: Some(0) }).is_err());
        }
    }

    #[test]
    fn weighted_law_sums_to_one() {
        let inst = f2();
        let v = LabeledMultiset::from_examples(inst.examples(&[("1", -1), ("2", 1), ("2", 1), ("3", 1)]).unwrap());
        let eps = rational::ratio(1, 2);
        let law = weighted_vertex_law(&v, &eps);
        let total: Rational = law.iter().map(|(_, w)| w.clone()).sum();
        assert_eq!(total, rational::one());
        assert_eq!(law[0].1, rational::ratio(1, 2));
        assert_eq!(law[1].1, rational::ratio(1, 3));
        assert_eq!(weighted_sample_size(3, &rational::ratio(2, 3)), 5);
    }
}
