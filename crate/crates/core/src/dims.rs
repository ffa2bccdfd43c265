//! Dimension computations over finite instances.
//!
//! Every value carries a witness that [`verify_report`] can re-check
//! without repeating the search.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Example, Label, PointId, ProblemInstance};
use crate::oig::{ExportEntry, GlobalOig, GraphConfig};
use crate::orient::{solve_orientation, SolverConfig};
use crate::risk::robust_mistake;

/// A dimension value, exact or bracketed when a cap or budget stopped the
/// search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimValue {
    Exact(usize),
    /// The search stopped at a cap; the value is at least this.
    AtLeast(usize),
    Between(usize, usize),
}

impl DimValue {
    pub fn lower(&self) -> usize {
        match *self {
            DimValue::Exact(v) | DimValue::AtLeast(v) | DimValue::Between(v, _) => v,
        }
    }

    pub fn exact(&self) -> Option<usize> {
        match *self {
            DimValue::Exact(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DimConfig {
    /// Largest dataset size examined by the graph-based dimensions.
    pub n_cap: usize,
    /// Maximum number of candidate subsets/tuples examined per dimension.
    pub subset_budget: u64,
    pub graph: GraphConfig,
    pub solver: SolverConfig,
}

impl Default for DimConfig {
    fn default() -> Self {
        DimConfig { n_cap: 6, subset_budget: 10_000_000, graph: GraphConfig::default(), solver: SolverConfig::default() }
    }
}

/// Calls `f` on each `d`-subset of `0..n` in lexicographic order until it
/// returns `true`. Returns `None` when the budget ran out.
fn find_subset(n: usize, d: usize, budget: &mut u64, mut f: impl FnMut(&[usize]) -> bool) -> Option<Option<Vec<usize>>> {
    if d > n {
        return Some(None);
    }
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if f(&idx) {
            return Some(Some(idx));
        }
        let mut i = d;
        loop {
            if i == 0 {
                return Some(None);
            }
            i -= 1;
            if idx[i] < n - d + i {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn shatters(rows: &[Vec<bool>], cols: &[usize]) -> bool {
    let need = 1usize << cols.len();
    if rows.len() < need {
        return false;
    }
    let mut seen = HashSet::with_capacity(need);
    for r in rows {
        let mut key = 0u64;
        for (i, &c) in cols.iter().enumerate() {
            if r[c] {
                key |= 1 << i;
            }
        }
        seen.insert(key);
        if seen.len() == need {
            return true;
        }
    }
    false
}

/// VC dimension of a 0/1 table (rows are functions, columns the domain)
/// with a shattered column set.
fn table_vc(rows: &[Vec<bool>], columns: usize, budget: u64) -> (DimValue, Vec<usize>) {
    let mut budget = budget;
    let distinct: HashSet<&Vec<bool>> = rows.iter().collect();
    let rows: Vec<Vec<bool>> = distinct.into_iter().cloned().collect();
    let mut best = Vec::new();
    let mut d = 1;
    while d < 64 && (1usize << d) <= rows.len() && d <= columns {
        match find_subset(columns, d, &mut budget, |cols| shatters(&rows, cols)) {
            None => return (DimValue::AtLeast(best.len()), best),
            Some(None) => break,
            Some(Some(set)) => best = set,
        }
        d += 1;
    }
    (DimValue::Exact(best.len()), best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dim<W> {
    pub value: DimValue,
    pub witness: W,
}

fn label_rows(instance: &ProblemInstance) -> Vec<Vec<bool>> {
    instance.hypotheses().iter().map(|h| h.labels.iter().map(|l| l.is_pos()).collect()).collect()
}

/// Largest shattered point set; the witness lists its point names.
pub fn vc_dimension(instance: &ProblemInstance, budget: u64) -> Dim<Vec<String>> {
    let (value, cols) = table_vc(&label_rows(instance), instance.num_points(), budget);
    Dim { value, witness: cols.into_iter().map(|c| instance.point_name(PointId(c)).to_string()).collect() }
}

/// VC dimension of the transposed table; the witness lists hypothesis names.
pub fn dual_vc_dimension(instance: &ProblemInstance, budget: u64) -> Dim<Vec<String>> {
    let rows = label_rows(instance);
    let transposed: Vec<Vec<bool>> =
        (0..instance.num_points()).map(|x| rows.iter().map(|r| r[x]).collect()).collect();
    let (value, cols) = table_vc(&transposed, rows.len(), budget);
    Dim { value, witness: cols.into_iter().map(|c| instance.hypotheses()[c].name().to_string()).collect() }
}

/// The robust loss of `h` on every labeled pair, pairs ordered by slot.
fn loss_rows(instance: &ProblemInstance) -> Vec<Vec<bool>> {
    instance
        .hypotheses()
        .iter()
        .map(|h| (0..2 * instance.num_points()).map(|s| robust_mistake(instance, h, Example::from_slot(s))).collect())
        .collect()
}

/// VC dimension of the robust-loss class over `X × {±1}`; the witness lists
/// `(point, label)` pairs.
pub fn loss_class_vc(instance: &ProblemInstance, budget: u64) -> Dim<Vec<(String, i8)>> {
    let (value, cols) = table_vc(&loss_rows(instance), 2 * instance.num_points(), budget);
    let witness = cols
        .into_iter()
        .map(|s| {
            let e = Example::from_slot(s);
            (instance.point_name(e.point).to_string(), e.label.as_i8())
        })
        .collect();
    Dim { value, witness }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatterAnchor {
    pub z: String,
    pub x_pos: String,
    pub x_neg: String,
}

type Bits = Vec<u64>;

fn bits_and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_any(a: &Bits) -> bool {
    a.iter().any(|&w| w != 0)
}

/// Hypotheses (as a bitset) that robustly fit `e`.
fn fitting(instance: &ProblemInstance, e: Example) -> Bits {
    let words = instance.hypotheses().len().div_ceil(64).max(1);
    let mut bits = vec![0u64; words];
    for h in 0..instance.hypotheses().len() {
        if instance.consistent_set(h).contains(e) {
            bits[h / 64] |= 1 << (h % 64);
        }
    }
    bits
}

fn subset_of(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Anchor candidates for `z` and label `y`: points `x` with `z ∈ U(x)` and
/// some hypothesis robustly fitting `(x, y)`, keeping only those whose
/// fitting sets are maximal.
fn anchors(instance: &ProblemInstance, z: PointId, y: Label) -> Vec<(PointId, Bits)> {
    let all: Vec<(PointId, Bits)> = instance
        .inverse_perturbation(z)
        .iter()
        .map(|&x| (x, fitting(instance, Example::new(x, y))))
        .filter(|(_, b)| bits_any(b))
        .collect();
    // Keep the first of each maximal fitting set.
    (0..all.len())
        .filter(|&i| {
            !(0..all.len()).any(|j| {
                j != i && subset_of(&all[i].1, &all[j].1) && (all[i].1 != all[j].1 || j < i)
            })
        })
        .map(|i| all[i].clone())
        .collect()
}

struct ShatterSearch<'a> {
    cands: &'a [(Vec<(PointId, Bits)>, Vec<(PointId, Bits)>)],
    budget: u64,
}

impl ShatterSearch<'_> {
    /// Extends `patterns` (one intersection per sign pattern so far) by
    /// anchors for the chosen points; returns the anchor choice on success.
    fn extend(&mut self, chosen: &[usize], depth: usize, patterns: Vec<Bits>) -> Option<Option<Vec<(usize, usize)>>> {
        if depth == chosen.len() {
            return Some(Some(Vec::new()));
        }
        let (pos, neg) = &self.cands[chosen[depth]];
        for (ip, (_, bp)) in pos.iter().enumerate() {
            for (ineg, (_, bn)) in neg.iter().enumerate() {
                if self.budget == 0 {
                    return None;
                }
                self.budget -= 1;
                let mut next = Vec::with_capacity(patterns.len() * 2);
                let mut ok = true;
                for p in &patterns {
                    let a = bits_and(p, bp);
                    let b = bits_and(p, bn);
                    if !bits_any(&a) || !bits_any(&b) {
                        ok = false;
                        break;
                    }
                    next.push(a);
                    next.push(b);
                }
                if !ok {
                    continue;
                }
                match self.extend(chosen, depth + 1, next)? {
                    Some(mut rest) => {
                        rest.insert(0, (ip, ineg));
                        return Some(Some(rest));
                    }
                    None => {}
                }
            }
        }
        Some(None)
    }
}

/// Largest `k` with points `z_1..z_k` robustly shattered: anchors
/// `x⁺_i, x⁻_i` with `z_i ∈ U(x⁺_i) ∩ U(x⁻_i)` such that every sign pattern
/// is realized robustly on the chosen anchors.
pub fn robust_shattering_dimension(instance: &ProblemInstance, budget: u64) -> Dim<Vec<ShatterAnchor>> {
    let words = instance.hypotheses().len().div_ceil(64).max(1);
    let mut full = vec![0u64; words];
    for h in 0..instance.hypotheses().len() {
        full[h / 64] |= 1 << (h % 64);
    }
    let cands: Vec<(Vec<(PointId, Bits)>, Vec<(PointId, Bits)>)> = instance
        .point_ids()
        .map(|z| (anchors(instance, z, Label::Pos), anchors(instance, z, Label::Neg)))
        .collect();
    let usable: Vec<usize> = (0..cands.len()).filter(|&z| !cands[z].0.is_empty() && !cands[z].1.is_empty()).collect();
    let mut search = ShatterSearch { cands: &cands, budget };
    let mut best: Vec<ShatterAnchor> = Vec::new();
    let mut subset_budget = budget;
    for k in 1..=usable.len() {
        if k >= 64 || (1usize << k) > instance.hypotheses().len() {
            break;
        }
        let mut found = None;
        let mut out_of_budget = false;
        let res = find_subset(usable.len(), k, &mut subset_budget, |idx| {
            let chosen: Vec<usize> = idx.iter().map(|&i| usable[i]).collect();
            match search.extend(&chosen, 0, vec![full.clone()]) {
                None => {
                    out_of_budget = true;
                    true
                }
                Some(None) => false,
                Some(Some(choice)) => {
                    found = Some(
                        chosen
                            .iter()
                            .zip(choice)
                            .map(|(&z, (ip, ineg))| ShatterAnchor {
                                z: instance.point_name(PointId(z)).to_string(),
                                x_pos: instance.point_name(cands[z].0[ip].0).to_string(),
                                x_neg: instance.point_name(cands[z].1[ineg].0).to_string(),
                            })
                            .collect(),
                    );
                    true
                }
            }
        });
        if res.is_none() || out_of_budget {
            return Dim { value: DimValue::AtLeast(best.len()), witness: best };
        }
        match found {
            Some(w) => best = w,
            None => break,
        }
    }
    Dim { value: DimValue::Exact(best.len()), witness: best }
}

/// Re-checks a robust-shattering witness.
pub fn verify_robust_shattering(instance: &ProblemInstance, witness: &[ShatterAnchor]) -> Result<bool> {
    let mut anchors = Vec::new();
    for a in witness {
        let (z, xp, xn) = (instance.point(&a.z)?, instance.point(&a.x_pos)?, instance.point(&a.x_neg)?);
        if !instance.perturbation(xp).contains(&z) || !instance.perturbation(xn).contains(&z) {
            return Ok(false);
        }
        anchors.push((xp, xn));
    }
    let k = anchors.len();
    Ok((0..1usize << k).all(|pattern| {
        (0..instance.hypotheses().len()).any(|h| {
            anchors.iter().enumerate().all(|(i, &(xp, xn))| {
                let e = if pattern >> i & 1 == 0 { Example::new(xp, Label::Pos) } else { Example::new(xn, Label::Neg) };
                instance.consistent_set(h).contains(e)
            })
        })
    }))
}

/// Adversarial degree of every vertex within the subgraph of alive
/// vertices.
fn degrees_within(g: &GlobalOig, alive: &[bool]) -> Vec<usize> {
    (0..g.num_vertices())
        .map(|v| {
            if !alive[v] {
                return 0;
            }
            let mut els: Vec<Example> = g
                .incident(v)
                .iter()
                .map(|&ei| &g.edges()[ei])
                .filter(|e| alive[e.other(v)])
                .map(|e| e.element_at(v))
                .collect();
            els.sort_unstable();
            els.dedup();
            els.len()
        })
        .collect()
}

/// Deletes vertices of adversarial degree below `n` until none remain;
/// returns the surviving vertex indices.
pub fn peel(g: &GlobalOig, n: usize) -> Vec<usize> {
    let mut alive = vec![true; g.num_vertices()];
    loop {
        let deg = degrees_within(g, &alive);
        let mut changed = false;
        for v in 0..g.num_vertices() {
            if alive[v] && deg[v] < n {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..g.num_vertices()).filter(|&v| alive[v]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullDegreeWitness {
    pub n: usize,
    /// Vertices of a subgraph of `G_n` in which every adversarial degree is
    /// at least `n`.
    pub vertices: Vec<Vec<ExportEntry>>,
}

fn export_vertices(instance: &ProblemInstance, g: &GlobalOig, vs: &[usize]) -> Vec<Vec<ExportEntry>> {
    vs.iter()
        .map(|&v| {
            g.vertex(v)
                .entries()
                .iter()
                .map(|&(e, c)| ExportEntry {
                    point: instance.point_name(e.point).to_string(),
                    label: e.label.as_i8(),
                    multiplicity: c,
                })
                .collect()
        })
        .collect()
}

fn import_vertex(instance: &ProblemInstance, entries: &[ExportEntry]) -> Result<crate::instance::LabeledMultiset> {
    let mut examples = Vec::new();
    for en in entries {
        let x = instance.point(&en.point)?;
        let y = Label::from_i64(en.label as i64).ok_or_else(|| Error::Malformed(format!("label {}", en.label)))?;
        examples.extend(std::iter::repeat(Example::new(x, y)).take(en.multiplicity as usize));
    }
    Ok(crate::instance::LabeledMultiset::from_examples(examples))
}

/// Largest `n <= n_cap` such that some subgraph of `G_n` has every
/// adversarial degree at least `n`. A realizable multiset has at most one
/// label per point, so degrees never exceed `|X|` and the scan is exact
/// once the cap reaches `|X|`.
pub fn full_degree_dimension(instance: &ProblemInstance, cfg: &DimConfig) -> Result<Dim<Option<FullDegreeWitness>>> {
    let limit = cfg.n_cap.min(instance.num_points());
    let mut best: Option<FullDegreeWitness> = None;
    let mut exhausted = cfg.n_cap >= instance.num_points();
    for n in 1..=limit {
        let g = GlobalOig::build(instance, n, cfg.graph)?;
        if g.num_vertices() == 0 {
            exhausted = true;
            break;
        }
        if g.edges().is_empty() {
            // An edge of any G_n restricts to one of G_1, so none exist.
            exhausted = true;
            break;
        }
        let core = peel(&g, n);
        if !core.is_empty() {
            best = Some(FullDegreeWitness { n, vertices: export_vertices(instance, &g, &core) });
        }
    }
    let v = best.as_ref().map_or(0, |w| w.n);
    Ok(Dim { value: if exhausted { DimValue::Exact(v) } else { DimValue::AtLeast(v) }, witness: best })
}

pub fn verify_full_degree(instance: &ProblemInstance, w: &FullDegreeWitness, graph: GraphConfig) -> Result<bool> {
    let g = GlobalOig::build(instance, w.n, graph)?;
    let mut keep = Vec::new();
    for entries in &w.vertices {
        let v = import_vertex(instance, entries)?;
        match g.vertex_index(&v) {
            Some(i) => keep.push(i),
            None => return Ok(false),
        }
    }
    if keep.is_empty() {
        return Ok(false);
    }
    let sub = g.induced_subgraph(instance, &keep);
    Ok((0..sub.num_vertices()).all(|v| sub.adv_degree(v).map_or(false, |d| d >= w.n)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub n: usize,
    pub vertices: usize,
    pub edges: usize,
    /// Optimal max adversarial out-degree, or its proven bracket.
    pub optimum: DimValue,
    /// Whether `3 * optimum >= n`; `None` when the bracket straddles it.
    pub forced: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DWitness {
    pub scan: Vec<ScanEntry>,
}

/// Largest `n` such that every orientation of `G_n` leaves some vertex with
/// adversarial out-degree at least `n/3`. Scans every `n` up to the cap; the
/// out-degree never exceeds `|X|`, so sizes beyond `3|X|` cannot qualify.
pub fn d_dimension(instance: &ProblemInstance, cfg: &DimConfig) -> Result<Dim<DWitness>> {
    let limit = cfg.n_cap.min(3 * instance.num_points());
    let mut exhausted = cfg.n_cap >= 3 * instance.num_points();
    let mut scan = Vec::new();
    for n in 1..=limit {
        let g = GlobalOig::build(instance, n, cfg.graph)?;
        if g.num_vertices() == 0 {
            exhausted = true;
            break;
        }
        let out = solve_orientation(&g, cfg.solver);
        let (optimum, forced) = if out.optimal {
            let k = out.stats.max_out_degree;
            (DimValue::Exact(k), Some(3 * k >= n))
        } else {
            let (lo, hi) = (out.lower, out.stats.max_out_degree);
            let forced = if 3 * lo >= n {
                Some(true)
            } else if 3 * hi < n {
                Some(false)
            } else {
                None
            };
            (DimValue::Between(lo, hi), forced)
        };
        scan.push(ScanEntry { n, vertices: g.num_vertices(), edges: g.edges().len(), optimum, forced });
        if n == 1 && g.edges().is_empty() {
            // Removing the shared part of an edge of G_n leaves an edge of
            // G_1, so every larger graph is edgeless too.
            exhausted = true;
            break;
        }
    }
    let certain = scan.iter().filter(|s| s.forced == Some(true)).map(|s| s.n).max().unwrap_or(0);
    let possible = scan.iter().filter(|s| s.forced != Some(false)).map(|s| s.n).max().unwrap_or(0);
    let value = if possible > certain {
        DimValue::Between(certain, possible)
    } else if exhausted {
        DimValue::Exact(certain)
    } else {
        DimValue::AtLeast(certain)
    };
    Ok(Dim { value, witness: DWitness { scan } })
}

/// Recomputes every exact scan entry and checks it.
pub fn verify_d_dimension(instance: &ProblemInstance, w: &DWitness, cfg: &DimConfig) -> Result<bool> {
    for s in &w.scan {
        let g = GlobalOig::build(instance, s.n, cfg.graph)?;
        if let DimValue::Exact(k) = s.optimum {
            let out = solve_orientation(&g, cfg.solver);
            if !out.optimal || out.stats.max_out_degree != k || s.forced != Some(3 * k >= s.n) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks that `points` is shattered by the class.
pub fn verify_shattered(instance: &ProblemInstance, points: &[String]) -> Result<bool> {
    let cols: Vec<usize> = points.iter().map(|p| instance.point(p).map(|x| x.0)).collect::<Result<_>>()?;
    Ok(shatters(&label_rows(instance), &cols))
}

pub fn verify_dual_shattered(instance: &ProblemInstance, hypotheses: &[String]) -> Result<bool> {
    let hs: Vec<usize> = hypotheses
        .iter()
        .map(|h| instance.hypothesis_by_name(h).ok_or_else(|| Error::InvalidArgument(format!("unknown hypothesis `{h}`"))))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<bool>> = instance
        .point_ids()
        .map(|x| instance.hypotheses().iter().map(|h| h.label(x).is_pos()).collect())
        .collect();
    Ok(shatters(&rows, &hs))
}

pub fn verify_loss_shattered(instance: &ProblemInstance, pairs: &[(String, i8)]) -> Result<bool> {
    let cols: Vec<usize> = pairs
        .iter()
        .map(|(p, y)| {
            let x = instance.point(p)?;
            let y = Label::from_i64(*y as i64).ok_or_else(|| Error::Malformed(format!("label {y}")))?;
            Ok(Example::new(x, y).slot())
        })
        .collect::<Result<_>>()?;
    Ok(shatters(&loss_rows(instance), &cols))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub vc: Dim<Vec<String>>,
    pub dual_vc: Dim<Vec<String>>,
    pub loss_class_vc: Dim<Vec<(String, i8)>>,
    pub robust_shattering: Dim<Vec<ShatterAnchor>>,
    pub full_degree: Dim<Option<FullDegreeWitness>>,
    pub d_dimension: Dim<DWitness>,
    /// `vc * dual_vc` and `loss_class_vc`, the two upper-bound expressions
    /// (log factors omitted).
    pub upper_expressions: (usize, usize),
    pub anomalies: Vec<String>,
}

pub fn dimension_report(instance: &ProblemInstance, cfg: &DimConfig) -> Result<DimensionReport> {
    let vc = vc_dimension(instance, cfg.subset_budget);
    let dual_vc = dual_vc_dimension(instance, cfg.subset_budget);
    let loss = loss_class_vc(instance, cfg.subset_budget);
    let robust = robust_shattering_dimension(instance, cfg.subset_budget);
    let fd = full_degree_dimension(instance, cfg)?;
    let d = d_dimension(instance, cfg)?;
    let product = vc.value.lower() * dual_vc.value.lower();
    let lv = loss.value.lower();
    let mut anomalies = Vec::new();
    let dv = d.value.lower();
    // The upper bounds hide log factors; only flag gross excess.
    let slack = |b: usize| 4 * (b + 1) * ((b + 2) as f64).log2().ceil() as usize;
    if dv > slack(product) && dv > slack(lv) {
        anomalies.push(format!("d_dimension {dv} far exceeds both vc*dual_vc={product} and loss_class_vc={lv}"));
    }
    if fd.value.lower() > dv.max(1) * 3 {
        anomalies.push(format!("full_degree {} much larger than d_dimension {dv}", fd.value.lower()));
    }
    Ok(DimensionReport {
        vc,
        dual_vc,
        loss_class_vc: loss,
        robust_shattering: robust,
        full_degree: fd,
        d_dimension: d,
        upper_expressions: (product, lv),
        anomalies,
    })
}

/// Replays every witness in a report. Returns the names of failed checks.
pub fn verify_report(instance: &ProblemInstance, report: &DimensionReport, cfg: &DimConfig) -> Result<Vec<&'static str>> {
    let mut failed = Vec::new();
    let sized = |ok: bool, len: usize, v: &DimValue| ok && len == v.lower();
    if !sized(verify_shattered(instance, &report.vc.witness)?, report.vc.witness.len(), &report.vc.value) {
        failed.push("vc");
    }
    if !sized(verify_dual_shattered(instance, &report.dual_vc.witness)?, report.dual_vc.witness.len(), &report.dual_vc.value) {
        failed.push("dual_vc");
    }
    if !sized(
        verify_loss_shattered(instance, &report.loss_class_vc.witness)?,
        report.loss_class_vc.witness.len(),
        &report.loss_class_vc.value,
    ) {
        failed.push("loss_class_vc");
    }
    if !sized(
        verify_robust_shattering(instance, &report.robust_shattering.witness)?,
        report.robust_shattering.witness.len(),
        &report.robust_shattering.value,
    ) {
        failed.push("robust_shattering");
    }
    let fd_ok = match &report.full_degree.witness {
        None => report.full_degree.value.lower() == 0,
        Some(w) => w.n == report.full_degree.value.lower() && verify_full_degree(instance, w, cfg.graph)?,
    };
    if !fd_ok {
        failed.push("full_degree");
    }
    if !verify_d_dimension(instance, &report.d_dimension.witness, cfg)? {
        failed.push("d_dimension");
    }
    Ok(failed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{f1, f2};

    const B: u64 = 1_000_000;

    #[test]
    fn vc_examples() {
        assert_eq!(vc_dimension(&f2(), B).value, DimValue::Exact(1));
        assert_eq!(vc_dimension(&f1(), B).value, DimValue::Exact(2));
        let single = ProblemInstance::new(vec!["a".into()], vec![("h".into(), vec![Label::Pos])], vec![vec![PointId(0)]]).unwrap();
        assert_eq!(vc_dimension(&single, B).value, DimValue::Exact(0));
        assert!(dual_vc_dimension(&single, B).value.lower() <= 1);
    }

    #[test]
    fn dual_and_loss_examples() {
        assert_eq!(dual_vc_dimension(&f1(), B).value, DimValue::Exact(1));
        assert_eq!(dual_vc_dimension(&f2(), B).value, DimValue::Exact(1));
        // Identity perturbations: the loss class is the 0-1 loss class.
        assert_eq!(loss_class_vc(&f2(), B).value, vc_dimension(&f2(), B).value);
    }

    #[test]
    fn robust_shattering_examples() {
        let f2 = f2();
        let d = robust_shattering_dimension(&f2, B);
        assert_eq!(d.value, DimValue::Exact(1));
        assert!(verify_robust_shattering(&f2, &d.witness).unwrap());
        // With U = X every hypothesis that fits robustly is constant, and a
        // single point is still shattered through the two constants.
        let f1 = f1();
        let d = robust_shattering_dimension(&f1, B);
        assert_eq!(d.value, DimValue::Exact(1));
        assert!(verify_robust_shattering(&f1, &d.witness).unwrap());
    }

    #[test]
    fn full_degree_examples() {
        let cfg = DimConfig::default();
        assert_eq!(full_degree_dimension(&f1(), &cfg).unwrap().value, DimValue::Exact(1));
        assert_eq!(full_degree_dimension(&f2(), &cfg).unwrap().value, DimValue::Exact(1));
        let empty = ProblemInstance::new(vec!["a".into()], vec![], vec![vec![PointId(0)]]).unwrap();
        assert_eq!(full_degree_dimension(&empty, &cfg).unwrap().value, DimValue::Exact(0));
        assert_eq!(d_dimension(&empty, &cfg).unwrap().value, DimValue::Exact(0));
    }

    #[test]
    fn d_dimension_of_f1() {
        let d = d_dimension(&f1(), &DimConfig::default()).unwrap();
        assert_eq!(d.value, DimValue::Exact(1));
        assert_eq!(d.witness.scan[1].edges, 0);
    }

    #[test]
    fn report_round_trips_and_replays() {
        let cfg = DimConfig::default();
        for inst in [f1(), f2()] {
            let r = dimension_report(&inst, &cfg).unwrap();
            let text = serde_json::to_string(&r).unwrap();
            let back: DimensionReport = serde_json::from_str(&text).unwrap();
            assert_eq!(back, r);
            assert!(verify_report(&inst, &r, &cfg).unwrap().is_empty());
        }
    }
}
