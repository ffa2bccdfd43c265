//! Global and classical one-inclusion graphs.
//!
//! Vertices of the global graph `G_n` are the size-`n` multisets of labeled
//! examples that some hypothesis fits with zero robust loss. Two vertices
//! `u, v` are joined by one edge record per witness `z` whenever
//! `u Δ v = {(x, y), (x', -y)}` and `z ∈ U(x) ∩ U(x')`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Example, Label, LabeledMultiset, PointId, ProblemInstance};

pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct GraphConfig {
    pub vertex_cap: usize,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig { vertex_cap: DEFAULT_VERTEX_CAP }
    }
}

/// One edge record `({a, b}, z)` with `a < b`. `a_elem` is the element of
/// `a` missing from `b`, and vice versa.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub a_elem: Example,
    pub b_elem: Example,
    pub witness: PointId,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }

    /// The element of endpoint `v` that lies in the symmetric difference.
    pub fn element_at(&self, v: usize) -> Example {
        if v == self.a {
            self.a_elem
        } else {
            self.b_elem
        }
    }
}

/// The global one-inclusion graph `G_n`.
#[derive(Clone, Debug)]
pub struct GlobalOig {
    n: usize,
    vertices: Vec<LabeledMultiset>,
    index: HashMap<LabeledMultiset, usize>,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
    witnessing: Vec<Vec<Example>>,
}

fn binomial_saturating(n: u64, k: u64) -> u64 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Calls `f` on every non-decreasing index sequence of length `n` over
/// `0..k` (multiset combinations), in lexicographic order.
pub(crate) fn for_each_multichoose(k: usize, n: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if k == 0 {
        return if n == 0 { f(&[]) } else { Ok(()) };
    }
    let mut idx = vec![0usize; n];
    loop {
        f(&idx)?;
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if idx[i] + 1 < k {
                let next = idx[i] + 1;
                for slot in &mut idx[i..] {
                    *slot = next;
                }
                break;
            }
        }
    }
}

impl GlobalOig {
    /// Builds `G_n` for `instance`.
    pub fn build(instance: &ProblemInstance, n: usize, config: GraphConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dataset size n must be at least 1".into()));
        }
        let cap = config.vertex_cap;
        let mut set: BTreeSet<LabeledMultiset> = BTreeSet::new();
        let mut seen_sets: BTreeSet<Vec<Example>> = BTreeSet::new();
        for h in 0..instance.hypotheses().len() {
            let consistent: Vec<Example> = instance.consistent_set(h).iter().collect();
            // Hypotheses with the same consistent set generate the same vertices.
            if !seen_sets.insert(consistent.clone()) {
                continue;
            }
            let count = binomial_saturating((consistent.len() + n - 1) as u64, n as u64);
            if consistent.is_empty() {
                continue;
            }
            if count > cap as u64 {
                return Err(Error::TooLarge { what: "vertex count", cap: cap as u64 });
            }
            let mut buf = Vec::with_capacity(n);
            for_each_multichoose(consistent.len(), n, |idx| {
                buf.clear();
                buf.extend(idx.iter().map(|&i| consistent[i]));
                set.insert(LabeledMultiset::from_sorted(&buf));
                if set.len() > cap {
                    return Err(Error::TooLarge { what: "vertex count", cap: cap as u64 });
                }
                Ok(())
            })?;
        }
        let vertices: Vec<LabeledMultiset> = set.into_iter().collect();
        Ok(Self::from_vertices(instance, n, vertices))
    }

    /// Builds the edges among an explicit vertex list. The list must be
    /// sorted and contain only realizable size-`n` multisets.
    fn from_vertices(instance: &ProblemInstance, n: usize, vertices: Vec<LabeledMultiset>) -> Self {
        let index: HashMap<LabeledMultiset, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut edges = Vec::new();
        for (vi, v) in vertices.iter().enumerate() {
            for &(e, mult) in v.entries() {
                // A repeated element cannot be in a symmetric difference: the
                // neighbour would contain both e and an opposite-label point
                // sharing a perturbation with it, which no hypothesis fits.
                if mult != 1 {
                    continue;
                }
                let rest = v.remove_one(e).expect("element present");
                for &x2 in instance.overlapping(e.point) {
                    let e2 = Example::new(x2, e.label.flip());
                    let u = rest.insert_one(e2);
                    let Some(&ui) = index.get(&u) else { continue };
                    if ui <= vi {
                        continue;
                    }
                    for z in instance.common_perturbations(e.point, x2) {
                        edges.push(Edge { a: vi, b: ui, a_elem: e, b_elem: e2, witness: z });
                    }
                }
            }
        }
        edges.sort_by_key(|e| (e.a, e.b, e.witness));
        let mut incident = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            incident[e.a].push(i);
            incident[e.b].push(i);
        }
        let witnessing = (0..vertices.len())
            .map(|v| {
                let set: BTreeSet<Example> = incident[v].iter().map(|&ei| edges[ei].element_at(v)).collect();
                set.into_iter().collect()
            })
            .collect();
        GlobalOig { n, vertices, index, edges, incident, witnessing }
    }

    /// The subgraph induced by `keep` (indices into this graph), re-indexed.
    pub fn induced_subgraph(&self, instance: &ProblemInstance, keep: &[usize]) -> GlobalOig {
        let mut kept: Vec<LabeledMultiset> = keep.iter().map(|&i| self.vertices[i].clone()).collect();
        kept.sort();
        kept.dedup();
        Self::from_vertices(instance, self.n, kept)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[LabeledMultiset] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &LabeledMultiset {
        &self.vertices[i]
    }

    pub fn vertex_index(&self, v: &LabeledMultiset) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    /// Distinct elements of `v` that witness at least one edge.
    pub fn witnessing_elements(&self, v: usize) -> &[Example] {
        &self.witnessing[v]
    }

    /// Adversarial degree of vertex `v`.
    pub fn adv_degree(&self, v: usize) -> Result<usize> {
        self.witnessing.get(v).map(Vec::len).ok_or(Error::UnknownVertex)
    }

    pub fn max_adv_degree(&self) -> usize {
        self.witnessing.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn to_export(&self, instance: &ProblemInstance) -> GraphExport {
        GraphExport {
            n: self.n,
            vertices: self
                .vertices
                .iter()
                .map(|v| {
                    v.entries()
                        .iter()
                        .map(|&(e, c)| ExportEntry {
                            point: instance.point_name(e.point).to_string(),
                            label: e.label.as_i8(),
                            multiplicity: c,
                        })
                        .collect()
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| ExportEdge { u: e.a, v: e.b, witness: instance.point_name(e.witness).to_string() })
                .collect(),
        }
    }
}

/// Builds `G_n` with the default configuration.
pub fn build_global_oig(instance: &ProblemInstance, n: usize) -> Result<GlobalOig> {
    GlobalOig::build(instance, n, GraphConfig::default())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportEntry {
    pub point: String,
    pub label: i8,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportEdge {
    pub u: usize,
    pub v: usize,
    pub witness: String,
}

/// JSON graph export: vertices as canonical entry lists, edges by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExport {
    pub n: usize,
    pub vertices: Vec<Vec<ExportEntry>>,
    pub edges: Vec<ExportEdge>,
}

/// The classical one-inclusion graph on a list of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalOig {
    pub points: Vec<PointId>,
    /// Distinct projections of the class, sorted.
    pub vertices: Vec<Vec<Label>>,
    /// `(u, v, coordinate)` with `u < v`, differing only at `coordinate`.
    pub edges: Vec<(usize, usize, usize)>,
}

impl ClassicalOig {
    pub fn vertex_index(&self, labels: &[Label]) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(labels)).ok()
    }
}

pub fn build_classical_oig(instance: &ProblemInstance, points: &[PointId]) -> Result<ClassicalOig> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty point list".into()));
    }
    for &x in points {
        instance.check_point(x)?;
    }
    let set: BTreeSet<Vec<Label>> =
        instance.hypotheses().iter().map(|h| points.iter().map(|&x| h.label(x)).collect()).collect();
    let vertices: Vec<Vec<Label>> = set.into_iter().collect();
    let index: HashMap<&[Label], usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let mut edges = Vec::new();
    for (ui, u) in vertices.iter().enumerate() {
        for c in 0..points.len() {
            let mut w = u.clone();
            w[c] = w[c].flip();
            if let Some(&wi) = index.get(w.as_slice()) {
                if wi > ui {
                    edges.push((ui, wi, c));
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(ClassicalOig { points: points.to_vec(), vertices, edges })
}
