//! Problem-instance data model.
//!
//! A [`ProblemInstance`] is a finite instance space with explicit truth
//! tables for every hypothesis and an explicit perturbation map
//! `U: X -> 2^X`. Everything downstream (risks, graphs, dimensions) is a
//! function of the *set* of truth tables, so hypotheses with identical tables
//! are merged at construction.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A binary label, `+1` or `-1`. Orders `-1 < +1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn as_i8(self) -> i8 {
        match self {
            Label::Pos => 1,
            Label::Neg => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Label> {
        match v {
            1 => Some(Label::Pos),
            -1 => Some(Label::Neg),
            _ => None,
        }
    }

    pub fn flip(self) -> Label {
        match self {
            Label::Pos => Label::Neg,
            Label::Neg => Label::Pos,
        }
    }

    pub fn is_pos(self) -> bool {
        self == Label::Pos
    }
}

impl std::ops::Neg for Label {
    type Output = Label;
    fn neg(self) -> Label {
        self.flip()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Pos => "+1",
            Label::Neg => "-1",
        })
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Label::from_i64(v).ok_or_else(|| de::Error::custom(format!("label must be 1 or -1, got {v}")))
    }
}

/// Index of a point in its instance (document order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub usize);

impl PointId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A labeled example `(x, y)`. Orders by point, then label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Example {
    pub point: PointId,
    pub label: Label,
}

impl Example {
    pub fn new(point: PointId, label: Label) -> Self {
        Example { point, label }
    }

    pub fn pos(point: usize) -> Self {
        Example::new(PointId(point), Label::Pos)
    }

    pub fn neg(point: usize) -> Self {
        Example::new(PointId(point), Label::Neg)
    }

    /// Slot index in `0..2|X|`, used by [`ExampleSet`].
    pub fn slot(self) -> usize {
        2 * self.point.0 + usize::from(self.label.is_pos())
    }

    pub fn from_slot(slot: usize) -> Self {
        let label = if slot % 2 == 1 { Label::Pos } else { Label::Neg };
        Example::new(PointId(slot / 2), label)
    }

    pub fn flipped(self) -> Self {
        Example::new(self.point, self.label.flip())
    }
}

/// Fixed-size bitset over the `2|X|` possible labeled examples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExampleSet {
    words: Vec<u64>,
}

impl ExampleSet {
    pub fn empty(num_points: usize) -> Self {
        ExampleSet { words: vec![0; (2 * num_points).div_ceil(64)] }
    }

    pub fn insert(&mut self, e: Example) {
        let s = e.slot();
        self.words[s / 64] |= 1 << (s % 64);
    }

    pub fn contains(&self, e: Example) -> bool {
        let s = e.slot();
        self.words.get(s / 64).is_some_and(|w| w & (1 << (s % 64)) != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Example> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w & (1u64 << b) != 0).map(move |b| Example::from_slot(wi * 64 + b))
        })
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

/// A hypothesis as an explicit truth table. `names` holds every document
/// name that collapsed onto this table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub names: Vec<String>,
    pub labels: Vec<Label>,
}

impl Hypothesis {
    pub fn name(&self) -> &str {
        self.names.first().map(String::as_str).unwrap_or("")
    }

    pub fn label(&self, x: PointId) -> Label {
        self.labels[x.0]
    }
}

/// A multiset of labeled examples in canonical form: entries sorted by
/// `(point, label)` with positive multiplicities. Equality is equality of the
/// canonical entry lists; the derived order is the canonical vertex order of
/// the global one-inclusion graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabeledMultiset {
    entries: Vec<(Example, u32)>,
    size: usize,
}

impl LabeledMultiset {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Canonicalizes an arbitrary list of examples. Does not validate points;
    /// see [`canonical_multiset`] for the checked variant.
    pub fn from_examples(examples: impl IntoIterator<Item = Example>) -> Self {
        let mut sorted: Vec<Example> = examples.into_iter().collect();
        sorted.sort_unstable();
        Self::from_sorted(&sorted)
    }

    /// Builds from an already sorted slice.
    pub fn from_sorted(sorted: &[Example]) -> Self {
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        let mut entries: Vec<(Example, u32)> = Vec::new();
        for &e in sorted {
            match entries.last_mut() {
                Some((last, c)) if *last == e => *c += 1,
                _ => entries.push((e, 1)),
            }
        }
        LabeledMultiset { entries, size: sorted.len() }
    }

    pub fn entries(&self) -> &[(Example, u32)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn multiplicity(&self, e: Example) -> u32 {
        self.entries.binary_search_by(|(x, _)| x.cmp(&e)).map(|i| self.entries[i].1).unwrap_or(0)
    }

    pub fn contains(&self, e: Example) -> bool {
        self.multiplicity(e) > 0
    }

    /// Distinct elements in canonical order.
    pub fn distinct(&self) -> impl Iterator<Item = Example> + '_ {
        self.entries.iter().map(|(e, _)| *e)
    }

    /// All elements with repetition, in canonical order.
    pub fn examples(&self) -> Vec<Example> {
        self.entries.iter().flat_map(|&(e, c)| std::iter::repeat_n(e, c as usize)).collect()
    }

    /// Removes one copy of `e`; `None` if `e` is absent.
    pub fn remove_one(&self, e: Example) -> Option<Self> {
        let i = self.entries.binary_search_by(|(x, _)| x.cmp(&e)).ok()?;
        let mut entries = self.entries.clone();
        if entries[i].1 == 1 {
            entries.remove(i);
        } else {
            entries[i].1 -= 1;
        }
        Some(LabeledMultiset { entries, size: self.size - 1 })
    }

    /// Adds one copy of `e`.
    pub fn insert_one(&self, e: Example) -> Self {
        let mut entries = self.entries.clone();
        match entries.binary_search_by(|(x, _)| x.cmp(&e)) {
            Ok(i) => entries[i].1 += 1,
            Err(i) => entries.insert(i, (e, 1)),
        }
        LabeledMultiset { entries, size: self.size + 1 }
    }

    pub fn to_names(&self, instance: &ProblemInstance) -> Vec<(String, i8, u32)> {
        self.entries.iter().map(|&(e, c)| (instance.point_name(e.point).to_string(), e.label.as_i8(), c)).collect()
    }
}

/// Checked canonicalization: every point must belong to `instance`.
pub fn canonical_multiset(instance: &ProblemInstance, examples: &[Example]) -> Result<LabeledMultiset> {
    for e in examples {
        instance.check_point(e.point)?;
    }
    Ok(LabeledMultiset::from_examples(examples.iter().copied()))
}

/// A finitely supported distribution over labeled examples with exact
/// rational weights summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteDistribution {
    atoms: Vec<(Example, Rational)>,
}

/// Tolerance on the total weight of imported distributions; inside it the
/// weights are renormalized exactly.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

impl DiscreteDistribution {
    /// Validates non-negativity, distinct atoms and normalization. Zero-weight
    /// atoms are dropped; atoms are kept in canonical example order.
    pub fn new(atoms: Vec<(Example, Rational)>) -> Result<Self> {
        Self::named("<anonymous>", atoms)
    }

    pub fn named(name: &str, mut atoms: Vec<(Example, Rational)>) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidDistribution { name: name.to_string(), reason };
        if atoms.iter().any(|(_, w)| w < &rational::zero()) {
            return Err(invalid("negative weight".into()));
        }
        atoms.retain(|(_, w)| w > &rational::zero());
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("duplicate atom".into()));
        }
        if atoms.is_empty() {
            return Err(invalid("no atom with positive weight".into()));
        }
        let total: Rational = atoms.iter().map(|(_, w)| w.clone()).sum();
        let gap = rational::to_f64(&(total.clone() - rational::one())).abs();
        if gap > NORMALIZATION_TOLERANCE {
            return Err(invalid(format!("weights sum to {} (not 1)", rational::to_f64(&total))));
        }
        if total != rational::one() {
            for (_, w) in &mut atoms {
                *w = w.clone() / total.clone();
            }
        }
        Ok(DiscreteDistribution { atoms })
    }

    pub fn uniform(examples: &[Example]) -> Result<Self> {
        let k = examples.len() as i64;
        Self::new(examples.iter().map(|&e| (e, rational::ratio(1, k.max(1)))).collect())
    }

    /// Empirical distribution of a multiset: multiplicities as weights.
    pub fn empirical(sample: &LabeledMultiset) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        let n = sample.len() as i64;
        Self::new(sample.entries().iter().map(|&(e, c)| (e, rational::ratio(c as i64, n))).collect())
    }

    pub fn atoms(&self) -> &[(Example, Rational)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = Example> + '_ {
        self.atoms.iter().map(|(e, _)| *e)
    }

    pub fn weight(&self, e: Example) -> Rational {
        self.atoms.iter().find(|(x, _)| *x == e).map(|(_, w)| w.clone()).unwrap_or_else(rational::zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedDistribution {
    pub name: String,
    pub distribution: DiscreteDistribution,
}

/// A validated finite problem instance.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    points: Vec<String>,
    point_index: HashMap<String, PointId>,
    hypotheses: Vec<Hypothesis>,
    perturbations: Vec<Vec<PointId>>,
    distributions: Vec<NamedDistribution>,
    // derived
    inverse: Vec<Vec<PointId>>,
    overlaps: Vec<Vec<PointId>>,
    consistent: Vec<ExampleSet>,
}

impl PartialEq for ProblemInstance {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
            && self.hypotheses == other.hypotheses
            && self.perturbations == other.perturbations
            && self.distributions == other.distributions
    }
}

impl ProblemInstance {
    /// Builds and validates an instance. `perturbations[i]` is `U(points[i])`.
    /// Hypotheses with identical tables are merged in first-occurrence order.
    pub fn new(
        points: Vec<String>,
        hypotheses: Vec<(String, Vec<Label>)>,
        perturbations: Vec<Vec<PointId>>,
    ) -> Result<Self> {
        let mut point_index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if point_index.insert(p.clone(), PointId(i)).is_some() {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        if perturbations.len() != points.len() {
            return Err(Error::Malformed(format!(
                "{} perturbation sets for {} points",
                perturbations.len(),
                points.len()
            )));
        }
        let mut cleaned = Vec::with_capacity(points.len());
        for (i, set) in perturbations.into_iter().enumerate() {
            let mut set = set;
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(Error::EmptyPerturbation(points[i].clone()));
            }
            if let Some(bad) = set.iter().find(|z| z.0 >= points.len()) {
                return Err(Error::UnknownPoint(format!("#{}", bad.0)));
            }
            cleaned.push(set);
        }
        let mut merged: Vec<Hypothesis> = Vec::new();
        let mut by_table: HashMap<Vec<Label>, usize> = HashMap::new();
        for (name, labels) in hypotheses {
            if labels.len() != points.len() {
                return Err(Error::Malformed(format!(
                    "hypothesis `{name}` has {} labels for {} points",
                    labels.len(),
                    points.len()
                )));
            }
            match by_table.get(&labels) {
                Some(&i) => merged[i].names.push(name),
                None => {
                    by_table.insert(labels.clone(), merged.len());
                    merged.push(Hypothesis { names: vec![name], labels });
                }
            }
        }
        let mut instance = ProblemInstance {
            points,
            point_index,
            hypotheses: merged,
            perturbations: cleaned,
            distributions: Vec::new(),
            inverse: Vec::new(),
            overlaps: Vec::new(),
            consistent: Vec::new(),
        };
        instance.rebuild_indices();
        Ok(instance)
    }

    fn rebuild_indices(&mut self) {
        let n = self.points.len();
        let mut inverse = vec![Vec::new(); n];
        for (x, set) in self.perturbations.iter().enumerate() {
            for z in set {
                inverse[z.0].push(PointId(x));
            }
        }
        let mut overlaps = vec![Vec::new(); n];
        for (x, row) in overlaps.iter_mut().enumerate() {
            for x2 in 0..n {
                if sorted_intersect(&self.perturbations[x], &self.perturbations[x2]) {
                    row.push(PointId(x2));
                }
            }
        }
        let consistent = self
            .hypotheses
            .iter()
            .map(|h| {
                let mut set = ExampleSet::empty(n);
                for x in 0..n {
                    let u = &self.perturbations[x];
                    let first = h.labels[u[0].0];
                    if u.iter().all(|z| h.labels[z.0] == first) {
                        set.insert(Example::new(PointId(x), first));
                    }
                }
                set
            })
            .collect();
        self.inverse = inverse;
        self.overlaps = overlaps;
        self.consistent = consistent;
    }

    /// Attaches named distributions, validating their atoms.
    pub fn with_distributions(mut self, distributions: Vec<NamedDistribution>) -> Result<Self> {
        for d in &distributions {
            for e in d.distribution.support() {
                self.check_point(e.point)?;
            }
        }
        self.distributions = distributions;
        Ok(self)
    }

    /// Same points, hypotheses and distributions under a different
    /// perturbation map.
    pub fn with_perturbations(&self, perturbations: Vec<Vec<PointId>>) -> Result<Self> {
        let hyps = self
            .hypotheses
            .iter()
            .flat_map(|h| h.names.iter().map(move |n| (n.clone(), h.labels.clone())))
            .collect();
        ProblemInstance::new(self.points.clone(), hyps, perturbations)?.with_distributions(self.distributions.clone())
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn point_ids(&self) -> impl Iterator<Item = PointId> {
        (0..self.points.len()).map(PointId)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_name(&self, x: PointId) -> &str {
        &self.points[x.0]
    }

    pub fn point(&self, name: &str) -> Result<PointId> {
        self.point_index.get(name).copied().ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn check_point(&self, x: PointId) -> Result<()> {
        if x.0 < self.points.len() {
            Ok(())
        } else {
            Err(Error::UnknownPoint(format!("#{}", x.0)))
        }
    }

    /// Looks up `(name, label)` pairs.
    pub fn examples(&self, pairs: &[(&str, i8)]) -> Result<Vec<Example>> {
        pairs
            .iter()
            .map(|&(p, y)| {
                let label = Label::from_i64(y as i64).ok_or_else(|| Error::InvalidArgument(format!("label {y}")))?;
                Ok(Example::new(self.point(p)?, label))
            })
            .collect()
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    pub fn hypothesis_by_name(&self, name: &str) -> Option<usize> {
        self.hypotheses.iter().position(|h| h.names.iter().any(|n| n == name))
    }

    /// `U(x)`, sorted.
    pub fn perturbation(&self, x: PointId) -> &[PointId] {
        &self.perturbations[x.0]
    }

    pub fn perturbations(&self) -> &[Vec<PointId>] {
        &self.perturbations
    }

    /// `U^{-1}(z) = {x : z in U(x)}`, sorted.
    pub fn inverse_perturbation(&self, z: PointId) -> &[PointId] {
        &self.inverse[z.0]
    }

    /// Points `x'` with `U(x) ∩ U(x') ≠ ∅`, sorted.
    pub fn overlapping(&self, x: PointId) -> &[PointId] {
        &self.overlaps[x.0]
    }

    /// `U(x) ∩ U(x')`, sorted.
    pub fn common_perturbations(&self, x: PointId, x2: PointId) -> Vec<PointId> {
        let (a, b) = (&self.perturbations[x.0], &self.perturbations[x2.0]);
        a.iter().filter(|z| b.binary_search(z).is_ok()).copied().collect()
    }

    /// Precomputed robust-consistency set of hypothesis `h`.
    pub fn consistent_set(&self, h: usize) -> &ExampleSet {
        &self.consistent[h]
    }

    pub fn is_identity_perturbation(&self) -> bool {
        self.perturbations.iter().enumerate().all(|(x, u)| u.len() == 1 && u[0].0 == x)
    }

    pub fn distributions(&self) -> &[NamedDistribution] {
        &self.distributions
    }

    pub fn distribution(&self, name: &str) -> Result<&DiscreteDistribution> {
        self.distributions
            .iter()
            .find(|d| d.name == name)
            .map(|d| &d.distribution)
            .ok_or_else(|| Error::UnknownDistribution(name.to_string()))
    }

    pub fn format_example(&self, e: Example) -> String {
        format!("({},{})", self.point_name(e.point), e.label)
    }

    pub fn format_multiset(&self, m: &LabeledMultiset) -> String {
        let parts: Vec<String> = m.examples().into_iter().map(|e| self.format_example(e)).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn to_document(&self) -> InstanceDocument {
        let perturbations = self
            .point_ids()
            .map(|x| {
                (self.point_name(x).to_string(), self.perturbation(x).iter().map(|&z| self.point_name(z).to_string()).collect())
            })
            .collect();
        let hypotheses = self
            .hypotheses
            .iter()
            .map(|h| HypothesisDoc {
                name: h.name().to_string(),
                aliases: h.names[1..].to_vec(),
                labels: self.point_ids().map(|x| (self.point_name(x).to_string(), h.label(x))).collect(),
            })
            .collect();
        let distributions = self
            .distributions
            .iter()
            .map(|d| DistributionDoc {
                name: d.name.clone(),
                atoms: d
                    .distribution
                    .atoms()
                    .iter()
                    .map(|(e, w)| AtomDoc {
                        point: self.point_name(e.point).to_string(),
                        label: e.label,
                        weight: WeightDoc::Exact(w.to_string()),
                    })
                    .collect(),
            })
            .collect();
        InstanceDocument { points: self.points.clone(), perturbations, hypotheses, distributions }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("instance documents always serialize")
    }
}

fn sorted_intersect(a: &[PointId], b: &[PointId]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// JSON instance document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub points: Vec<String>,
    pub perturbations: BTreeMap<String, Vec<String>>,
    pub hypotheses: Vec<HypothesisDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub distributions: Vec<DistributionDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
    pub labels: BTreeMap<String, Label>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionDoc {
    pub name: String,
    pub atoms: Vec<AtomDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub point: String,
    pub label: Label,
    pub weight: WeightDoc,
}

/// A weight is either a JSON number (read as an exact decimal) or a string
/// such as `"1/3"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightDoc {
    Number(serde_json::Number),
    Exact(String),
}

impl WeightDoc {
    fn to_rational(&self) -> Option<Rational> {
        match self {
            WeightDoc::Number(n) => rational::parse_rational(&n.to_string())
                .or_else(|| n.as_f64().and_then(rational::from_f64)),
            WeightDoc::Exact(s) => rational::parse_rational(s),
        }
    }
}

impl InstanceDocument {
    pub fn into_instance(self) -> Result<ProblemInstance> {
        let index: HashMap<&str, usize> = self.points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        if index.len() != self.points.len() {
            let mut seen = std::collections::HashSet::new();
            let dup = self.points.iter().find(|p| !seen.insert(p.as_str())).cloned().unwrap_or_default();
            return Err(Error::DuplicatePoint(dup));
        }
        let lookup = |name: &str| index.get(name).copied().ok_or_else(|| Error::UnknownPoint(name.to_string()));
        for key in self.perturbations.keys() {
            lookup(key)?;
        }
        let mut perturbations = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let set = self.perturbations.get(p).ok_or_else(|| Error::MissingPerturbation(p.clone()))?;
            if set.is_empty() {
                return Err(Error::EmptyPerturbation(p.clone()));
            }
            perturbations.push(set.iter().map(|z| lookup(z).map(PointId)).collect::<Result<Vec<_>>>()?);
        }
        let mut hypotheses = Vec::new();
        for h in &self.hypotheses {
            for key in h.labels.keys() {
                lookup(key)?;
            }
            let labels = self
                .points
                .iter()
                .map(|p| {
                    h.labels
                        .get(p)
                        .copied()
                        .ok_or_else(|| Error::MissingLabel { hypothesis: h.name.clone(), point: p.clone() })
                })
                .collect::<Result<Vec<_>>>()?;
            hypotheses.push((h.name.clone(), labels.clone()));
            for alias in &h.aliases {
                hypotheses.push((alias.clone(), labels.clone()));
            }
        }
        let instance = ProblemInstance::new(self.points.clone(), hypotheses, perturbations)?;
        let mut distributions = Vec::new();
        for d in self.distributions {
            let mut atoms = Vec::new();
            for a in &d.atoms {
                let w = a.weight.to_rational().ok_or_else(|| Error::InvalidDistribution {
                    name: d.name.clone(),
                    reason: format!("unreadable weight {:?}", a.weight),
                })?;
                atoms.push((Example::new(PointId(lookup(&a.point)?), a.label), w));
            }
            distributions.push(NamedDistribution {
                distribution: DiscreteDistribution::named(&d.name, atoms)?,
                name: d.name,
            });
        }
        instance.with_distributions(distributions)
    }
}

/// Parses and validates a JSON instance document.
pub fn parse_instance(text: &str) -> Result<ProblemInstance> {
    let doc: InstanceDocument = serde_json::from_str(text)?;
    doc.into_instance()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_f1_document() {
        let text = r#"{"points": ["a","b"], "perturbations": {"a":["a","b"], "b":["a","b"]},
            "hypotheses": [
              {"name":"pp","labels":{"a":1,"b":1}}, {"name":"pn","labels":{"a":1,"b":-1}},
              {"name":"np","labels":{"a":-1,"b":1}}, {"name":"nn","labels":{"a":-1,"b":-1}}],
            "distributions": [{"name":"P1","atoms":[{"point":"a","label":1,"weight":0.5},{"point":"b","label":-1,"weight":"1/2"}]}]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.num_points(), 2);
        assert_eq!(inst.hypotheses().len(), 4);
        assert!(inst.point_ids().all(|x| inst.perturbation(x).len() == 2));
        let d = inst.distribution("P1").unwrap();
        assert_eq!(d.atoms().len(), 2);
        assert_eq!(d.weight(Example::pos(0)), rational::ratio(1, 2));
    }

    #[test]
    fn empty_perturbation_rejected() {
        let text = r#"{"points":["a"],"perturbations":{"a":[]},"hypotheses":[]}"#;
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err, Error::EmptyPerturbation("a".into()));
        assert!(err.to_string().contains("empty perturbation set"));
    }

    #[test]
    fn unknown_points_and_missing_labels_rejected() {
        let bad_u = r#"{"points":["a"],"perturbations":{"a":["q"]},"hypotheses":[]}"#;
        assert_eq!(parse_instance(bad_u).unwrap_err(), Error::UnknownPoint("q".into()));
        let bad_h = r#"{"points":["a"],"perturbations":{"a":["a"]},"hypotheses":[{"name":"h","labels":{"q":1}}]}"#;
        assert_eq!(parse_instance(bad_h).unwrap_err(), Error::UnknownPoint("q".into()));
        let missing = r#"{"points":["a","b"],"perturbations":{"a":["a"],"b":["b"]},"hypotheses":[{"name":"h","labels":{"a":1}}]}"#;
        assert!(matches!(parse_instance(missing).unwrap_err(), Error::MissingLabel { .. }));
        let no_u = r#"{"points":["a","b"],"perturbations":{"a":["a"]},"hypotheses":[]}"#;
        assert_eq!(parse_instance(no_u).unwrap_err(), Error::MissingPerturbation("b".into()));
        let bad_label = r#"{"points":["a"],"perturbations":{"a":["a"]},"hypotheses":[{"name":"h","labels":{"a":0}}]}"#;
        assert!(matches!(parse_instance(bad_label).unwrap_err(), Error::Malformed(_)));
        assert!(matches!(parse_instance("{not json").unwrap_err(), Error::Malformed(_)));
    }

    #[test]
    fn duplicate_tables_merge() {
        let text = r#"{"points":["a"],"perturbations":{"a":["a"]},"hypotheses":[
            {"name":"h1","labels":{"a":1}},{"name":"h2","labels":{"a":-1}},{"name":"h3","labels":{"a":1}}]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.hypotheses().len(), 2);
        assert_eq!(inst.hypotheses()[0].names, vec!["h1".to_string(), "h3".to_string()]);
        assert_eq!(inst.hypothesis_by_name("h3"), Some(0));
    }

    #[test]
    fn unnormalized_distribution_rejected() {
        let text = r#"{"points":["a"],"perturbations":{"a":["a"]},"hypotheses":[],
            "distributions":[{"name":"P","atoms":[{"point":"a","label":1,"weight":0.7}]}]}"#;
        assert!(matches!(parse_instance(text).unwrap_err(), Error::InvalidDistribution { .. }));
    }

    #[test]
    fn x_not_required_in_own_perturbation_set() {
        let text = r#"{"points":["a","b"],"perturbations":{"a":["b"],"b":["b"]},"hypotheses":[]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.perturbation(PointId(0)), &[PointId(1)]);
    }

    #[test]
    fn canonical_multiset_examples() {
        let inst = fixtures::f1();
        let a_pos = Example::pos(0);
        let b_neg = Example::neg(1);
        let m = canonical_multiset(&inst, &[a_pos, a_pos, b_neg]).unwrap();
        assert_eq!(m.entries(), &[(a_pos, 2), (b_neg, 1)]);
        assert_eq!(m.len(), 3);
        let m2 = canonical_multiset(&inst, &[b_neg, a_pos, a_pos]).unwrap();
        assert_eq!(m, m2);
        let empty = canonical_multiset(&inst, &[]).unwrap();
        assert_eq!(empty.len(), 0);
        assert!(empty.entries().is_empty());
        assert!(matches!(canonical_multiset(&inst, &[Example::pos(7)]), Err(Error::UnknownPoint(_))));
    }

    #[test]
    fn multiset_edit_operations() {
        let a = Example::pos(0);
        let b = Example::neg(1);
        let m = LabeledMultiset::from_examples([a, a, b]);
        assert_eq!(m.remove_one(a).unwrap(), LabeledMultiset::from_examples([a, b]));
        assert_eq!(m.remove_one(b).unwrap(), LabeledMultiset::from_examples([a, a]));
        assert!(m.remove_one(Example::neg(0)).is_none());
        assert_eq!(m.insert_one(b), LabeledMultiset::from_examples([a, a, b, b]));
        assert_eq!(m.multiplicity(a), 2);
    }

    #[test]
    fn example_set_round_trip() {
        let mut s = ExampleSet::empty(40);
        for e in [Example::pos(0), Example::neg(33), Example::pos(39)] {
            s.insert(e);
        }
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![Example::pos(0), Example::neg(33), Example::pos(39)]);
        assert_eq!(s.len(), 3);
        assert!(!s.contains(Example::neg(0)));
    }
}
