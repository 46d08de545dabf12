//! Per-model classification pipeline (step set, group, orbit sum, Hadamard
//! structure, verification), its records, and the summaries aggregated from
//! them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::{count_octant, Mode};
use crate::group::{check_extraction, explore_group, orbit_sum, GroupResult, GroupSetup, DEFAULT_BOUND};
use crate::hadamard::{detect_hadamard, hadamard_assemble, HadamardDecomposition};
use crate::stepset::{
    dimension, enumerate_models, enumerate_quadrant_models, projected_quadrant_models, ModelFilter,
    QuadrantModel, StepSet,
};
use crate::verify::{
    check_extraction_series, functional_equation_of_table, verify_extraction_quadrant,
    verify_functional_equation_quadrant, Status, VerifyError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scope {
    #[serde(rename = "3d")]
    ThreeD,
    #[serde(rename = "2d-projected")]
    Projected,
    #[serde(rename = "2d-free")]
    MultiplicityFree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown scope {0:?} (expected 3d, 2d-projected or 2d-free)")]
pub struct UnknownScope(pub String);

impl FromStr for Scope {
    type Err = UnknownScope;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "3d" | "3D" => Ok(Scope::ThreeD),
            "2d-projected" | "2D-projected" => Ok(Scope::Projected),
            "2d-free" | "2D-free" => Ok(Scope::MultiplicityFree),
            _ => Err(UnknownScope(s.to_string())),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::ThreeD => "3d",
            Scope::Projected => "2d-projected",
            Scope::MultiplicityFree => "2d-free",
        })
    }
}

impl Scope {
    pub const ALL: [Scope; 3] = [Scope::MultiplicityFree, Scope::ThreeD, Scope::Projected];

    pub fn title(self) -> &'static str {
        match self {
            Scope::ThreeD => "3D octant models",
            Scope::Projected => "2D quadrant models obtained by projection",
            Scope::MultiplicityFree => "2D quadrant models without multiplicities",
        }
    }
}

/// A model of one of the scopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelRef {
    Octant(StepSet),
    Quadrant(QuadrantModel),
}

impl ModelRef {
    /// Store key: the canonical code for octant models, the canonical
    /// weighted step list for quadrant models.
    pub fn key(&self) -> String {
        match self {
            ModelRef::Octant(s) => s.canonical().code_string(),
            ModelRef::Quadrant(m) => m.canonical().to_string(),
        }
    }

    pub fn cardinality(&self) -> usize {
        match self {
            ModelRef::Octant(s) => s.len(),
            ModelRef::Quadrant(m) => m.total_weight() as usize,
        }
    }
}

impl fmt::Display for ModelRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelRef::Octant(s) => write!(f, "{s}"),
            ModelRef::Quadrant(m) => write!(f, "{m}"),
        }
    }
}

/// The models of a scope with at most `max_card` steps (counted with
/// multiplicity), sorted by key.
pub fn scope_models(scope: Scope, max_card: usize) -> Vec<ModelRef> {
    let mut out: Vec<ModelRef> = match scope {
        Scope::ThreeD => enumerate_models(max_card, ModelFilter::with_dimension(3))
            .map(ModelRef::Octant)
            .collect(),
        Scope::Projected => projected_quadrant_models(max_card)
            .into_iter()
            .map(ModelRef::Quadrant)
            .collect(),
        Scope::MultiplicityFree => enumerate_quadrant_models(max_card)
            .into_iter()
            .map(ModelRef::Quadrant)
            .collect(),
    };
    out.sort_by_key(|m| m.key());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub bound: usize,
    /// Overrides every verification order below.
    pub order: Option<usize>,
    pub functional_order: usize,
    pub extraction_order_3d: usize,
    pub extraction_order_2d: usize,
    pub hadamard_order: usize,
    pub verify: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            bound: DEFAULT_BOUND,
            order: None,
            functional_order: 8,
            extraction_order_3d: 12,
            extraction_order_2d: 16,
            hadamard_order: 8,
            verify: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub code: String,
    pub model: String,
    pub cardinality: usize,
    pub dimension: u8,
    pub redundant_axes: Vec<char>,
    /// The group order, or `">=bound"`.
    pub group: String,
    pub orbit_sum_zero: Option<bool>,
    /// Labels of the Hadamard kinds found, `"(1,2)"` and/or `"(2,1)"`.
    pub hadamard: Vec<String>,
    /// Expansion order of a conclusive extraction, or `"inconclusive"`.
    pub extraction: Option<String>,
    pub verifications: BTreeMap<String, Status>,
}

impl ClassificationRecord {
    pub fn group_order(&self) -> Option<usize> {
        self.group.parse().ok()
    }

    pub fn is_hadamard(&self) -> bool {
        !self.hadamard.is_empty()
    }

    pub fn has_failure(&self) -> bool {
        self.verifications.values().any(|s| *s == Status::Fail)
    }
}

fn hadamard_labels(decs: &[HadamardDecomposition]) -> Vec<String> {
    let mut kinds: Vec<String> = decs.iter().map(|d| d.kind.label().to_string()).collect();
    kinds.sort();
    kinds.dedup();
    kinds
}

/// Compares the assembled table with direct counting for every endpoint.
fn hadamard_assembly_status(s: StepSet, dec: &HadamardDecomposition, n: usize) -> Result<Status, VerifyError> {
    let a = hadamard_assemble(dec, n)?;
    let o = count_octant(s, n, Mode::Exact)?;
    let o = o.exact().expect("exact mode");
    for k in 0..=n {
        for (e, v) in o.slab(k).expect("full table").cells() {
            if a.get(k, &e).as_ref() != Some(v) {
                return Ok(Status::Fail);
            }
        }
    }
    Ok(Status::Pass)
}

pub fn classify_model(m: &ModelRef, opts: &ClassifyOptions) -> Result<ClassificationRecord, VerifyError> {
    let (setup, support) = match m {
        ModelRef::Octant(s) => (GroupSetup::from_stepset(*s)?, *s),
        ModelRef::Quadrant(q) => (GroupSetup::from_quadrant(q)?, q.support_3d()),
    };
    let dim = dimension(support)?;
    let result = explore_group(&setup, opts.bound)?;
    let mut rec = ClassificationRecord {
        code: m.key(),
        model: m.to_string(),
        cardinality: m.cardinality(),
        dimension: dim.dimension,
        redundant_axes: dim.redundant_axes.iter().map(|a| a.name()).collect(),
        group: match &result {
            GroupResult::Finite(g) => g.order().to_string(),
            GroupResult::ExceedsBound { bound } => format!(">={bound}"),
        },
        orbit_sum_zero: None,
        hadamard: Vec::new(),
        extraction: None,
        verifications: BTreeMap::new(),
    };
    let decs = match m {
        ModelRef::Octant(s) => detect_hadamard(*s),
        ModelRef::Quadrant(_) => Vec::new(),
    };
    rec.hadamard = hadamard_labels(&decs);
    let GroupResult::Finite(g) = &result else {
        return Ok(rec);
    };
    let zero = orbit_sum(g).is_zero();
    rec.orbit_sum_zero = Some(zero);
    if !zero {
        let ext = check_extraction(g, 4);
        rec.extraction = Some(if ext.is_conclusive() {
            ext.order.join(",")
        } else {
            "inconclusive".to_string()
        });
    }
    if !opts.verify {
        return Ok(rec);
    }
    let ord = |d: usize| opts.order.unwrap_or(d);
    match m {
        ModelRef::Octant(s) => {
            let n_fe = ord(opts.functional_order);
            let n_ext = ord(opts.extraction_order_3d);
            let n = if zero { n_fe } else { n_fe.max(n_ext) };
            let table = count_octant(*s, n, Mode::Exact)?;
            let table = table.exact().expect("exact mode");
            let fe = functional_equation_of_table(*s, &truncate(table, n_fe))?;
            rec.verifications.insert("functional-equation".into(), fe.status);
            if !zero {
                let name = format!("extraction {s}");
                let r = check_extraction_series(&setup, &truncate(table, n_ext), &name)?;
                rec.verifications.insert("extraction".into(), r.status);
            } else if let Some(dec) = decs.first() {
                let st = hadamard_assembly_status(*s, dec, ord(opts.hadamard_order))?;
                rec.verifications.insert("hadamard-assembly".into(), st);
            }
        }
        ModelRef::Quadrant(q) => {
            let fe = verify_functional_equation_quadrant(q, ord(opts.functional_order))?;
            rec.verifications.insert("functional-equation".into(), fe.status);
            if !zero {
                let r = verify_extraction_quadrant(q, ord(opts.extraction_order_2d))?;
                rec.verifications.insert("extraction".into(), r.status);
            }
        }
    }
    Ok(rec)
}

fn truncate(t: &crate::counting::Table<num_bigint::BigInt>, n: usize) -> crate::counting::Table<num_bigint::BigInt> {
    let mut t = t.clone();
    t.n_max = n;
    t.slabs.truncate(n + 1);
    for s in t.series.iter_mut() {
        s.truncate(n + 1);
    }
    t
}

pub const STRATA: [&str; 7] = [
    "all",
    "finite",
    "finite/orbit-sum-nonzero",
    "finite/orbit-sum-zero",
    "finite/orbit-sum-zero/hadamard",
    "finite/orbit-sum-zero/non-hadamard",
    "infinite",
];

fn strata_of(r: &ClassificationRecord) -> Vec<&'static str> {
    let mut out = vec!["all"];
    match r.orbit_sum_zero {
        None => out.push("infinite"),
        Some(false) => out.extend(["finite", "finite/orbit-sum-nonzero"]),
        Some(true) => {
            out.extend(["finite", "finite/orbit-sum-zero"]);
            out.push(if r.is_hadamard() {
                "finite/orbit-sum-zero/hadamard"
            } else {
                "finite/orbit-sum-zero/non-hadamard"
            });
        }
    }
    out
}

/// A zero-orbit-sum model without Hadamard structure.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NonHadamardEntry {
    pub code: String,
    pub model: String,
    pub order: usize,
}

/// Counts by stratum and cardinality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub strata: BTreeMap<String, BTreeMap<usize, u64>>,
    /// Orders of the finite groups.
    pub group_orders: BTreeMap<usize, u64>,
    /// Orders of the groups in the non-Hadamard zero-orbit-sum stratum.
    pub non_hadamard_orders: BTreeMap<usize, u64>,
    pub non_hadamard: Vec<NonHadamardEntry>,
    /// Per verification name, counts by status.
    pub verifications: BTreeMap<String, BTreeMap<String, u64>>,
}

impl Summary {
    pub fn add(&mut self, r: &ClassificationRecord) {
        for s in strata_of(r) {
            *self.strata.entry(s.to_string()).or_default().entry(r.cardinality).or_default() += 1;
        }
        if let Some(o) = r.group_order() {
            *self.group_orders.entry(o).or_default() += 1;
            if r.orbit_sum_zero == Some(true) && !r.is_hadamard() {
                *self.non_hadamard_orders.entry(o).or_default() += 1;
                let e = NonHadamardEntry {
                    code: r.code.clone(),
                    model: r.model.clone(),
                    order: o,
                };
                let pos = self.non_hadamard.binary_search(&e).unwrap_or_else(|p| p);
                self.non_hadamard.insert(pos, e);
            }
        }
        for (name, st) in &r.verifications {
            let label = serde_json::to_value(st).expect("status").as_str().unwrap_or("?").to_string();
            *self.verifications.entry(name.clone()).or_default().entry(label).or_default() += 1;
        }
    }

    pub fn from_records<'a, I: IntoIterator<Item = &'a ClassificationRecord>>(records: I) -> Summary {
        let mut s = Summary::default();
        for r in records {
            s.add(r);
        }
        s
    }

    pub fn count(&self, stratum: &str) -> u64 {
        self.strata.get(stratum).map_or(0, |m| m.values().sum())
    }

    /// Counts of a stratum for cardinalities `lo..=hi`.
    pub fn distribution(&self, stratum: &str, lo: usize, hi: usize) -> Vec<u64> {
        let m = self.strata.get(stratum);
        (lo..=hi)
            .map(|c| m.and_then(|m| m.get(&c)).copied().unwrap_or(0))
            .collect()
    }

    /// Cardinality range of the `all` stratum.
    pub fn card_range(&self) -> Option<(usize, usize)> {
        let m = self.strata.get("all")?;
        Some((*m.keys().next()?, *m.keys().next_back()?))
    }

    pub fn failures(&self) -> u64 {
        self.verifications.values().filter_map(|m| m.get("fail")).sum()
    }
}

/// Expected number of records per cardinality for a scope.
pub fn expected_counts(scope: Scope, max_card: usize) -> BTreeMap<usize, u64> {
    let mut m = BTreeMap::new();
    for x in scope_models(scope, max_card) {
        *m.entry(x.cardinality()).or_default() += 1;
    }
    m
}

/// Cardinalities whose record count differs from the expected one, as
/// `"<card> steps: <have> of <want> records"`.
pub fn missing_strata(summary: &Summary, expected: &BTreeMap<usize, u64>) -> Vec<String> {
    let have = summary.strata.get("all");
    expected
        .iter()
        .filter_map(|(c, want)| {
            let h = have.and_then(|m| m.get(c)).copied().unwrap_or(0);
            (h != *want).then(|| format!("{c} steps: {h} of {want} records"))
        })
        .collect()
}

/// One line of a classification tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub depth: usize,
    pub stratum: String,
    pub label: String,
    pub total: u64,
    pub distribution: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScopeTable {
    pub scope: Scope,
    pub title: String,
    pub cardinalities: Vec<usize>,
    pub tree: Vec<TreeNode>,
    pub group_orders: BTreeMap<usize, u64>,
    pub non_hadamard: Vec<NonHadamardEntry>,
    pub non_hadamard_orders: BTreeMap<usize, u64>,
    pub missing: Vec<String>,
}

pub fn scope_table(scope: Scope, summary: &Summary, card_range: (usize, usize), missing: Vec<String>) -> ScopeTable {
    let (lo, hi) = card_range;
    let mut nodes: Vec<(usize, &str, String)> = vec![
        (0, "all", "models".into()),
        (1, "finite", "finite group".into()),
        (2, "finite/orbit-sum-nonzero", "orbit sum nonzero".into()),
        (2, "finite/orbit-sum-zero", "orbit sum zero".into()),
    ];
    if scope == Scope::ThreeD {
        nodes.push((3, "finite/orbit-sum-zero/hadamard", "Hadamard".into()));
        nodes.push((3, "finite/orbit-sum-zero/non-hadamard", "non-Hadamard".into()));
    }
    nodes.push((1, "infinite", "group order above bound (conjectured infinite)".into()));
    let tree = nodes
        .into_iter()
        .map(|(depth, stratum, label)| TreeNode {
            depth,
            stratum: stratum.to_string(),
            label,
            total: summary.count(stratum),
            distribution: summary.distribution(stratum, lo, hi),
        })
        .collect();
    let is3 = scope == Scope::ThreeD;
    ScopeTable {
        scope,
        title: scope.title().to_string(),
        cardinalities: (lo..=hi).collect(),
        tree,
        group_orders: summary.group_orders.clone(),
        non_hadamard: if is3 { summary.non_hadamard.clone() } else { Vec::new() },
        non_hadamard_orders: if is3 { summary.non_hadamard_orders.clone() } else { BTreeMap::new() },
        missing,
    }
}

fn bracket(v: &[u64]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn multiset(m: &BTreeMap<usize, u64>) -> String {
    let parts: Vec<String> = m.iter().map(|(o, c)| format!("{o}x{c}")).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for ScopeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = (self.cardinalities.first(), self.cardinalities.last());
        match (lo, hi) {
            (Some(lo), Some(hi)) => writeln!(f, "{} ({lo} to {hi} steps)", self.title)?,
            _ => writeln!(f, "{}", self.title)?,
        }
        let width = self
            .tree
            .iter()
            .map(|n| 2 * n.depth + n.label.len())
            .max()
            .unwrap_or(0);
        for n in &self.tree {
            let head = format!("{}{}", "  ".repeat(n.depth), n.label);
            writeln!(f, "  {head:<width$}  {:>6} = {}", n.total, bracket(&n.distribution))?;
        }
        writeln!(f, "  finite group orders: {}", multiset(&self.group_orders))?;
        if !self.non_hadamard.is_empty() {
            writeln!(
                f,
                "  non-Hadamard zero-orbit-sum models ({}), orders {}:",
                self.non_hadamard.len(),
                multiset(&self.non_hadamard_orders)
            )?;
            for e in &self.non_hadamard {
                writeln!(f, "    {:>3}  {}  {}", e.order, e.code, e.model)?;
            }
        }
        for m in &self.missing {
            writeln!(f, "  MISSING {m}")?;
        }
        Ok(())
    }
}
