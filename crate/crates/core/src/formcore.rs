//! Forms over a finite category, stored as cluster systems: a list of clusters
//! per object and, for every morphism `f`, a boolean matrix saying when
//! `B ≥_f A` for `B` over the codomain and `A` over the domain.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{opposite, CatView, CategoryDoc, CategoryError, FinCategory, MorId, ObjId};
use crate::lattice::FinPoset;
use crate::report::{CheckItem, CheckReport, Tally, Witness};

pub const FORM_SCHEMA: &str = "form/1";

/// Default node budget for isomorphism and embedding searches.
pub const DEFAULT_ISO_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("forms live over different base categories")]
    BaseMismatch,
    #[error("selection does not give a cluster system: {0}")]
    BrokenSelection(String),
    #[error("operator leaves the fiber: {0}")]
    OutOfFiber(String),
    #[error("schema mismatch: expected {expected}, found {found}")]
    Schema { expected: String, found: String },
    #[error("class precondition violated: {0}")]
    ClassPrecondition(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// A boolean matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rel {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Rel {
    pub fn new(rows: usize, cols: usize) -> Rel {
        let words = cols.div_ceil(64).max(1);
        Rel {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Rel {
        let mut r = Rel::new(rows, cols);
        for b in 0..rows {
            for a in 0..cols {
                if f(b, a) {
                    r.set(b, a, true);
                }
            }
        }
        r
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, b: usize, a: usize) -> bool {
        self.bits[b * self.words + a / 64] >> (a % 64) & 1 == 1
    }

    pub fn set(&mut self, b: usize, a: usize, v: bool) {
        let w = &mut self.bits[b * self.words + a / 64];
        if v {
            *w |= 1 << (a % 64);
        } else {
            *w &= !(1 << (a % 64));
        }
    }

    fn row(&self, b: usize) -> &[u64] {
        &self.bits[b * self.words..(b + 1) * self.words]
    }

    pub fn transpose(&self) -> Rel {
        Rel::from_fn(self.cols, self.rows, |a, b| self.get(b, a))
    }

    /// Relational composite: `C (self∘f) A` iff `∃B. C self B ∧ B f A`.
    pub fn after(&self, f: &Rel) -> Rel {
        assert_eq!(self.cols, f.rows, "relation shapes do not compose");
        let mut out = Rel::new(self.rows, f.cols);
        for c in 0..self.rows {
            for b in 0..self.cols {
                if self.get(c, b) {
                    let src = f.row(b).to_vec();
                    let dst = &mut out.bits[c * out.words..(c + 1) * out.words];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d |= s;
                    }
                }
            }
        }
        out
    }

    /// Positions where `self` holds and `other` does not.
    pub fn first_excess(&self, other: &Rel) -> Option<(usize, usize)> {
        for b in 0..self.rows {
            for a in 0..self.cols {
                if self.get(b, a) && !other.get(b, a) {
                    return Some((b, a));
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    base: Arc<FinCategory>,
    label: String,
    clusters: Vec<Vec<String>>,
    rel: Vec<Rel>,
}

impl Form {
    pub fn new(
        base: Arc<FinCategory>,
        label: impl Into<String>,
        clusters: Vec<Vec<String>>,
        rel: Vec<Rel>,
    ) -> Result<Form, FormError> {
        if clusters.len() != base.n_objects() {
            return Err(FormError::Shape(format!(
                "{} cluster lists for {} objects",
                clusters.len(),
                base.n_objects()
            )));
        }
        if rel.len() != base.n_morphisms() {
            return Err(FormError::Shape(format!(
                "{} relation matrices for {} morphisms",
                rel.len(),
                base.n_morphisms()
            )));
        }
        for (f, r) in rel.iter().enumerate() {
            let want = (clusters[base.cod(f)].len(), clusters[base.dom(f)].len());
            if (r.rows(), r.cols()) != want {
                return Err(FormError::Shape(format!(
                    "relation of morphism {f} is {}×{}, expected {}×{}",
                    r.rows(),
                    r.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(Form {
            base,
            label: label.into(),
            clusters,
            rel,
        })
    }

    /// Builds every relation matrix from `ge(f, b, a)`.
    pub fn from_fn(
        base: Arc<FinCategory>,
        label: impl Into<String>,
        clusters: Vec<Vec<String>>,
        mut ge: impl FnMut(MorId, usize, usize) -> bool,
    ) -> Form {
        let rel = (0..base.n_morphisms())
            .map(|f| {
                let (rows, cols) = (clusters[base.cod(f)].len(), clusters[base.dom(f)].len());
                Rel::from_fn(rows, cols, |b, a| ge(f, b, a))
            })
            .collect();
        Form::new(base, label, clusters, rel).expect("shapes follow the cluster lists")
    }

    pub fn base(&self) -> &FinCategory {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Form {
        self.label = label.into();
        self
    }

    pub fn n_objects(&self) -> usize {
        self.clusters.len()
    }

    pub fn fiber_size(&self, x: ObjId) -> usize {
        self.clusters[x].len()
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(Vec::len).collect()
    }

    pub fn clusters(&self, x: ObjId) -> &[String] {
        &self.clusters[x]
    }

    pub fn cluster_name(&self, x: ObjId, a: usize) -> &str {
        &self.clusters[x][a]
    }

    pub fn cluster_by_name(&self, x: ObjId, name: &str) -> Option<usize> {
        self.clusters[x].iter().position(|c| c == name)
    }

    pub fn rel(&self, f: MorId) -> &Rel {
        &self.rel[f]
    }

    /// `b ≥_f a`.
    pub fn ge(&self, f: MorId, b: usize, a: usize) -> bool {
        self.rel[f].get(b, a)
    }

    /// `a ≤ b` in the fiber over `x`.
    pub fn le_at(&self, x: ObjId, a: usize, b: usize) -> bool {
        self.rel[self.base.id(x)].get(b, a)
    }

    pub fn fiber_poset(&self, x: ObjId) -> FinPoset {
        FinPoset::from_fn(self.fiber_size(x), |a, b| self.le_at(x, a, b))
    }

    /// Copy with one relation entry overwritten (used for mutation testing).
    pub fn with_entry(&self, f: MorId, b: usize, a: usize, value: bool) -> Form {
        let mut out = self.clone();
        out.rel[f].set(b, a, value);
        out
    }

    /// `(object, cluster)` pairs in ascending order.
    pub fn all_clusters(&self) -> impl Iterator<Item = (ObjId, usize)> + '_ {
        (0..self.n_objects()).flat_map(move |x| (0..self.fiber_size(x)).map(move |a| (x, a)))
    }

    pub fn to_doc(&self) -> FormDoc {
        let base = &self.base;
        let clusters = (0..self.n_objects())
            .map(|x| (base.object_name(x).to_string(), self.clusters[x].clone()))
            .collect();
        let rel = (0..base.n_morphisms())
            .map(|f| {
                let r = &self.rel[f];
                let m = (0..r.rows())
                    .map(|b| (0..r.cols()).map(|a| u8::from(r.get(b, a))).collect())
                    .collect();
                (f.to_string(), m)
            })
            .collect();
        FormDoc {
            schema: FORM_SCHEMA.to_string(),
            label: self.label.clone(),
            base: base.to_doc(),
            clusters,
            rel,
        }
    }

    /// Parses a document; shape errors are rejected, axioms are not checked.
    pub fn from_doc(doc: &FormDoc) -> Result<Form, FormError> {
        if doc.schema != FORM_SCHEMA {
            return Err(FormError::Schema {
                expected: FORM_SCHEMA.into(),
                found: doc.schema.clone(),
            });
        }
        let base = Arc::new(FinCategory::from_doc(&doc.base)?);
        let mut clusters = Vec::with_capacity(base.n_objects());
        for x in 0..base.n_objects() {
            let name = base.object_name(x);
            let list = doc
                .clusters
                .get(name)
                .ok_or_else(|| FormError::Shape(format!("no cluster list for object {name:?}")))?;
            clusters.push(list.clone());
        }
        if doc.clusters.len() != base.n_objects() {
            return Err(FormError::Shape("cluster lists for unknown objects".into()));
        }
        let mut rel = Vec::with_capacity(base.n_morphisms());
        for f in 0..base.n_morphisms() {
            let m = doc
                .rel
                .get(&f.to_string())
                .ok_or_else(|| FormError::Shape(format!("no relation for morphism {f}")))?;
            let rows = m.len();
            let cols = clusters[base.dom(f)].len();
            if m.iter().any(|row| row.len() != cols) {
                return Err(FormError::Shape(format!(
                    "ragged relation matrix for morphism {f}"
                )));
            }
            rel.push(Rel::from_fn(rows, cols, |b, a| m[b][a] != 0));
        }
        if doc.rel.len() != base.n_morphisms() {
            return Err(FormError::Shape("relations for unknown morphisms".into()));
        }
        Form::new(base, doc.label.clone(), clusters, rel)
    }
}

/// The `form/1` JSON document; the base category is embedded inline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDoc {
    pub schema: String,
    pub label: String,
    pub base: CategoryDoc,
    pub clusters: BTreeMap<String, Vec<String>>,
    pub rel: BTreeMap<String, Vec<Vec<u8>>>,
}

/// Checks (F1) reflexivity, (F2) composition and (F3) antisymmetry.
pub fn validate_form(form: &Form) -> CheckReport {
    let c = form.base();
    let mut report = CheckReport::new(format!("form {}", form.label()));
    report.push(CheckItem::pass("shape", c.n_morphisms() as u64));

    let mut f1 = Tally::new("F1");
    let mut f3 = Tally::new("F3");
    for x in 0..c.n_objects() {
        let n = form.fiber_size(x);
        for a in 0..n {
            f1.check(form.le_at(x, a, a), || {
                Witness::new(format!("{} ≱ itself", form.cluster_name(x, a))).clusters(&[(x, a)])
            });
            for b in a + 1..n {
                f3.check(!(form.le_at(x, a, b) && form.le_at(x, b, a)), || {
                    Witness::new(format!(
                        "{} and {} are mutually related",
                        form.cluster_name(x, a),
                        form.cluster_name(x, b)
                    ))
                    .clusters(&[(x, a), (x, b)])
                });
            }
        }
    }

    let mut f2 = Tally::new("F2");
    for (g, f) in c.composable_pairs() {
        let gf = c.comp(g, f);
        let composite = form.rel(g).after(form.rel(f));
        let excess = composite.first_excess(form.rel(gf));
        f2.check(excess.is_none(), || {
            let (cc, a) = excess.unwrap();
            let mid = c.cod(f);
            let b = (0..form.fiber_size(mid))
                .find(|&b| form.ge(g, cc, b) && form.ge(f, b, a))
                .unwrap_or(0);
            Witness::new(format!(
                "{} ≥_g {} ≥_f {} but not {} ≥_(g∘f) {}",
                form.cluster_name(c.cod(g), cc),
                form.cluster_name(mid, b),
                form.cluster_name(c.dom(f), a),
                form.cluster_name(c.cod(g), cc),
                form.cluster_name(c.dom(f), a)
            ))
            .morphisms(&[g, f])
            .clusters(&[(c.cod(g), cc), (mid, b), (c.dom(f), a)])
        });
    }
    report.push(f1.finish());
    report.push(f2.finish());
    report.push(f3.finish());
    report
}

fn dual_label(label: &str) -> String {
    match label.strip_prefix("op:") {
        Some(rest) => rest.to_string(),
        None => format!("op:{label}"),
    }
}

/// The dual form over the opposite base: every relation is transposed.
pub fn dual_form(form: &Form) -> Form {
    let base = Arc::new(opposite(form.base()));
    let rel = form.rel.iter().map(Rel::transpose).collect();
    Form::new(base, dual_label(form.label()), form.clusters.clone(), rel)
        .expect("transposition preserves shapes")
}

/// Restricts `form` to the given clusters (ascending indices per object).
pub fn subform(form: &Form, selection: &[Vec<usize>]) -> Result<Form, FormError> {
    let c = form.base();
    if selection.len() != c.n_objects() {
        return Err(FormError::Shape(
            "selection must list clusters for every object".into(),
        ));
    }
    for (x, sel) in selection.iter().enumerate() {
        if sel.iter().any(|&a| a >= form.fiber_size(x)) || sel.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FormError::Shape(format!(
                "selection over object {x} must be strictly ascending cluster ids"
            )));
        }
    }
    let clusters = selection
        .iter()
        .enumerate()
        .map(|(x, sel)| {
            sel.iter()
                .map(|&a| form.cluster_name(x, a).to_string())
                .collect()
        })
        .collect();
    let sub = Form::from_fn(
        form.base.clone(),
        form.label.clone(),
        clusters,
        |f, b, a| form.ge(f, selection[c.cod(f)][b], selection[c.dom(f)][a]),
    );
    let report = validate_form(&sub);
    let broken = report.failing().next().map(|item| {
        item.witnesses
            .first()
            .map(|w| w.detail.clone())
            .unwrap_or_default()
    });
    match broken {
        None => Ok(sub),
        Some(detail) => Err(FormError::BrokenSelection(detail)),
    }
}

/// Product of two forms over the same base; cluster `(i, j)` has index
/// `i * |G_X| + j`.
pub fn product(f1: &Form, f2: &Form) -> Result<Form, FormError> {
    if !same_base(f1, f2) {
        return Err(FormError::BaseMismatch);
    }
    let c = f1.base();
    let clusters = (0..c.n_objects())
        .map(|x| {
            let mut names = Vec::new();
            for a in f1.clusters(x) {
                for b in f2.clusters(x) {
                    names.push(format!("({a}, {b})"));
                }
            }
            names
        })
        .collect();
    let label = format!("{}×{}", f1.label(), f2.label());
    Ok(Form::from_fn(
        f1.base.clone(),
        label,
        clusters,
        |f, b, a| {
            let (nb, na) = (f2.fiber_size(c.cod(f)), f2.fiber_size(c.dom(f)));
            f1.ge(f, b / nb, a / na) && f2.ge(f, b % nb, a % na)
        },
    ))
}

pub fn same_base(f1: &Form, f2: &Form) -> bool {
    Arc::ptr_eq(&f1.base, &f2.base) || *f1.base == *f2.base
}

/// A map of clusters, object by object. Whether it is monotone is a property
/// checked by [`validate_operator`], not an invariant of the type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Operator {
    pub assign: Vec<Vec<usize>>,
}

impl Operator {
    pub fn identity(form: &Form) -> Operator {
        Operator {
            assign: form
                .fiber_sizes()
                .into_iter()
                .map(|n| (0..n).collect())
                .collect(),
        }
    }

    pub fn from_fn(src: &Form, mut f: impl FnMut(ObjId, usize) -> usize) -> Operator {
        Operator {
            assign: (0..src.n_objects())
                .map(|x| (0..src.fiber_size(x)).map(|a| f(x, a)).collect())
                .collect(),
        }
    }

    pub fn apply(&self, x: ObjId, a: usize) -> usize {
        self.assign[x][a]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Operator) -> Operator {
        Operator {
            assign: self
                .assign
                .iter()
                .enumerate()
                .map(|(x, row)| row.iter().map(|&a| next.assign[x][a]).collect())
                .collect(),
        }
    }

    /// Clusters hit by the operator, ascending, per object.
    pub fn image(&self, dst_sizes: &[usize]) -> Vec<Vec<usize>> {
        self.assign
            .iter()
            .enumerate()
            .map(|(x, row)| {
                let mut hit = vec![false; dst_sizes[x]];
                for &b in row {
                    hit[b] = true;
                }
                (0..dst_sizes[x]).filter(|&b| hit[b]).collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorFlags {
    pub valid: bool,
    pub full: bool,
    pub injective: bool,
    /// Only meaningful for endo-operators; `None` otherwise.
    pub idempotent: Option<bool>,
}

fn check_in_fiber(src: &Form, dst: &Form, t: &Operator) -> Result<(), FormError> {
    if !same_base(src, dst) {
        return Err(FormError::BaseMismatch);
    }
    if t.assign.len() != src.n_objects() {
        return Err(FormError::OutOfFiber("wrong number of objects".into()));
    }
    for x in 0..src.n_objects() {
        if t.assign[x].len() != src.fiber_size(x) {
            return Err(FormError::OutOfFiber(format!(
                "object {x} is not fully assigned"
            )));
        }
        if let Some(&b) = t.assign[x].iter().find(|&&b| b >= dst.fiber_size(x)) {
            return Err(FormError::OutOfFiber(format!(
                "object {x} is sent to cluster {b}"
            )));
        }
    }
    Ok(())
}

/// Monotonicity violations as a check item (first few witnesses).
pub fn monotonicity(src: &Form, dst: &Form, t: &Operator) -> CheckItem {
    let c = src.base();
    let mut tally = Tally::new("monotone");
    for f in 0..c.n_morphisms() {
        let (x, y) = (c.dom(f), c.cod(f));
        for a1 in 0..src.fiber_size(x) {
            for a2 in 0..src.fiber_size(y) {
                if src.ge(f, a2, a1) {
                    tally.check(dst.ge(f, t.apply(y, a2), t.apply(x, a1)), || {
                        Witness::new(format!(
                            "{} ≥_f {} but images are unrelated",
                            src.cluster_name(y, a2),
                            src.cluster_name(x, a1)
                        ))
                        .morphisms(&[f])
                        .clusters(&[(y, a2), (x, a1)])
                    });
                }
            }
        }
    }
    tally.finish()
}

pub fn validate_operator(src: &Form, dst: &Form, t: &Operator) -> Result<OperatorFlags, FormError> {
    check_in_fiber(src, dst, t)?;
    let c = src.base();
    let mut valid = true;
    let mut reflects = true;
    for f in 0..c.n_morphisms() {
        let (x, y) = (c.dom(f), c.cod(f));
        for a1 in 0..src.fiber_size(x) {
            for a2 in 0..src.fiber_size(y) {
                let s = src.ge(f, a2, a1);
                let d = dst.ge(f, t.apply(y, a2), t.apply(x, a1));
                valid &= !s || d;
                reflects &= s || !d;
            }
        }
    }
    let injective = t.assign.iter().all(|row| {
        let mut sorted = row.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    });
    let full = valid && reflects;
    debug_assert!(
        !full || injective || !src_is_separated(src),
        "full operators are injective"
    );
    let idempotent = (std::ptr::eq(src, dst) || src == dst).then(|| t.then(t) == *t);
    Ok(OperatorFlags {
        valid,
        full,
        injective,
        idempotent,
    })
}

/// (F3) holds in every fiber; fullness implies injectivity only then.
fn src_is_separated(src: &Form) -> bool {
    (0..src.n_objects()).all(|x| {
        let n = src.fiber_size(x);
        (0..n).all(|a| (0..n).all(|b| a == b || !(src.le_at(x, a, b) && src.le_at(x, b, a))))
    })
}

/// Per-object bijections preserving and reflecting every relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormIso {
    pub maps: Vec<Vec<usize>>,
}

impl FormIso {
    pub fn as_operator(&self) -> Operator {
        Operator {
            assign: self.maps.clone(),
        }
    }

    pub fn inverse(&self) -> FormIso {
        FormIso {
            maps: self
                .maps
                .iter()
                .map(|m| {
                    let mut inv = vec![0; m.len()];
                    for (a, &b) in m.iter().enumerate() {
                        inv[b] = a;
                    }
                    inv
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum IsoOutcome {
    Found {
        iso: FormIso,
        nodes: u64,
    },
    /// Exhaustive search (or an invariant) shows no map exists.
    Refuted {
        reason: String,
        nodes: u64,
    },
    BudgetExhausted {
        nodes: u64,
    },
}

impl IsoOutcome {
    pub fn found(&self) -> Option<&FormIso> {
        match self {
            IsoOutcome::Found { iso, .. } => Some(iso),
            _ => None,
        }
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, IsoOutcome::Refuted { .. })
    }
}

pub fn find_isomorphism(f: &Form, g: &Form) -> IsoOutcome {
    find_isomorphism_with_budget(f, g, DEFAULT_ISO_BUDGET)
}

/// Lexicographically least isomorphism `f → g`, if any.
pub fn find_isomorphism_with_budget(f: &Form, g: &Form, budget: u64) -> IsoOutcome {
    if !same_base(f, g) {
        return IsoOutcome::Refuted {
            reason: "different base categories".into(),
            nodes: 0,
        };
    }
    let (sf, sg) = (f.fiber_sizes(), g.fiber_sizes());
    if sf != sg {
        return IsoOutcome::Refuted {
            reason: format!("fiber sizes differ: {sf:?} vs {sg:?}"),
            nodes: 0,
        };
    }
    for x in 0..f.n_objects() {
        if order_type(f, x) != order_type(g, x) {
            return IsoOutcome::Refuted {
                reason: format!(
                    "fibers over {} have different order types",
                    f.base().object_name(x)
                ),
                nodes: 0,
            };
        }
    }
    let (sig_f, sig_g) = (signatures(f), signatures(g));
    for x in 0..f.n_objects() {
        let mut a = sig_f[x].clone();
        let mut b = sig_g[x].clone();
        a.sort();
        b.sort();
        if a != b {
            return IsoOutcome::Refuted {
                reason: format!(
                    "clusters over {} have different relation profiles",
                    f.base().object_name(x)
                ),
                nodes: 0,
            };
        }
    }
    let candidates = |x: ObjId, a: usize| -> Vec<usize> {
        (0..g.fiber_size(x))
            .filter(|&b| sig_g[x][b] == sig_f[x][a])
            .collect()
    };
    Search::new(f, g, budget, candidates).run()
}

/// Lexicographically least full injective operator `f → g`, if any.
pub fn find_full_embedding(f: &Form, g: &Form, budget: u64) -> IsoOutcome {
    if !same_base(f, g) {
        return IsoOutcome::Refuted {
            reason: "different base categories".into(),
            nodes: 0,
        };
    }
    if let Some(x) = (0..f.n_objects()).find(|&x| f.fiber_size(x) > g.fiber_size(x)) {
        return IsoOutcome::Refuted {
            reason: format!(
                "fiber over {} is larger in the source",
                f.base().object_name(x)
            ),
            nodes: 0,
        };
    }
    let candidates = |x: ObjId, _a: usize| -> Vec<usize> { (0..g.fiber_size(x)).collect() };
    Search::new(f, g, budget, candidates).run()
}

/// Sorted `(|↓a|, |↑a|)` pairs of a fiber.
fn order_type(form: &Form, x: ObjId) -> Vec<(usize, usize)> {
    let n = form.fiber_size(x);
    let mut v: Vec<_> = (0..n)
        .map(|a| {
            let down = (0..n).filter(|&b| form.le_at(x, b, a)).count();
            let up = (0..n).filter(|&b| form.le_at(x, a, b)).count();
            (down, up)
        })
        .collect();
    v.sort_unstable();
    v
}

/// Per cluster: for each morphism touching its object, how many clusters it
/// relates to on the other side. Invariant under isomorphisms over a fixed base.
fn signatures(form: &Form) -> Vec<Vec<Vec<usize>>> {
    let c = form.base();
    (0..form.n_objects())
        .map(|x| {
            (0..form.fiber_size(x))
                .map(|a| {
                    let mut sig = Vec::new();
                    for f in 0..c.n_morphisms() {
                        if c.dom(f) == x {
                            sig.push(
                                (0..form.fiber_size(c.cod(f)))
                                    .filter(|&b| form.ge(f, b, a))
                                    .count(),
                            );
                        }
                        if c.cod(f) == x {
                            sig.push(
                                (0..form.fiber_size(c.dom(f)))
                                    .filter(|&b| form.ge(f, a, b))
                                    .count(),
                            );
                        }
                    }
                    sig
                })
                .collect()
        })
        .collect()
}

struct Search<'a> {
    f: &'a Form,
    g: &'a Form,
    vars: Vec<(ObjId, usize)>,
    cands: Vec<Vec<usize>>,
    assign: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    nodes: u64,
    budget: u64,
}

const UNSET: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(
        f: &'a Form,
        g: &'a Form,
        budget: u64,
        cand: impl Fn(ObjId, usize) -> Vec<usize>,
    ) -> Self {
        let vars: Vec<_> = f.all_clusters().collect();
        let cands = vars.iter().map(|&(x, a)| cand(x, a)).collect();
        Search {
            f,
            g,
            vars,
            cands,
            assign: f
                .fiber_sizes()
                .into_iter()
                .map(|n| vec![UNSET; n])
                .collect(),
            used: g
                .fiber_sizes()
                .into_iter()
                .map(|n| vec![false; n])
                .collect(),
            nodes: 0,
            budget,
        }
    }

    fn run(mut self) -> IsoOutcome {
        match self.descend(0) {
            Some(true) => IsoOutcome::Found {
                iso: FormIso { maps: self.assign },
                nodes: self.nodes,
            },
            Some(false) => IsoOutcome::Refuted {
                reason: "exhaustive search found no structure-preserving bijection".into(),
                nodes: self.nodes,
            },
            None => IsoOutcome::BudgetExhausted { nodes: self.nodes },
        }
    }

    /// `Some(found)` on a verdict, `None` when the budget runs out.
    fn descend(&mut self, i: usize) -> Option<bool> {
        if i == self.vars.len() {
            return Some(true);
        }
        let (x, a) = self.vars[i];
        for k in 0..self.cands[i].len() {
            let b = self.cands[i][k];
            if self.used[x][b] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            if !self.consistent(x, a, b) {
                continue;
            }
            self.assign[x][a] = b;
            self.used[x][b] = true;
            match self.descend(i + 1) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.assign[x][a] = UNSET;
            self.used[x][b] = false;
        }
        Some(false)
    }

    fn consistent(&self, x: ObjId, a: usize, b: usize) -> bool {
        let c = self.f.base();
        for y in 0..c.n_objects() {
            for &h in c.hom(x, y) {
                for (a2, &b2) in self.assign[y].iter().enumerate() {
                    let b2 = if y == x && a2 == a { b } else { b2 };
                    if b2 == UNSET {
                        continue;
                    }
                    if self.f.ge(h, a2, a) != self.g.ge(h, b2, b) {
                        return false;
                    }
                }
                if y == x && self.f.ge(h, a, a) != self.g.ge(h, b, b) {
                    return false;
                }
            }
            for &h in c.hom(y, x) {
                for (a2, &b2) in self.assign[y].iter().enumerate() {
                    if b2 == UNSET {
                        continue;
                    }
                    if self.f.ge(h, a, a2) != self.g.ge(h, b, b2) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one() -> Arc<FinCategory> {
        Arc::new(FinCategory::from_tables(
            vec!["*".into()],
            vec![("1".into(), 0, 0)],
            vec![0],
            |_, _| 0,
        ))
    }

    /// A poset on `0..n` viewed as a form over the terminal category.
    fn poset_form(n: usize, le: impl Fn(usize, usize) -> bool) -> Form {
        let names = (0..n).map(|i| i.to_string()).collect();
        Form::from_fn(one(), "poset", vec![names], |_, b, a| le(a, b))
    }

    fn divides(a: usize, b: usize) -> bool {
        (b + 1).is_multiple_of(a + 1)
    }

    #[test]
    fn poset_form_is_valid_and_dualizes_to_the_reverse_order() {
        let p = poset_form(6, divides);
        assert!(validate_form(&p).all_pass());
        let d = dual_form(&p);
        assert!(validate_form(&d).all_pass());
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(d.le_at(0, a, b), p.le_at(0, b, a));
            }
        }
        assert_eq!(dual_form(&d), p);
    }

    #[test]
    fn f3_failure_has_a_witness() {
        let p = poset_form(2, |_, _| true);
        let r = validate_form(&p);
        assert!(!r.passed("F3"));
        assert!(r.passed("F1"));
        assert_eq!(r.item("F3").unwrap().witnesses.len(), 1);
    }

    #[test]
    fn product_sizes_multiply() {
        let p = poset_form(3, |a, b| a <= b);
        let q = poset_form(2, |a, b| a <= b);
        let pq = product(&p, &q).unwrap();
        assert_eq!(pq.fiber_sizes(), vec![6]);
        assert!(validate_form(&pq).all_pass());
    }

    #[test]
    fn product_with_a_point_is_isomorphic() {
        let p = poset_form(4, divides);
        let point = poset_form(1, |_, _| true);
        let pp = product(&p, &point).unwrap();
        let iso = find_isomorphism(&pp, &p);
        assert_eq!(iso.found().unwrap().maps, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn subform_of_everything_is_the_form() {
        let p = poset_form(4, divides);
        let all = vec![(0..4).collect()];
        assert_eq!(subform(&p, &all).unwrap(), p);
        assert!(subform(&p, &[vec![2, 1]]).is_err());
    }

    #[test]
    fn identity_operator_flags() {
        let p = poset_form(4, divides);
        let fl = validate_operator(&p, &p, &Operator::identity(&p)).unwrap();
        assert_eq!(
            fl,
            OperatorFlags {
                valid: true,
                full: true,
                injective: true,
                idempotent: Some(true)
            }
        );
    }

    #[test]
    fn operator_out_of_fiber_is_an_error() {
        let p = poset_form(2, |a, b| a <= b);
        let bad = Operator {
            assign: vec![vec![0, 5]],
        };
        assert!(matches!(
            validate_operator(&p, &p, &bad),
            Err(FormError::OutOfFiber(_))
        ));
    }

    #[test]
    fn chain_and_antichain_are_not_isomorphic() {
        let chain = poset_form(3, |a, b| a <= b);
        let anti = poset_form(3, |a, b| a == b);
        assert!(find_isomorphism(&chain, &anti).is_refuted());
        let emb = find_full_embedding(&poset_form(2, |a, b| a <= b), &chain, DEFAULT_ISO_BUDGET);
        assert_eq!(emb.found().unwrap().maps, vec![vec![0, 1]]);
        assert!(
            find_full_embedding(&poset_form(2, |a, b| a == b), &chain, DEFAULT_ISO_BUDGET)
                .is_refuted()
        );
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let anti = poset_form(8, |a, b| a == b);
        let other = anti.clone();
        assert!(matches!(
            find_isomorphism_with_budget(&anti, &other, 3),
            IsoOutcome::BudgetExhausted { .. }
        ));
    }

    #[test]
    fn doc_round_trip_is_bit_exact() {
        let p = poset_form(4, divides);
        let text = serde_json::to_string(&p.to_doc()).unwrap();
        let back = Form::from_doc(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&back.to_doc()).unwrap(), text);
    }

    proptest! {
        /// Random relabellings of a poset form are found by the iso search,
        /// in both directions.
        #[test]
        fn iso_search_finds_relabellings(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
            let p = poset_form(6, divides);
            let q = poset_form(6, |a, b| divides(perm[a], perm[b]));
            let fwd = find_isomorphism(&p, &q);
            let back = find_isomorphism(&q, &p);
            prop_assert!(fwd.found().is_some());
            prop_assert!(back.found().is_some());
            let iso = fwd.found().unwrap();
            let flags = validate_operator(&p, &q, &iso.as_operator()).unwrap();
            prop_assert!(flags.full && flags.injective);
        }

        /// Composites of valid operators stay valid.
        #[test]
        fn composition_of_monotone_maps(shift in 0usize..3) {
            let chain = poset_form(5, |a, b| a <= b);
            let up = Operator { assign: vec![(0..5).map(|a| (a + shift).min(4)).collect()] };
            let floor = Operator { assign: vec![(0..5).map(|a| a / 2 * 2).collect()] };
            let both = up.then(&floor);
            prop_assert!(validate_operator(&chain, &chain, &up).unwrap().valid);
            prop_assert!(validate_operator(&chain, &chain, &floor).unwrap().valid);
            prop_assert!(validate_operator(&chain, &chain, &both).unwrap().valid);
        }
    }
}
