//! Finite categories stored as explicit tables.
//!
//! Morphisms are dense ids `0..n`; composition is a flat `n × n` table with a
//! sentinel for non-composable pairs, so every lookup is O(1). Hom-sets are
//! precomputed in ascending id order, which is what makes every search in the
//! crate deterministic.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{CheckItem, CheckReport, Status, Tally, Witness};

pub type ObjId = usize;
pub type MorId = usize;

pub const FINCAT_SCHEMA: &str = "fincat/1";

const UNDEFINED: usize = usize::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("malformed category table: {0}")]
    MalformedTable(String),
    #[error("category law violated: {0}")]
    LawViolation(String),
    #[error("schema mismatch: expected {expected}, found {found}")]
    Schema { expected: String, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    names: Vec<String>,
    dom: Vec<ObjId>,
    cod: Vec<ObjId>,
    identity: Vec<MorId>,
    compose: Vec<MorId>,
    hom: Vec<Vec<MorId>>,
}

/// Read access shared by a category and its opposite view.
pub trait CatView {
    fn n_objects(&self) -> usize;
    fn n_morphisms(&self) -> usize;
    fn dom(&self, f: MorId) -> ObjId;
    fn cod(&self, f: MorId) -> ObjId;
    fn hom(&self, a: ObjId, b: ObjId) -> &[MorId];
    fn id(&self, x: ObjId) -> MorId;
    /// `g ∘ f`; panics if the pair is not composable.
    fn comp(&self, g: MorId, f: MorId) -> MorId;
}

impl FinCategory {
    /// Builds a category from its tables without checking the category laws.
    /// `compose(g, f)` is called for every composable pair.
    pub fn from_tables(
        objects: Vec<String>,
        morphisms: Vec<(String, ObjId, ObjId)>,
        identity: Vec<MorId>,
        mut compose: impl FnMut(MorId, MorId) -> MorId,
    ) -> FinCategory {
        let n = morphisms.len();
        let k = objects.len();
        let mut names = Vec::with_capacity(n);
        let mut dom = Vec::with_capacity(n);
        let mut cod = Vec::with_capacity(n);
        for (name, d, c) in morphisms {
            names.push(name);
            dom.push(d);
            cod.push(c);
        }
        let mut hom = vec![Vec::new(); k * k];
        for f in 0..n {
            hom[dom[f] * k + cod[f]].push(f);
        }
        let mut table = vec![UNDEFINED; n * n];
        for g in 0..n {
            for f in 0..n {
                if dom[g] == cod[f] {
                    table[g * n + f] = compose(g, f);
                }
            }
        }
        FinCategory {
            objects,
            names,
            dom,
            cod,
            identity,
            compose: table,
            hom,
        }
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.objects[x]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.names[f]
    }

    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        let n = self.names.len();
        match self.compose[g * n + f] {
            UNDEFINED => None,
            gf => Some(gf),
        }
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identity[self.dom[f]] == f
    }

    pub fn morphisms_into(&self, b: ObjId) -> impl Iterator<Item = MorId> + '_ {
        (0..self.n_morphisms()).filter(move |&f| self.cod[f] == b)
    }

    pub fn morphisms_from(&self, a: ObjId) -> impl Iterator<Item = MorId> + '_ {
        (0..self.n_morphisms()).filter(move |&f| self.dom[f] == a)
    }

    /// All composable pairs `(g, f)` in ascending order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (MorId, MorId)> + '_ {
        let n = self.n_morphisms();
        (0..n).flat_map(move |g| {
            (0..n)
                .filter(move |&f| self.dom[g] == self.cod[f])
                .map(move |f| (g, f))
        })
    }

    /// Re-checks the typing, identity and associativity laws.
    pub fn validate(&self) -> CheckReport {
        let mut report = CheckReport::new("category");
        report.push(CheckItem::pass("table", self.n_morphisms() as u64));
        check_laws(self, &mut report);
        report
    }

    pub fn to_doc(&self) -> CategoryDoc {
        let morphisms = (0..self.n_morphisms())
            .map(|f| MorphismDoc {
                id: f,
                dom: self.objects[self.dom[f]].clone(),
                cod: self.objects[self.cod[f]].clone(),
                name: Some(self.names[f].clone()),
            })
            .collect();
        let identity = self
            .objects
            .iter()
            .enumerate()
            .map(|(x, name)| (name.clone(), self.identity[x]))
            .collect();
        let compose = self
            .composable_pairs()
            .map(|(g, f)| [g, f, self.comp(g, f)])
            .collect();
        CategoryDoc {
            schema: FINCAT_SCHEMA.to_string(),
            objects: self.objects.clone(),
            morphisms,
            identity,
            compose,
        }
    }

    /// Parses a document, rejecting malformed tables and law violations.
    pub fn from_doc(doc: &CategoryDoc) -> Result<FinCategory, CategoryError> {
        if doc.schema != FINCAT_SCHEMA {
            return Err(CategoryError::Schema {
                expected: FINCAT_SCHEMA.into(),
                found: doc.schema.clone(),
            });
        }
        let cat = parse_tables(doc).map_err(CategoryError::MalformedTable)?;
        let report = cat.validate();
        if let Some(bad) = report.failing().next() {
            let detail = bad
                .witnesses
                .first()
                .map(|w| w.detail.clone())
                .unwrap_or_default();
            return Err(CategoryError::LawViolation(format!(
                "{}: {}",
                bad.name, detail
            )));
        }
        Ok(cat)
    }
}

impl CatView for FinCategory {
    fn n_objects(&self) -> usize {
        self.objects.len()
    }
    fn n_morphisms(&self) -> usize {
        self.names.len()
    }
    fn dom(&self, f: MorId) -> ObjId {
        self.dom[f]
    }
    fn cod(&self, f: MorId) -> ObjId {
        self.cod[f]
    }
    fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.hom[a * self.objects.len() + b]
    }
    fn id(&self, x: ObjId) -> MorId {
        self.identity[x]
    }
    fn comp(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f)
            .unwrap_or_else(|| panic!("morphisms {g} and {f} are not composable"))
    }
}

/// The opposite category as a zero-copy view.
#[derive(Clone, Copy)]
pub struct Op<'a>(pub &'a FinCategory);

impl CatView for Op<'_> {
    fn n_objects(&self) -> usize {
        self.0.n_objects()
    }
    fn n_morphisms(&self) -> usize {
        self.0.n_morphisms()
    }
    fn dom(&self, f: MorId) -> ObjId {
        self.0.cod(f)
    }
    fn cod(&self, f: MorId) -> ObjId {
        self.0.dom(f)
    }
    fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        self.0.hom(b, a)
    }
    fn id(&self, x: ObjId) -> MorId {
        self.0.id(x)
    }
    fn comp(&self, g: MorId, f: MorId) -> MorId {
        self.0.comp(f, g)
    }
}

fn check_laws(c: &FinCategory, report: &mut CheckReport) {
    let n = c.n_morphisms();
    let mut typing = Tally::new("typing");
    for (g, f) in c.composable_pairs() {
        let gf = c.comp(g, f);
        typing.check(c.dom(gf) == c.dom(f) && c.cod(gf) == c.cod(g), || {
            Witness::new(format!(
                "{g}∘{f} = {gf} lands outside hom(dom {f}, cod {g})"
            ))
            .morphisms(&[g, f, gf])
        });
    }
    let typing_ok = !typing.failed();
    report.push(typing.finish());

    let mut ident = Tally::new("identity");
    for f in 0..n {
        let (a, b) = (c.dom(f), c.cod(f));
        let left = c.comp(c.id(b), f);
        let right = c.comp(f, c.id(a));
        ident.check(left == f && right == f, || {
            Witness::new(format!("identity law fails at {f}")).morphisms(&[f])
        });
    }
    report.push(ident.finish());

    if !typing_ok {
        report.push(CheckItem::with_status(
            "associativity",
            Status::Skipped,
            "composition is ill-typed",
        ));
        return;
    }
    let mut assoc = Tally::new("associativity");
    for (g, f) in c.composable_pairs() {
        let gf = c.comp(g, f);
        for h in c.morphisms_from(c.cod(g)) {
            let lhs = c.comp(h, gf);
            let rhs = c.comp(c.comp(h, g), f);
            assoc.check(lhs == rhs, || {
                Witness::new(format!("{h}∘({g}∘{f}) = {lhs} but ({h}∘{g})∘{f} = {rhs}"))
                    .morphisms(&[h, g, f])
            });
        }
    }
    report.push(assoc.finish());
}

fn parse_tables(doc: &CategoryDoc) -> Result<FinCategory, String> {
    let mut seen = HashSet::new();
    for o in &doc.objects {
        if !seen.insert(o.as_str()) {
            return Err(format!("duplicate object {o:?}"));
        }
    }
    let obj = |name: &str| {
        doc.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| format!("dangling object reference {name:?}"))
    };
    let n = doc.morphisms.len();
    let mut slots: Vec<Option<(String, ObjId, ObjId)>> = vec![None; n];
    for m in &doc.morphisms {
        if m.id >= n {
            return Err(format!(
                "morphism id {} is not dense (have {n} morphisms)",
                m.id
            ));
        }
        if slots[m.id].is_some() {
            return Err(format!("duplicate morphism id {}", m.id));
        }
        let name = m.name.clone().unwrap_or_else(|| m.id.to_string());
        slots[m.id] = Some((name, obj(&m.dom)?, obj(&m.cod)?));
    }
    let morphisms: Vec<_> = slots.into_iter().map(|s| s.expect("dense ids")).collect();

    let mut identity = vec![UNDEFINED; doc.objects.len()];
    for (name, &f) in &doc.identity {
        let x = obj(name)?;
        if f >= n {
            return Err(format!("identity of {name:?} is dangling morphism {f}"));
        }
        if morphisms[f].1 != x || morphisms[f].2 != x {
            return Err(format!(
                "identity of {name:?} is morphism {f}, which is not an endomorphism of it"
            ));
        }
        identity[x] = f;
    }
    if let Some(x) = identity.iter().position(|&i| i == UNDEFINED) {
        return Err(format!("object {:?} has no identity", doc.objects[x]));
    }

    let mut table = vec![UNDEFINED; n * n];
    for &[g, f, gf] in &doc.compose {
        if g >= n || f >= n || gf >= n {
            return Err(format!(
                "compose entry [{g},{f},{gf}] references a nonexistent morphism"
            ));
        }
        if morphisms[g].1 != morphisms[f].2 {
            return Err(format!(
                "compose entry [{g},{f},{gf}] for a non-composable pair"
            ));
        }
        if table[g * n + f] != UNDEFINED {
            return Err(format!("compose entry for ({g},{f}) given twice"));
        }
        table[g * n + f] = gf;
    }
    for g in 0..n {
        for f in 0..n {
            if morphisms[g].1 == morphisms[f].2 && table[g * n + f] == UNDEFINED {
                return Err(format!(
                    "compose table missing the composable pair ({g},{f})"
                ));
            }
        }
    }
    Ok(FinCategory::from_tables(
        doc.objects.clone(),
        morphisms,
        identity,
        |g, f| table[g * n + f],
    ))
}

/// Validates a raw document. Malformed tables produce a `table` item with
/// status `Error` and the law items are skipped.
pub fn validate_category(doc: &CategoryDoc) -> CheckReport {
    let mut report = CheckReport::new("category");
    if doc.schema != FINCAT_SCHEMA {
        report.push(CheckItem::with_status(
            "table",
            Status::Error,
            format!("schema {:?}, expected {FINCAT_SCHEMA:?}", doc.schema),
        ));
        return report;
    }
    match parse_tables(doc) {
        Err(msg) => {
            let mut item = CheckItem::with_status("table", Status::Error, "malformed-table");
            item.witnesses.push(Witness::new(msg));
            report.push(item);
            for law in ["typing", "identity", "associativity"] {
                report.push(CheckItem::with_status(
                    law,
                    Status::Skipped,
                    "malformed-table",
                ));
            }
        }
        Ok(cat) => {
            report.push(CheckItem::pass("table", cat.n_morphisms() as u64));
            check_laws(&cat, &mut report);
        }
    }
    report
}

/// Reverses every morphism. `opposite(opposite(c)) == c` structurally.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let morphisms = (0..c.n_morphisms())
        .map(|f| (c.morphism_name(f).to_string(), c.cod(f), c.dom(f)))
        .collect();
    FinCategory::from_tables(
        c.object_names().to_vec(),
        morphisms,
        c.identity.clone(),
        |g, f| c.comp(f, g),
    )
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFlags {
    pub mono: bool,
    pub epi: bool,
    pub split_mono: bool,
    pub split_epi: bool,
    pub iso: bool,
}

pub fn morphism_flags_in<V: CatView>(c: &V, f: MorId) -> MorphismFlags {
    let (a, b) = (c.dom(f), c.cod(f));
    let mono = (0..c.n_objects()).all(|x| {
        let mut seen = HashSet::new();
        c.hom(x, a).iter().all(|&u| seen.insert(c.comp(f, u)))
    });
    let epi = (0..c.n_objects()).all(|y| {
        let mut seen = HashSet::new();
        c.hom(b, y).iter().all(|&v| seen.insert(c.comp(v, f)))
    });
    let back = c.hom(b, a);
    let split_mono = back.iter().any(|&r| c.comp(r, f) == c.id(a));
    let split_epi = back.iter().any(|&s| c.comp(f, s) == c.id(b));
    let iso = back
        .iter()
        .any(|&g| c.comp(g, f) == c.id(a) && c.comp(f, g) == c.id(b));
    MorphismFlags {
        mono,
        epi,
        split_mono,
        split_epi,
        iso,
    }
}

pub fn morphism_flags(c: &FinCategory, f: MorId) -> MorphismFlags {
    morphism_flags_in(c, f)
}

pub fn all_flags(c: &FinCategory) -> Vec<MorphismFlags> {
    (0..c.n_morphisms()).map(|f| morphism_flags(c, f)).collect()
}

/// Inverse of an isomorphism, if it is one.
pub fn inverse(c: &FinCategory, f: MorId) -> Option<MorId> {
    let (a, b) = (c.dom(f), c.cod(f));
    c.hom(b, a)
        .iter()
        .copied()
        .find(|&g| c.comp(g, f) == c.id(a) && c.comp(f, g) == c.id(b))
}

/// All `u` with `m ∘ u = x` (`x` and `m` share a codomain).
pub fn lifts_in<V: CatView>(c: &V, m: MorId, x: MorId) -> Vec<MorId> {
    if c.cod(m) != c.cod(x) {
        return Vec::new();
    }
    c.hom(c.dom(x), c.dom(m))
        .iter()
        .copied()
        .filter(|&u| c.comp(m, u) == x)
        .collect()
}

/// All `u` with `u ∘ e = x` (`x` and `e` share a domain).
pub fn extensions_in<V: CatView>(c: &V, e: MorId, x: MorId) -> Vec<MorId> {
    if c.dom(e) != c.dom(x) {
        return Vec::new();
    }
    c.hom(c.cod(e), c.cod(x))
        .iter()
        .copied()
        .filter(|&u| c.comp(u, e) == x)
        .collect()
}

pub fn factors_through(c: &FinCategory, x: MorId, m: MorId) -> bool {
    !lifts_in(c, m, x).is_empty()
}

pub fn initial_objects<V: CatView>(c: &V) -> Vec<ObjId> {
    (0..c.n_objects())
        .filter(|&i| (0..c.n_objects()).all(|x| c.hom(i, x).len() == 1))
        .collect()
}

pub fn terminal_objects<V: CatView>(c: &V) -> Vec<ObjId> {
    (0..c.n_objects())
        .filter(|&t| (0..c.n_objects()).all(|x| c.hom(x, t).len() == 1))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SquareKind {
    Plain,
    Pullback,
    Pushout,
}

/// ```text
///   P --top--> B
///   |          |
///  left      right
///   v          v
///   A -bottom-> D
/// ```
/// with `right ∘ top = bottom ∘ left`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutativeSquare {
    pub top: MorId,
    pub bottom: MorId,
    pub left: MorId,
    pub right: MorId,
    pub kind: SquareKind,
}

impl CommutativeSquare {
    pub fn plain(top: MorId, left: MorId, right: MorId, bottom: MorId) -> Self {
        CommutativeSquare {
            top,
            bottom,
            left,
            right,
            kind: SquareKind::Plain,
        }
    }

    pub fn commutes<V: CatView>(&self, c: &V) -> bool {
        c.cod(self.top) == c.dom(self.right)
            && c.cod(self.left) == c.dom(self.bottom)
            && c.dom(self.top) == c.dom(self.left)
            && c.cod(self.right) == c.cod(self.bottom)
            && c.comp(self.right, self.top) == c.comp(self.bottom, self.left)
    }
}

/// Cones over the cospan `f: A → D ← B: g`, counted per apex.
fn cone_counts<V: CatView>(c: &V, f: MorId, g: MorId) -> Vec<usize> {
    let (a, b) = (c.dom(f), c.dom(g));
    (0..c.n_objects())
        .map(|q| {
            let via_g: Vec<MorId> = c.hom(q, b).iter().map(|&y| c.comp(g, y)).collect();
            c.hom(q, a)
                .iter()
                .map(|&x| {
                    let fx = c.comp(f, x);
                    via_g.iter().filter(|&&gy| gy == fx).count()
                })
                .sum()
        })
        .collect()
}

/// Universal property for a commuting cone `(p, q)` over `(f, g)`: for every
/// apex the map `u ↦ (p∘u, q∘u)` must be a bijection onto the cones there.
fn is_universal<V: CatView>(c: &V, p: MorId, q: MorId, counts: &[usize]) -> bool {
    let apex = c.dom(p);
    (0..c.n_objects()).all(|x| {
        let homs = c.hom(x, apex);
        if homs.len() != counts[x] {
            return false;
        }
        let mut seen = HashSet::with_capacity(homs.len());
        homs.iter()
            .all(|&u| seen.insert((c.comp(p, u), c.comp(q, u))))
    })
}

/// Pullback of `f: A → D` and `g: B → D`. The result has `bottom = f`,
/// `right = g`; the least apex and then least `(left, top)` ids win.
pub fn pullback_in<V: CatView>(c: &V, f: MorId, g: MorId) -> Option<CommutativeSquare> {
    if c.cod(f) != c.cod(g) {
        return None;
    }
    let counts = cone_counts(c, f, g);
    let (a, b) = (c.dom(f), c.dom(g));
    for p_obj in 0..c.n_objects() {
        for &p in c.hom(p_obj, a) {
            let fp = c.comp(f, p);
            for &q in c.hom(p_obj, b) {
                if c.comp(g, q) == fp && is_universal(c, p, q, &counts) {
                    return Some(CommutativeSquare {
                        top: q,
                        bottom: f,
                        left: p,
                        right: g,
                        kind: SquareKind::Pullback,
                    });
                }
            }
        }
    }
    None
}

pub fn is_pullback_in<V: CatView>(c: &V, sq: &CommutativeSquare) -> bool {
    sq.commutes(c) && is_universal(c, sq.left, sq.top, &cone_counts(c, sq.bottom, sq.right))
}

pub fn pullback(c: &FinCategory, f: MorId, g: MorId) -> Option<CommutativeSquare> {
    pullback_in(c, f, g)
}

pub fn is_pullback(c: &FinCategory, sq: &CommutativeSquare) -> bool {
    is_pullback_in(c, sq)
}

/// Pushout of `f: P → A` and `g: P → B`. The result has `left = f`, `top = g`.
pub fn pushout_in<V: CatView>(c: &V, f: MorId, g: MorId) -> Option<CommutativeSquare> {
    // A pushout is a pullback in the opposite view; transposing the square
    // swaps the roles of (top, left) and (right, bottom).
    let op = OpView(c);
    pullback_in(&op, f, g).map(|sq| CommutativeSquare {
        top: g,
        left: f,
        right: sq.top,
        bottom: sq.left,
        kind: SquareKind::Pushout,
    })
}

pub fn is_pushout_in<V: CatView>(c: &V, sq: &CommutativeSquare) -> bool {
    if !sq.commutes(c) {
        return false;
    }
    let op = OpView(c);
    // In the opposite view the cospan is (left, top) with cone (bottom, right).
    let flipped = CommutativeSquare {
        top: sq.right,
        left: sq.bottom,
        right: sq.top,
        bottom: sq.left,
        kind: SquareKind::Plain,
    };
    is_pullback_in(&op, &flipped)
}

pub fn pushout(c: &FinCategory, f: MorId, g: MorId) -> Option<CommutativeSquare> {
    pushout_in(c, f, g)
}

pub fn is_pushout(c: &FinCategory, sq: &CommutativeSquare) -> bool {
    is_pushout_in(c, sq)
}

/// Opposite of an arbitrary view.
struct OpView<'a, V: CatView>(&'a V);

impl<V: CatView> CatView for OpView<'_, V> {
    fn n_objects(&self) -> usize {
        self.0.n_objects()
    }
    fn n_morphisms(&self) -> usize {
        self.0.n_morphisms()
    }
    fn dom(&self, f: MorId) -> ObjId {
        self.0.cod(f)
    }
    fn cod(&self, f: MorId) -> ObjId {
        self.0.dom(f)
    }
    fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        self.0.hom(b, a)
    }
    fn id(&self, x: ObjId) -> MorId {
        self.0.id(x)
    }
    fn comp(&self, g: MorId, f: MorId) -> MorId {
        self.0.comp(f, g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub id: usize,
    pub dom: String,
    pub cod: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// The `fincat/1` JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub schema: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub identity: BTreeMap<String, usize>,
    pub compose: Vec<[usize; 3]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The category with one object and one morphism.
    fn one() -> FinCategory {
        FinCategory::from_tables(
            vec!["*".into()],
            vec![("1".into(), 0, 0)],
            vec![0],
            |_, _| 0,
        )
    }

    /// 0 → 1 → 2 with ids 0,1,2 identities, 3 = f, 4 = g, 5 = gf.
    fn chain2() -> FinCategory {
        let morphisms = vec![
            ("1_0".into(), 0, 0),
            ("1_1".into(), 1, 1),
            ("1_2".into(), 2, 2),
            ("f".into(), 0, 1),
            ("g".into(), 1, 2),
            ("gf".into(), 0, 2),
        ];
        FinCategory::from_tables(
            vec!["0".into(), "1".into(), "2".into()],
            morphisms,
            vec![0, 1, 2],
            |g, f| match (g, f) {
                (g, f) if f < 3 => g,
                (g, f) if g < 3 => f,
                (4, 3) => 5,
                _ => unreachable!(),
            },
        )
    }

    #[test]
    fn one_is_valid_and_self_dual() {
        let c = one();
        assert!(c.validate().all_pass());
        assert_eq!(opposite(&c), c);
        let fl = morphism_flags(&c, 0);
        assert!(fl.mono && fl.epi && fl.split_mono && fl.split_epi && fl.iso);
    }

    #[test]
    fn dangling_compose_is_malformed() {
        let mut doc = one().to_doc();
        doc.compose[0][2] = 7;
        let r = validate_category(&doc);
        assert_eq!(r.status_of("table"), Some(Status::Error));
        assert_eq!(r.status_of("associativity"), Some(Status::Skipped));
        assert!(matches!(
            FinCategory::from_doc(&doc),
            Err(CategoryError::MalformedTable(_))
        ));
    }

    #[test]
    fn law_violation_is_distinct_from_malformed() {
        let c = chain2();
        let mut doc = c.to_doc();
        // 1_1 ∘ f := 1_0 has the wrong type but references only real ids.
        let entry = doc
            .compose
            .iter_mut()
            .find(|e| e[0] == 1 && e[1] == 3)
            .unwrap();
        entry[2] = 0;
        let r = validate_category(&doc);
        assert_eq!(r.status_of("table"), Some(Status::Pass));
        assert_eq!(r.status_of("typing"), Some(Status::Fail));
        assert!(matches!(
            FinCategory::from_doc(&doc),
            Err(CategoryError::LawViolation(_))
        ));
    }

    #[test]
    fn chain_opposite_reverses_arrows() {
        let c = chain2();
        assert!(c.validate().all_pass());
        let op = opposite(&c);
        assert!(op.validate().all_pass());
        assert_eq!((op.dom(3), op.cod(3)), (1, 0));
        assert_eq!(op.comp(3, 4), 5);
        assert_eq!(opposite(&op), c);
    }

    #[test]
    fn doc_round_trip() {
        let c = chain2();
        let doc = c.to_doc();
        let text = serde_json::to_string(&doc).unwrap();
        let back = FinCategory::from_doc(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back.to_doc()).unwrap(), text);
    }

    #[test]
    fn pullback_along_identity() {
        let c = chain2();
        let sq = pullback(&c, 3, c.id(1)).unwrap();
        assert_eq!(c.dom(sq.left), 0);
        assert!(is_pullback(&c, &sq));
    }

    #[test]
    fn chain_pushout_is_join() {
        let c = chain2();
        // Pushout of f and gf out of 0 is the object 2.
        let sq = pushout(&c, 3, 5).unwrap();
        assert_eq!(sq.kind, SquareKind::Pushout);
        assert_eq!(c.cod(sq.bottom), 2);
        assert!(is_pushout(&c, &sq));
        assert!(!is_pullback(&c, &sq) || c.dom(sq.top) == 0);
    }

    #[test]
    fn chain_terminal_and_initial() {
        let c = chain2();
        assert_eq!(initial_objects(&c), vec![0]);
        assert_eq!(terminal_objects(&c), vec![2]);
        assert_eq!(initial_objects(&Op(&c)), vec![2]);
    }
}
