//! Bicategory structures: a finite category with a class `E` of right
//! morphisms and a class `M` of left morphisms. Provides the axiom battery,
//! trivial objects, left exactness, and the noetherian forms cut out of the
//! subquotient form.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::{exact_join_check, exact_meet_check, Decomposition};
use crate::factor::{factorization_system_item, pair_exactness};
use crate::fincat::{
    all_flags, extensions_in, initial_objects, inverse, is_pullback_in, is_pushout_in, lifts_in,
    pullback_in, pushout_in, terminal_objects, CatView, CategoryDoc, CategoryError,
    CommutativeSquare, FinCategory, MorId, ObjId,
};
use crate::formcore::{dual_form, find_full_embedding, subform, Form, FormError, IsoOutcome};
use crate::lattice::check_bounded_lattice;
use crate::orean::{check_noetherian, check_orean, is_embedding, is_quotient, orean, OreanForm};
use crate::report::{CheckItem, CheckReport, Status, Tally, Witness};
use crate::subobjects::{
    e_quotients_form, m_subobjects_form, subquotients_form, subquotients_with_spans, Span,
};
use crate::subobjects::{epis, monos};
use crate::zoo::{
    finset_skeleton, groups_category, pointed_finset_skeleton, two_chain_classes, two_chain_forms,
    ZooCategory,
};

pub const BICAT_SCHEMA: &str = "bicat/1";

/// Node budget for the embedding search in [`optimality_check`].
pub const EMBEDDING_BUDGET: u64 = 2_000_000;

#[derive(Debug, Error)]
pub enum BicatError {
    #[error("class vector has {got} entries, the category has {want} morphisms")]
    ClassSize { got: usize, want: usize },
    #[error("axiom battery failed: {}", .0.join(", "))]
    AxiomBatteryFailed(Vec<String>),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Form(#[from] FormError),
}

#[derive(Debug, Clone)]
pub struct Bicategory {
    pub cat: Arc<FinCategory>,
    /// Right morphisms.
    pub e: Vec<bool>,
    /// Left morphisms.
    pub m: Vec<bool>,
    initial_left: Vec<bool>,
    terminal_right: Vec<bool>,
}

impl Bicategory {
    pub fn new(
        cat: Arc<FinCategory>,
        e: Vec<bool>,
        m: Vec<bool>,
    ) -> Result<Bicategory, BicatError> {
        let want = cat.n_morphisms();
        for v in [&e, &m] {
            if v.len() != want {
                return Err(BicatError::ClassSize { got: v.len(), want });
            }
        }
        let initial_left = (0..want).map(|f| universal_left(&cat, &m, f)).collect();
        let terminal_right = (0..want).map(|f| universal_right(&cat, &e, f)).collect();
        Ok(Bicategory {
            cat,
            e,
            m,
            initial_left,
            terminal_right,
        })
    }

    /// `(C^op, M, E)`.
    pub fn opposite(&self) -> Bicategory {
        let op = Arc::new(crate::fincat::opposite(&self.cat));
        Bicategory {
            cat: op,
            e: self.m.clone(),
            m: self.e.clone(),
            initial_left: self.terminal_right.clone(),
            terminal_right: self.initial_left.clone(),
        }
    }

    pub fn rights(&self) -> Vec<MorId> {
        (0..self.e.len()).filter(|&f| self.e[f]).collect()
    }

    pub fn lefts(&self) -> Vec<MorId> {
        (0..self.m.len()).filter(|&f| self.m[f]).collect()
    }

    pub fn is_initial_left(&self, f: MorId) -> bool {
        self.initial_left[f]
    }

    pub fn is_terminal_right(&self, f: MorId) -> bool {
        self.terminal_right[f]
    }

    /// Least initial left morphism with codomain `y`.
    pub fn initial_left_into(&self, y: ObjId) -> Option<MorId> {
        self.cat.morphisms_into(y).find(|&f| self.initial_left[f])
    }

    /// Least terminal right morphism with domain `x`.
    pub fn terminal_right_from(&self, x: ObjId) -> Option<MorId> {
        self.cat.morphisms_from(x).find(|&f| self.terminal_right[f])
    }

    /// Domain of some initial left morphism.
    pub fn left_trivial(&self, x: ObjId) -> bool {
        self.cat.morphisms_from(x).any(|f| self.initial_left[f])
    }

    /// Codomain of some terminal right morphism.
    pub fn right_trivial(&self, x: ObjId) -> bool {
        self.cat.morphisms_into(x).any(|f| self.terminal_right[f])
    }

    /// Least `(e, m)` with `f = m∘e`, `e` right and `m` left.
    pub fn factorize(&self, f: MorId) -> Option<(MorId, MorId)> {
        let c = &*self.cat;
        c.morphisms_from(c.dom(f))
            .filter(|&e| self.e[e])
            .find_map(|e| {
                c.hom(c.cod(e), c.cod(f))
                    .iter()
                    .find(|&&m| self.m[m] && c.comp(m, e) == f)
                    .map(|&m| (e, m))
            })
    }

    pub fn to_doc(&self) -> BicategoryDoc {
        BicategoryDoc {
            schema: BICAT_SCHEMA.to_string(),
            category: self.cat.to_doc(),
            e: self.rights(),
            m: self.lefts(),
        }
    }

    pub fn from_doc(doc: &BicategoryDoc) -> Result<Bicategory, BicatError> {
        let cat = FinCategory::from_doc(&doc.category)?;
        let n = cat.n_morphisms();
        let flags = |ids: &[MorId]| -> Result<Vec<bool>, BicatError> {
            let mut v = vec![false; n];
            for &f in ids {
                *v.get_mut(f).ok_or(BicatError::ClassSize {
                    got: f + 1,
                    want: n,
                })? = true;
            }
            Ok(v)
        };
        let (e, m) = (flags(&doc.e)?, flags(&doc.m)?);
        Bicategory::new(Arc::new(cat), e, m)
    }
}

/// `m ∈ M` through which every left morphism into its codomain factors once.
fn universal_left(c: &FinCategory, m_class: &[bool], m: MorId) -> bool {
    m_class[m]
        && c.morphisms_into(c.cod(m))
            .filter(|&n| m_class[n])
            .all(|n| lifts_in(c, n, m).len() == 1)
}

fn universal_right(c: &FinCategory, e_class: &[bool], e: MorId) -> bool {
    e_class[e]
        && c.morphisms_from(c.dom(e))
            .filter(|&n| e_class[n])
            .all(|n| extensions_in(c, n, e).len() == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicategoryDoc {
    pub schema: String,
    pub category: CategoryDoc,
    #[serde(rename = "E")]
    pub e: Vec<MorId>,
    #[serde(rename = "M")]
    pub m: Vec<MorId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    FactorizationSystem,
    PullbackParallelogram,
    PullbackCancellation,
    RightPullbackStability,
    InitialPullbacksArePushouts,
    PullbacksArePushouts,
    PushoutCompositeIsLeft,
    TrivialObjects,
    DiamondTopIsRight,
    DiamondRightIsPullback,
}

impl Axiom {
    pub const ALL: [Axiom; 10] = [
        Axiom::FactorizationSystem,
        Axiom::PullbackParallelogram,
        Axiom::PullbackCancellation,
        Axiom::RightPullbackStability,
        Axiom::InitialPullbacksArePushouts,
        Axiom::PullbacksArePushouts,
        Axiom::PushoutCompositeIsLeft,
        Axiom::TrivialObjects,
        Axiom::DiamondTopIsRight,
        Axiom::DiamondRightIsPullback,
    ];

    /// The six axioms whose conjunction characterizes emd-noetherian forms.
    pub const BATTERY: [Axiom; 6] = [
        Axiom::FactorizationSystem,
        Axiom::PullbackParallelogram,
        Axiom::InitialPullbacksArePushouts,
        Axiom::PushoutCompositeIsLeft,
        Axiom::TrivialObjects,
        Axiom::DiamondTopIsRight,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Axiom::FactorizationSystem => "B0",
            Axiom::PullbackParallelogram => "B1",
            Axiom::PullbackCancellation => "B1'",
            Axiom::RightPullbackStability => "B1a",
            Axiom::InitialPullbacksArePushouts => "B2",
            Axiom::PullbacksArePushouts => "B2'",
            Axiom::PushoutCompositeIsLeft => "B3",
            Axiom::TrivialObjects => "B4",
            Axiom::DiamondTopIsRight => "B5",
            Axiom::DiamondRightIsPullback => "B5'",
        }
    }

    /// Accepts labels such as `b1`, `B1'` or `B1′`.
    pub fn parse(s: &str) -> Result<Axiom, BicatError> {
        let norm = s.trim().replace('′', "'").to_ascii_uppercase();
        Axiom::ALL
            .into_iter()
            .find(|a| a.label().to_ascii_uppercase() == norm)
            .ok_or_else(|| BicatError::UnknownAxiom(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Direct,
    /// Evaluated on `(C^op, M, E)`.
    Dual,
}

pub fn check_axiom(b: &Bicategory, axiom: Axiom, side: Side) -> CheckReport {
    let subject = match side {
        Side::Direct => format!("axiom {}", axiom.label()),
        Side::Dual => format!("dual of axiom {}", axiom.label()),
    };
    let mut report = CheckReport::new(subject);
    let items = match side {
        Side::Direct => axiom_items(b, axiom),
        Side::Dual => axiom_items(&b.opposite(), axiom),
    };
    for item in items {
        report.push(item);
    }
    report
}

/// Runs several axioms, prefixing items with the axiom label.
pub fn check_axioms(b: &Bicategory, axioms: &[Axiom], side: Side) -> CheckReport {
    let target = match side {
        Side::Direct => None,
        Side::Dual => Some(b.opposite()),
    };
    let on = target.as_ref().unwrap_or(b);
    let mut report = CheckReport::new(match side {
        Side::Direct => "bicategory axioms",
        Side::Dual => "dual bicategory axioms",
    });
    for &a in axioms {
        let mut sub = CheckReport::new(a.label());
        for item in axiom_items(on, a) {
            sub.push(item);
        }
        report.absorb(a.label(), sub);
    }
    report
}

/// Labels of the axioms in `axioms` that do not pass.
pub fn failing_axioms(b: &Bicategory, axioms: &[Axiom], side: Side) -> Vec<String> {
    axioms
        .iter()
        .filter(|&&a| !check_axiom(b, a, side).all_pass())
        .map(|a| match side {
            Side::Direct => a.label().to_string(),
            Side::Dual => format!("dual {}", a.label()),
        })
        .collect()
}

fn axiom_items(b: &Bicategory, axiom: Axiom) -> Vec<CheckItem> {
    match axiom {
        Axiom::FactorizationSystem => proper_factorization_items(b),
        Axiom::RightPullbackStability => vec![right_pullback_stability(b)],
        Axiom::PullbackParallelogram => {
            vec![right_pullback_stability(b), parallelogram_pullbacks(b)]
        }
        Axiom::PullbackCancellation => vec![right_pullback_stability(b), pullback_cancellation(b)],
        Axiom::InitialPullbacksArePushouts => vec![pullbacks_are_pushouts(b, true)],
        Axiom::PullbacksArePushouts => vec![pullbacks_are_pushouts(b, false)],
        Axiom::PushoutCompositeIsLeft => vec![pushout_composite_is_left(b)],
        Axiom::TrivialObjects => vec![right_trivial_is_left_trivial(b)],
        Axiom::DiamondTopIsRight => vec![diamonds(b, false)],
        Axiom::DiamondRightIsPullback => vec![diamonds(b, true)],
    }
}

fn proper_factorization_items(b: &Bicategory) -> Vec<CheckItem> {
    let c = &*b.cat;
    let mut items = vec![factorization_system_item(c, &b.e, &b.m)];

    let mut t = Tally::new("isomorphisms-in-both-classes");
    for f in (0..c.n_morphisms()).filter(|&f| inverse(c, f).is_some()) {
        t.check(b.e[f] && b.m[f], || {
            Witness::new("isomorphism missing from a class").morphisms(&[f])
        });
    }
    items.push(t.finish());

    let mut t = Tally::new("closed-under-composition");
    for f in 0..c.n_morphisms() {
        for g in c.morphisms_from(c.cod(f)) {
            let gf = c.comp(g, f);
            if b.e[f] && b.e[g] {
                t.check(b.e[gf], || {
                    Witness::new("composite of right morphisms").morphisms(&[g, f])
                });
            }
            if b.m[f] && b.m[g] {
                t.check(b.m[gf], || {
                    Witness::new("composite of left morphisms").morphisms(&[g, f])
                });
            }
        }
    }
    items.push(t.finish());

    let mut t = Tally::new("factorizations-exist");
    for f in 0..c.n_morphisms() {
        t.check(b.factorize(f).is_some(), || {
            Witness::new("no right-then-left factorization").morphisms(&[f])
        });
    }
    items.push(t.finish());

    items.push(fiber_lattices(
        "subobject-lattices",
        m_subobjects_form(&b.cat, &b.m),
    ));
    items.push(fiber_lattices(
        "quotient-lattices",
        e_quotients_form(&b.cat, &b.e),
    ));

    let mut t = Tally::new("left-pullbacks-exist");
    for m in b.lefts() {
        for f in c.morphisms_into(c.cod(m)) {
            t.check(pullback_in(c, f, m).is_some(), || {
                Witness::new("no pullback").morphisms(&[m, f])
            });
        }
    }
    items.push(t.finish());

    let mut t = Tally::new("right-pushouts-exist");
    for e in b.rights() {
        for f in c.morphisms_from(c.dom(e)) {
            t.check(pushout_in(c, e, f).is_some(), || {
                Witness::new("no pushout").morphisms(&[e, f])
            });
        }
    }
    items.push(t.finish());
    items
}

fn fiber_lattices(name: &str, form: Result<Form, FormError>) -> CheckItem {
    match form {
        Err(e) => CheckItem::fail(name, Witness::new(e.to_string())),
        Ok(form) => {
            let mut t = Tally::new(name);
            for x in 0..form.n_objects() {
                let ok = check_bounded_lattice(&form.fiber_poset(x)).1.is_some();
                t.check(ok, || {
                    Witness::new("fiber is not a bounded lattice").objects(&[x])
                });
            }
            t.finish()
        }
    }
}

/// The pullback of a right morphism along a left one is right.
fn right_pullback_stability(b: &Bicategory) -> CheckItem {
    let c = &*b.cat;
    let mut t = Tally::new("right-pullback-stability");
    for e in b.rights() {
        for m in c.morphisms_into(c.cod(e)).filter(|&m| b.m[m]) {
            // bottom = m, right = e; the leg parallel to e is `left`.
            let ok = pullback_in(c, m, e).is_some_and(|sq| b.e[sq.left]);
            t.check(ok, || {
                Witness::new("pullback of the right morphism is missing or not right")
                    .morphisms(&[e, m])
            });
        }
    }
    t.finish()
}

/// Squares `P ↣ A ↠ B`, `P ↠ Q ↣ B` whose parallelogram over the initial
/// left morphism into `B` lifts into `P` must be pullbacks.
fn parallelogram_pullbacks(b: &Bicategory) -> CheckItem {
    let c = &*b.cat;
    let mut t = Tally::new("parallelogram-pullback");
    for a in b.rights() {
        let Some(z) = b.initial_left_into(c.cod(a)) else {
            continue;
        };
        let Some(par) = pullback_in(c, z, a) else {
            continue;
        };
        // par.top: W → A (left), par.left: W → Z (must be right).
        if !b.e[par.left] || !b.m[par.top] {
            continue;
        }
        for p1 in c.morphisms_into(c.dom(a)).filter(|&p| b.m[p]) {
            if lifts_in(c, p1, par.top).is_empty() {
                continue;
            }
            let ap1 = c.comp(a, p1);
            for p2 in c.morphisms_from(c.dom(p1)).filter(|&p| b.e[p]) {
                for &q in c.hom(c.cod(p2), c.cod(a)) {
                    if !b.m[q] || c.comp(q, p2) != ap1 {
                        continue;
                    }
                    let sq = CommutativeSquare::plain(p2, p1, q, a);
                    t.check(is_pullback_in(c, &sq), || {
                        Witness::new("square is not a pullback although the parallelogram is")
                            .morphisms(&[p2, p1, q, a])
                    });
                }
            }
        }
    }
    t.finish()
}

/// Two adjacent squares (left horizontals, right verticals): when the
/// outer rectangle is a pullback so is the right square.
fn pullback_cancellation(b: &Bicategory) -> CheckItem {
    let c = &*b.cat;
    let mut t = Tally::new("pullback-cancellation");
    for v2 in b.rights() {
        for t2 in c.morphisms_from(c.dom(v2)).filter(|&f| b.m[f]) {
            for v3 in c.morphisms_from(c.cod(t2)).filter(|&f| b.e[f]) {
                let v3t2 = c.comp(v3, t2);
                for &h2 in c.hom(c.cod(v2), c.cod(v3)) {
                    if !b.m[h2] || c.comp(h2, v2) != v3t2 {
                        continue;
                    }
                    if is_pullback_in(c, &CommutativeSquare::plain(t2, v2, v3, h2)) {
                        continue;
                    }
                    for t1 in c.morphisms_into(c.dom(v2)).filter(|&f| b.m[f]) {
                        let v2t1 = c.comp(v2, t1);
                        for v1 in c.morphisms_from(c.dom(t1)).filter(|&f| b.e[f]) {
                            for &h1 in c.hom(c.cod(v1), c.cod(v2)) {
                                if !b.m[h1] || c.comp(h1, v1) != v2t1 {
                                    continue;
                                }
                                let outer = CommutativeSquare::plain(
                                    c.comp(t2, t1),
                                    v1,
                                    v3,
                                    c.comp(h2, h1),
                                );
                                t.check(!is_pullback_in(c, &outer), || {
                                    Witness::new(
                                        "outer rectangle is a pullback but the right square is not",
                                    )
                                    .morphisms(&[t1, v1, h1, t2, v2, v3, h2])
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

/// Pullbacks of a right morphism along a left one (the initial left
/// morphism only, when `initial_only`) are pushouts.
fn pullbacks_are_pushouts(b: &Bicategory, initial_only: bool) -> CheckItem {
    let c = &*b.cat;
    let name = if initial_only {
        "pullbacks-over-initial-are-pushouts"
    } else {
        "pullbacks-are-pushouts"
    };
    let mut t = Tally::new(name);
    for e in b.rights() {
        let bottoms: Vec<MorId> = if initial_only {
            b.initial_left_into(c.cod(e)).into_iter().collect()
        } else {
            c.morphisms_into(c.cod(e)).filter(|&m| b.m[m]).collect()
        };
        for i in bottoms {
            let Some(sq) = pullback_in(c, i, e) else {
                t.check(false, || Witness::new("no pullback").morphisms(&[e, i]));
                continue;
            };
            if !b.e[sq.left] || !b.m[sq.top] {
                continue;
            }
            t.check(is_pushout_in(c, &sq), || {
                Witness::new("pullback is not a pushout").morphisms(&[sq.top, sq.left, e, i])
            });
        }
    }
    t.finish()
}

/// For a pushout of a left morphism along a right one, the pushout leg
/// precomposed with the initial left morphism stays left.
fn pushout_composite_is_left(b: &Bicategory) -> CheckItem {
    let c = &*b.cat;
    let mut t = Tally::new("pushout-composite-is-left");
    for m in b.lefts() {
        for e in c.morphisms_from(c.dom(m)).filter(|&e| b.e[e]) {
            let Some(sq) = pushout_in(c, e, m) else {
                t.check(false, || Witness::new("no pushout").morphisms(&[e, m]));
                continue;
            };
            if !b.e[sq.right] {
                continue;
            }
            let Some(z) = b.initial_left_into(c.cod(e)) else {
                continue;
            };
            t.check(b.m[c.comp(sq.bottom, z)], || {
                Witness::new("composite of the bottom morphisms is not left")
                    .morphisms(&[m, e, sq.bottom, z])
            });
        }
    }
    t.finish()
}

fn right_trivial_is_left_trivial(b: &Bicategory) -> CheckItem {
    let mut t = Tally::new("right-trivial-is-left-trivial");
    for x in 0..b.cat.n_objects() {
        t.check(!b.right_trivial(x) || b.left_trivial(x), || {
            Witness::new("right trivial object that is not left trivial").objects(&[x])
        });
    }
    t.finish()
}

/// The two-diamond configuration over a pushout trapezium `C ↠ B, C ↠ D`.
/// With `right_pullback = false`: the induced top arrow is right.
/// With `right_pullback = true`: for a right top arrow, the right diamond is
/// a pullback.
fn diamonds(b: &Bicategory, right_pullback: bool) -> CheckItem {
    let c = &*b.cat;
    let name = if right_pullback {
        "right-diamond-is-pullback"
    } else {
        "diamond-top-is-right"
    };
    let mut t = Tally::new(name);
    for c1 in b.rights() {
        for c2 in c.morphisms_from(c.dom(c1)).filter(|&f| b.e[f]) {
            let Some(trap) = pushout_in(c, c1, c2) else {
                continue;
            };
            let (bh, dh) = (trap.bottom, trap.right);
            if !b.e[bh] || !b.e[dh] {
                continue;
            }
            let (Some(zb), Some(zh)) = (
                b.initial_left_into(c.cod(c1)),
                b.initial_left_into(c.cod(dh)),
            ) else {
                continue;
            };
            let Some(left) = pullback_in(c, zb, c1) else {
                continue;
            };
            let (pa, pc) = (left.left, left.top);
            if !b.e[pa] || !b.m[pc] {
                continue;
            }
            let target = c.comp(c2, pc);
            if !right_pullback {
                let Some(right) = pullback_in(c, zh, dh) else {
                    continue;
                };
                let (qg, qd) = (right.left, right.top);
                if !b.e[qg] || !b.m[qd] {
                    continue;
                }
                for u in lifts_in(c, qd, target) {
                    t.check(b.e[u], || {
                        Witness::new("top arrow is not right").morphisms(&[u, c1, c2, zb, zh])
                    });
                }
                continue;
            }
            for q in c.morphisms_into(c.cod(c2)).filter(|&f| b.m[f]) {
                let Some(&g) = lifts_in(c, zh, c.comp(dh, q)).first() else {
                    continue;
                };
                if !b.e[g] {
                    continue;
                }
                let has_top = c
                    .hom(c.dom(pa), c.dom(q))
                    .iter()
                    .any(|&u| b.e[u] && c.comp(q, u) == target);
                if has_top {
                    let sq = CommutativeSquare::plain(q, g, dh, zh);
                    t.check(is_pullback_in(c, &sq), || {
                        Witness::new("right diamond is not a pullback")
                            .morphisms(&[q, g, dh, zh, c1, c2])
                    });
                }
            }
        }
    }
    t.finish()
}

/// The three stated equivalences between plain and primed axioms, each
/// evaluated only when the factorization axiom holds on that side.
pub fn axiom_equivalences(b: &Bicategory, side: Side) -> CheckReport {
    let dual;
    let on = match side {
        Side::Direct => b,
        Side::Dual => {
            dual = b.opposite();
            &dual
        }
    };
    let mut report = CheckReport::new("axiom equivalences");
    let base_ok = proper_factorization_items(on).iter().all(CheckItem::passed);
    let pairs = [
        (Axiom::PullbackParallelogram, Axiom::PullbackCancellation),
        (
            Axiom::InitialPullbacksArePushouts,
            Axiom::PullbacksArePushouts,
        ),
        (Axiom::DiamondTopIsRight, Axiom::DiamondRightIsPullback),
    ];
    for (plain, primed) in pairs {
        let name = format!("{}-iff-{}", plain.label(), primed.label());
        if !base_ok {
            report.push(CheckItem::with_status(
                name,
                Status::Skipped,
                "factorization axiom fails",
            ));
            continue;
        }
        let p = axiom_items(on, plain).iter().all(CheckItem::passed);
        let q = axiom_items(on, primed).iter().all(CheckItem::passed);
        report.push(CheckItem::from_bool(
            name,
            p == q,
            format!("{}={p}, {}={q}", plain.label(), primed.label()),
        ));
    }
    report
}

#[derive(Debug, Clone)]
pub struct TrivialObjects {
    pub left: Vec<bool>,
    pub right: Vec<bool>,
    pub initial_left: Vec<Option<MorId>>,
    pub terminal_right: Vec<Option<MorId>>,
    pub report: CheckReport,
}

/// Left and right trivial objects with their alternative characterizations
/// and the terminal/initial object cross-checks.
pub fn trivial_objects(b: &Bicategory) -> TrivialObjects {
    let c = &*b.cat;
    let n = c.n_objects();
    let left: Vec<bool> = (0..n).map(|x| b.left_trivial(x)).collect();
    let right: Vec<bool> = (0..n).map(|x| b.right_trivial(x)).collect();
    let mut report = CheckReport::new("trivial objects");

    let mut t = Tally::new("left-trivial-characterizations");
    for x in 0..n {
        let all_into_right = c.morphisms_into(x).all(|f| b.e[f]);
        let lefts_iso = c
            .morphisms_into(x)
            .filter(|&f| b.m[f])
            .all(|f| inverse(c, f).is_some());
        t.check(left[x] == all_into_right && left[x] == lefts_iso, || {
            Witness::new(format!(
                "trivial={}, all morphisms in right={all_into_right}, left morphisms iso={lefts_iso}",
                left[x]
            ))
            .objects(&[x])
        });
    }
    report.push(t.finish());

    let mut t = Tally::new("right-trivial-characterizations");
    for x in 0..n {
        let all_out_left = c.morphisms_from(x).all(|f| b.m[f]);
        let rights_iso = c
            .morphisms_from(x)
            .filter(|&f| b.e[f])
            .all(|f| inverse(c, f).is_some());
        t.check(right[x] == all_out_left && right[x] == rights_iso, || {
            Witness::new(format!(
                "trivial={}, all morphisms out left={all_out_left}, right morphisms iso={rights_iso}",
                right[x]
            ))
            .objects(&[x])
        });
    }
    report.push(t.finish());

    let terminals = terminal_objects(c);
    let initials = initial_objects(c);
    if let Some(&tt) = terminals.first() {
        report.push(CheckItem::from_bool(
            "terminal-is-right-trivial",
            terminals.iter().all(|&t| right[t]),
            "a terminal object is not right trivial",
        ));
        let i = right_trivial_is_left_trivial(b).passed();
        let ii = terminals.iter().all(|&t| left[t]);
        let iii = terminals
            .iter()
            .all(|&t| c.morphisms_into(t).all(|f| b.e[f]));
        let iv = (0..n).all(|x| right[x] == terminals.contains(&x));
        report.push(CheckItem::from_bool(
            "terminal-object-equivalences",
            i == ii && ii == iii && iii == iv,
            format!("right-trivial⇒left-trivial={i}, terminals left trivial={ii}, into terminal right={iii}, right trivial=terminal={iv}"),
        ).note(format!("holds={}", i && ii && iii && iv)));
        if let Some(&ii0) = initials.first() {
            let to_t = c.hom(ii0, tt)[0];
            report.push(CheckItem::from_bool(
                "initial-to-terminal-criterion",
                b.e[to_t] == iii,
                format!(
                    "initial→terminal right={}, into terminal right={iii}",
                    b.e[to_t]
                ),
            ));
        }
    } else {
        report.push(CheckItem::with_status(
            "terminal-object-equivalences",
            Status::Skipped,
            "no terminal object",
        ));
    }
    if let Some(&i0) = initials.first() {
        let mut t = Tally::new("initial-left-from-factorization");
        for y in 0..n {
            let f = c.hom(i0, y)[0];
            let ok = b.factorize(f).is_some_and(|(_, m)| b.is_initial_left(m));
            t.check(ok, || {
                Witness::new("left factor of the map from the initial object is not initial left")
                    .objects(&[y])
            });
        }
        report.push(t.finish());
    } else {
        report.push(CheckItem::with_status(
            "initial-left-from-factorization",
            Status::Skipped,
            "no initial object",
        ));
    }
    TrivialObjects {
        left,
        right,
        initial_left: (0..n).map(|y| b.initial_left_into(y)).collect(),
        terminal_right: (0..n).map(|x| b.terminal_right_from(x)).collect(),
        report,
    }
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub form: Form,
    /// Least `(e, m)` span of each retained cluster.
    pub spans: Vec<Vec<Span>>,
    pub report: CheckReport,
}

/// Subquotients `[e, m]` whose pushout of `m` along `e` is initial left,
/// verified noetherian with an exact meet decomposition.
pub fn synthesize_emd_form(b: &Bicategory) -> Result<Synthesis, BicatError> {
    let failed = failing_axioms(b, &Axiom::BATTERY, Side::Direct);
    if !failed.is_empty() {
        return Err(BicatError::AxiomBatteryFailed(failed));
    }
    let (form, spans) = filtered_subquotients(b)?;
    let form = form.with_label("emd synthesis");
    let mut report = CheckReport::new("emd synthesis");
    verify_synthesis(
        b,
        &form,
        &mut report,
        exact_meet_check,
        "exact-meet-decomposition",
    );
    Ok(Synthesis {
        form,
        spans,
        report,
    })
}

/// The dual construction: run on `(C^op, M, E)` and transpose back.
pub fn synthesize_ejd_form(b: &Bicategory) -> Result<Synthesis, BicatError> {
    let failed = failing_axioms(b, &Axiom::BATTERY, Side::Dual);
    if !failed.is_empty() {
        return Err(BicatError::AxiomBatteryFailed(failed));
    }
    let op = b.opposite();
    let (over_op, spans) = filtered_subquotients(&op)?;
    let form = rebase_dual(b, &over_op, "ejd synthesis");
    let mut report = CheckReport::new("ejd synthesis");
    verify_synthesis(
        b,
        &form,
        &mut report,
        exact_join_check,
        "exact-join-decomposition",
    );
    Ok(Synthesis {
        form,
        spans,
        report,
    })
}

/// Subquotients of the opposite bicategory, transposed back over `b.cat`.
/// This is the noetherian target the ejd synthesis embeds into.
pub fn dual_subquotients_form(b: &Bicategory) -> Result<Form, BicatError> {
    let op = b.opposite();
    let over_op = subquotients_form(&op.cat, &op.e, &op.m)?;
    Ok(rebase_dual(b, &over_op, "dual subquotients"))
}

fn rebase_dual(b: &Bicategory, over_op: &Form, label: &str) -> Form {
    let back = dual_form(over_op);
    let names = (0..back.n_objects())
        .map(|x| back.clusters(x).to_vec())
        .collect();
    Form::from_fn(b.cat.clone(), label, names, |f, t, s| back.ge(f, t, s))
}

fn filtered_subquotients(b: &Bicategory) -> Result<(Form, Vec<Vec<Span>>), BicatError> {
    let c = &*b.cat;
    let (all, spans) = subquotients_with_spans(&b.cat, &b.e, &b.m)?;
    let keep = |s: &Span| pushout_in(c, s.e, s.m).is_some_and(|sq| b.is_initial_left(sq.bottom));
    let selection: Vec<Vec<usize>> = spans
        .iter()
        .map(|row| (0..row.len()).filter(|&a| keep(&row[a])).collect())
        .collect();
    let kept = selection
        .iter()
        .zip(&spans)
        .map(|(sel, row)| sel.iter().map(|&a| row[a]).collect())
        .collect();
    Ok((subform(&all, &selection)?, kept))
}

fn verify_synthesis(
    b: &Bicategory,
    form: &Form,
    report: &mut CheckReport,
    exact: fn(&OreanForm) -> (CheckReport, Option<Decomposition>),
    exact_name: &str,
) {
    let (orean_report, of) = check_orean(form);
    report.push(CheckItem::from_bool(
        "orean",
        orean_report.all_pass(),
        "synthesized form is not orean",
    ));
    let Some(of) = of else {
        for name in ["noetherian", exact_name, "classes-round-trip"] {
            report.push(CheckItem::with_status(
                name,
                Status::Skipped,
                "form is not orean",
            ));
        }
        return;
    };
    let noeth = check_noetherian(&of);
    report.push(CheckItem::from_bool(
        "noetherian",
        noeth.all_pass(),
        "a noetherian axiom fails",
    ));
    let (exact_report, dec) = exact(&of);
    report.push(CheckItem::from_bool(
        exact_name,
        dec.is_some() && exact_report.all_pass(),
        "no exact decomposition of this kind",
    ));
    report.push(classes_round_trip(b, &of));
}

/// Embeddings of the form are the left morphisms, quotients the right ones.
fn classes_round_trip(b: &Bicategory, of: &OreanForm) -> CheckItem {
    let c = &*b.cat;
    let mut t = Tally::new("classes-round-trip");
    for f in 0..c.n_morphisms() {
        let emb = is_embedding(of, f, of.image(f));
        let quo = is_quotient(of, f, of.kernel(f));
        t.check(emb == b.m[f] && quo == b.e[f], || {
            Witness::new(format!(
                "embedding={emb} left={}, quotient={quo} right={}",
                b.m[f], b.e[f]
            ))
            .morphisms(&[f])
        });
    }
    t.finish()
}

/// Whether `synth` embeds fully into `other`, another form over the same base.
pub fn optimality_check(synth: &Form, other: &Form) -> CheckItem {
    let name = "embeds-into-other-form";
    match find_full_embedding(synth, other, EMBEDDING_BUDGET) {
        IsoOutcome::Found { .. } => CheckItem::pass(name, 1),
        IsoOutcome::Refuted { reason, .. } => CheckItem::fail(name, Witness::new(reason)),
        IsoOutcome::BudgetExhausted { nodes } => CheckItem::with_status(
            name,
            Status::BudgetExhausted,
            format!("{nodes} nodes searched"),
        ),
    }
}

/// Left exactness of the subobject/quotient pair against the axiom
/// criterion, plus the consequences that hold for left exact structures.
pub fn left_exact_bicat_check(b: &Bicategory) -> CheckReport {
    let c = &*b.cat;
    let mut report = CheckReport::new("left exact bicategory");
    let base_ok = check_axiom(b, Axiom::FactorizationSystem, Side::Direct).all_pass();
    report.push(CheckItem::from_bool(
        "orean-bicategory",
        base_ok,
        "factorization axiom fails",
    ));
    let forms = base_ok
        .then(|| {
            let fs = orean(&m_subobjects_form(&b.cat, &b.m).ok()?)?;
            let fe = orean(&e_quotients_form(&b.cat, &b.e).ok()?)?;
            Some((fs, fe))
        })
        .flatten();
    let Some((fs, fe)) = forms else {
        for name in [
            "left-exact-criterion",
            "join-decomposition-conditions",
            "meet-decomposition-conditions",
        ] {
            report.push(CheckItem::with_status(
                name,
                Status::Skipped,
                "subobjects and quotients are not orean",
            ));
        }
        return report;
    };
    let holds = |a: Axiom, s: Side| check_axiom(b, a, s).all_pass();
    let left_exact = pair_exactness(&fs, &fe).left_exact;
    let criterion = holds(Axiom::InitialPullbacksArePushouts, Side::Direct)
        && holds(Axiom::TrivialObjects, Side::Dual);
    report.push(
        CheckItem::from_bool(
            "left-exact-criterion",
            left_exact == criterion,
            format!("pair left exact={left_exact}, axiom criterion={criterion}"),
        )
        .note(format!("left-exact={left_exact}")),
    );
    report.push(CheckItem::from_bool(
        "left-exact",
        left_exact,
        "the subobject/quotient pair is not left exact",
    ));

    let has_initial = !initial_objects(c).is_empty();
    if left_exact && has_initial {
        let flags = all_flags(c);
        let mut t = Tally::new("right-are-regular-epis");
        let mut u = Tally::new("left-are-monos");
        for f in 0..c.n_morphisms() {
            let reg = is_regular_epi(c, f);
            t.check(b.e[f] == reg, || {
                Witness::new(format!("right={}, regular epi={reg}", b.e[f])).morphisms(&[f])
            });
            u.check(b.m[f] == flags[f].mono, || {
                Witness::new(format!("left={}, mono={}", b.m[f], flags[f].mono)).morphisms(&[f])
            });
        }
        report.push(t.finish());
        report.push(u.finish());
    }

    let noeth = check_noetherian(&fs).all_pass();
    if left_exact {
        let axioms = holds(Axiom::PullbackParallelogram, Side::Direct)
            && holds(Axiom::DiamondTopIsRight, Side::Direct);
        report.push(CheckItem::from_bool(
            "noetherian-criterion",
            noeth == axioms,
            format!("subobjects noetherian={noeth}, parallelogram and diamond axioms={axioms}"),
        ));
    }

    // A left decomposition: the conormal operator is the identity.
    let conormal_exact = |dec: Option<Decomposition>| {
        dec.is_some_and(|d| {
            d.exact
                && d.ks
                    .assign
                    .iter()
                    .all(|row| row.iter().enumerate().all(|(a, &v)| v == a))
        })
    };
    let join_form = noeth && conormal_exact(exact_join_check(&fs).1);
    let join_axioms = left_exact
        && holds(Axiom::RightPullbackStability, Side::Dual)
        && holds(Axiom::InitialPullbacksArePushouts, Side::Dual)
        && holds(Axiom::PushoutCompositeIsLeft, Side::Dual);
    let join_alt = holds(Axiom::FactorizationSystem, Side::Direct)
        && holds(Axiom::RightPullbackStability, Side::Dual)
        && holds(Axiom::PullbacksArePushouts, Side::Direct)
        && holds(Axiom::PullbacksArePushouts, Side::Dual)
        && holds(Axiom::PushoutCompositeIsLeft, Side::Dual)
        && holds(Axiom::TrivialObjects, Side::Dual);
    report.push(
        CheckItem::from_bool(
            "join-decomposition-conditions",
            join_form == join_axioms && join_axioms == join_alt,
            format!(
                "form={join_form}, conditions={join_axioms}, alternative conditions={join_alt}"
            ),
        )
        .note(format!("holds={join_axioms}")),
    );

    let meet_form = noeth && conormal_exact(exact_meet_check(&fs).1);
    let meet_axioms = left_exact
        && holds(Axiom::PullbackParallelogram, Side::Direct)
        && holds(Axiom::InitialPullbacksArePushouts, Side::Direct)
        && holds(Axiom::TrivialObjects, Side::Direct)
        && holds(Axiom::TrivialObjects, Side::Dual)
        && holds(Axiom::DiamondTopIsRight, Side::Direct);
    report.push(
        CheckItem::from_bool(
            "meet-decomposition-conditions",
            meet_form == meet_axioms,
            format!("form={meet_form}, conditions={meet_axioms}"),
        )
        .note(format!("holds={meet_axioms}")),
    );

    if let Some(z) = zero_object(c) {
        let items = pointed_reformulations(b, z);
        let classes_match =
            report.passed("right-are-regular-epis") && report.passed("left-are-monos");
        if classes_match {
            let general = [
                holds(Axiom::PullbackParallelogram, Side::Direct),
                holds(Axiom::InitialPullbacksArePushouts, Side::Direct),
                holds(Axiom::DiamondTopIsRight, Side::Direct),
            ];
            let pointed: Vec<bool> = items.iter().map(CheckItem::passed).collect();
            report.push(CheckItem::from_bool(
                "pointed-reformulations-agree",
                pointed == general,
                format!("kernel forms {pointed:?}, general axioms {general:?}"),
            ));
        }
        for item in items {
            report.push(item);
        }
    }
    report
}

fn zero_object(c: &FinCategory) -> Option<ObjId> {
    let t = terminal_objects(c);
    initial_objects(c).into_iter().find(|x| t.contains(x))
}

/// `e` coequalizes some parallel pair universally. The kernel pair is tried
/// first; without one every parallel pair into the domain is searched.
pub fn is_regular_epi(c: &FinCategory, e: MorId) -> bool {
    if let Some(kp) = pullback_in(c, e, e) {
        return is_coequalizer(c, e, kp.left, kp.top);
    }
    (0..c.n_objects()).any(|z| {
        let homs = c.hom(z, c.dom(e));
        homs.iter()
            .any(|&p| homs.iter().any(|&q| is_coequalizer(c, e, p, q)))
    })
}

fn is_coequalizer(c: &FinCategory, e: MorId, p: MorId, q: MorId) -> bool {
    if c.comp(e, p) != c.comp(e, q) {
        return false;
    }
    c.morphisms_from(c.dom(e))
        .filter(|&h| c.comp(h, p) == c.comp(h, q))
        .all(|h| extensions_in(c, e, h).len() == 1)
}

/// The kernel of `f` as the pullback of `f` along the zero object.
fn kernel(c: &FinCategory, z: ObjId, f: MorId) -> Option<MorId> {
    let zero_in = c.hom(z, c.cod(f))[0];
    pullback_in(c, zero_in, f).map(|sq| sq.top)
}

fn is_kernel(c: &FinCategory, z: ObjId, m: MorId) -> bool {
    let to_zero = c.hom(c.dom(m), z)[0];
    c.morphisms_from(c.cod(m)).any(|g| {
        let from_zero = c.hom(z, c.cod(g))[0];
        is_pullback_in(c, &CommutativeSquare::plain(m, to_zero, g, from_zero))
    })
}

/// Kernel-based forms of the pullback, pushout and diamond axioms in a
/// pointed category, compared with the general axioms.
fn pointed_reformulations(b: &Bicategory, z: ObjId) -> Vec<CheckItem> {
    let c = &*b.cat;
    let stability = right_pullback_stability(b).passed();
    let mut t = Tally::new("kernel-pullback-criterion");
    let mut u = Tally::new("kernel-transfer");
    for e in b.rights() {
        let ker = kernel(c, z, e);
        for m in c.morphisms_into(c.dom(e)).filter(|&f| b.m[f]) {
            let em = c.comp(e, m);
            let through = ker.is_some_and(|k| !lifts_in(c, m, k).is_empty());
            let m_kernel = is_kernel(c, z, m);
            for top in c.morphisms_from(c.dom(m)).filter(|&f| b.e[f]) {
                for &n in c.hom(c.cod(top), c.cod(e)) {
                    if !b.m[n] || c.comp(n, top) != em {
                        continue;
                    }
                    if through {
                        t.check(is_pullback_in(c, &CommutativeSquare::plain(top, m, n, e)), || {
                            Witness::new("kernel factors through the left side but the square is not a pullback")
                                .morphisms(&[top, m, n, e])
                        });
                    }
                    if m_kernel {
                        u.check(is_kernel(c, z, n), || {
                            Witness::new("left side is a kernel but the right side is not")
                                .morphisms(&[top, m, n, e])
                        });
                    }
                }
            }
        }
    }
    let mut t = t.finish();
    if !stability {
        t.status = Status::Fail;
        t.note = Some("pullbacks of right morphisms along left ones are not right".into());
    }
    let mut v = Tally::new("right-are-cokernels-of-kernels");
    for e in b.rights() {
        let ok = kernel(c, z, e).is_some_and(|k| {
            let to_zero = c.hom(c.dom(k), z)[0];
            let from_zero = c.hom(z, c.cod(e))[0];
            is_pushout_in(c, &CommutativeSquare::plain(k, to_zero, e, from_zero))
        });
        v.check(ok, || {
            Witness::new("right morphism is not the cokernel of its kernel").morphisms(&[e])
        });
    }
    vec![t, v.finish(), u.finish()]
}

/// The two displayed structures on the 2-chain, each with its form.
pub fn two_chain_example() -> [(Bicategory, Form); 2] {
    two_chain_forms().map(|form| {
        let idx = if form.label().contains("(1,2,3)") {
            0
        } else {
            1
        };
        let (e, m) = two_chain_classes(form.base())
            .into_iter()
            .nth(idx)
            .expect("two structures");
        let b =
            Bicategory::new(form.base_arc().clone(), e, m).expect("classes cover every morphism");
        (b, form)
    })
}

/// Names accepted by [`zoo_bicategory`].
pub const ZOO_BICATEGORY_NAMES: [&str; 5] = [
    "sets",
    "pointed-sets",
    "groups",
    "two-chain-123",
    "two-chain-132",
];

/// Zoo categories with epimorphisms as right and monomorphisms as left
/// morphisms, or one of the two 2-chain structures.
pub fn zoo_bicategory(name: &str, n: usize) -> Option<Bicategory> {
    let with_epis_monos = |z: ZooCategory| {
        let (e, m) = (epis(&z.cat), monos(&z.cat));
        Bicategory::new(z.cat, e, m).expect("classes cover every morphism")
    };
    match name {
        "sets" => Some(with_epis_monos(finset_skeleton(n))),
        "pointed-sets" => Some(with_epis_monos(pointed_finset_skeleton(n))),
        "groups" => Some(with_epis_monos(groups_category(n))),
        "two-chain-123" => two_chain_example().into_iter().next().map(|(b, _)| b),
        "two-chain-132" => two_chain_example().into_iter().nth(1).map(|(b, _)| b),
        _ => None,
    }
}

/// Every zoo bicategory at its default size.
pub fn zoo_bicategories() -> Vec<(&'static str, Bicategory)> {
    ZOO_BICATEGORY_NAMES
        .iter()
        .map(|&name| {
            let n = if name == "groups" { 4 } else { 3 };
            (
                name,
                zoo_bicategory(name, n).expect("catalog names are known"),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formcore::find_isomorphism;
    use crate::zoo::{exaq_form, quotients_form, subgroup_form};

    fn sets(n: usize) -> Bicategory {
        let z = finset_skeleton(n);
        Bicategory::new(z.cat.clone(), epis(&z.cat), monos(&z.cat)).unwrap()
    }

    #[test]
    fn axiom_labels_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(Axiom::parse(a.label()).unwrap(), a);
        }
        assert_eq!(Axiom::parse("b5′").unwrap(), Axiom::DiamondRightIsPullback);
        assert!(Axiom::parse("B9").is_err());
    }

    #[test]
    fn sets_satisfy_the_dual_battery() {
        let b = sets(3);
        for a in Axiom::ALL {
            let r = check_axiom(&b, a, Side::Dual);
            assert!(r.all_pass(), "{}: {}", a.label(), r.to_pretty());
        }
    }

    #[test]
    fn dual_side_is_the_opposite_direct_side() {
        let b = sets(2);
        for a in Axiom::ALL {
            let dual = check_axiom(&b, a, Side::Dual);
            let direct = check_axiom(&b.opposite(), a, Side::Direct);
            assert_eq!(dual.items, direct.items, "{}", a.label());
        }
    }

    #[test]
    fn sets_synthesize_the_pairs_form() {
        let z = finset_skeleton(3);
        let b = Bicategory::new(z.cat.clone(), epis(&z.cat), monos(&z.cat)).unwrap();
        let s = synthesize_ejd_form(&b).unwrap();
        assert!(s.report.all_pass(), "{}", s.report.to_pretty());
        assert_eq!(s.form.fiber_sizes(), vec![1, 2, 5, 15]);
        assert!(find_isomorphism(&s.form, &exaq_form(&z)).found().is_some());
        assert!(matches!(
            synthesize_emd_form(&b),
            Err(BicatError::AxiomBatteryFailed(_))
        ));
    }

    #[test]
    fn pointed_sets_synthesize_quotients() {
        let z = pointed_finset_skeleton(3);
        let b = Bicategory::new(z.cat.clone(), epis(&z.cat), monos(&z.cat)).unwrap();
        let s = synthesize_ejd_form(&b).unwrap();
        assert!(s.report.all_pass(), "{}", s.report.to_pretty());
        assert!(find_isomorphism(&s.form, &quotients_form(&z))
            .found()
            .is_some());
    }

    #[test]
    fn two_chain_structures_give_the_displayed_forms() {
        for (b, form) in two_chain_example() {
            let s = synthesize_ejd_form(&b).unwrap();
            assert!(s.report.all_pass(), "{}", s.report.to_pretty());
            assert!(
                find_isomorphism(&s.form, &form).found().is_some(),
                "{}",
                form.label()
            );
        }
    }

    #[test]
    fn trivial_objects_of_sets() {
        let b = sets(3);
        let t = trivial_objects(&b);
        assert!(t.report.all_pass(), "{}", t.report.to_pretty());
        // only the empty set has no proper subobject; only sizes ≤ 1 lack proper quotients
        assert_eq!(t.left, vec![true, false, false, false]);
        assert_eq!(t.right, vec![true, true, false, false]);
    }

    #[test]
    fn zero_object_is_trivial_on_both_sides() {
        let z = pointed_finset_skeleton(3);
        let b = Bicategory::new(z.cat.clone(), epis(&z.cat), monos(&z.cat)).unwrap();
        let t = trivial_objects(&b);
        assert!(t.left[0] && t.right[0]);
        assert!(t.report.all_pass(), "{}", t.report.to_pretty());
    }

    #[test]
    fn equivalences_hold_for_sets() {
        let b = sets(3);
        for side in [Side::Direct, Side::Dual] {
            let r = axiom_equivalences(&b, side);
            assert!(r.all_pass(), "{}", r.to_pretty());
        }
    }

    #[test]
    fn doc_round_trip() {
        let b = sets(2);
        let doc = b.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let back = Bicategory::from_doc(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.e, b.e);
        assert_eq!(back.m, b.m);
    }

    #[test]
    fn left_exactness_follows_the_axiom_criterion() {
        let z = pointed_finset_skeleton(3);
        let b = Bicategory::new(z.cat.clone(), epis(&z.cat), monos(&z.cat)).unwrap();
        assert!(!left_exact_bicat_check(&b).passed("left-exact"));
        let r = left_exact_bicat_check(&b.opposite());
        assert!(r.all_pass(), "{}", r.to_pretty());
        assert!(r.passed("pointed-reformulations-agree"));
        let r = left_exact_bicat_check(&sets(3));
        assert!(!r.passed("left-exact") && r.passed("left-exact-criterion"));
    }

    #[test]
    fn small_groups_synthesize_subgroups() {
        let z = groups_category(4);
        let b = Bicategory::new(z.cat.clone(), epis(&z.cat), monos(&z.cat)).unwrap();
        let s = synthesize_emd_form(&b).unwrap();
        assert!(s.report.all_pass(), "{}", s.report.to_pretty());
        assert!(find_isomorphism(&s.form, &subgroup_form(&z))
            .found()
            .is_some());
        assert!(left_exact_bicat_check(&b).all_pass());
    }

    #[test]
    fn synthesized_form_embeds_into_the_pairs_form() {
        let z = finset_skeleton(2);
        let b = Bicategory::new(z.cat.clone(), epis(&z.cat), monos(&z.cat)).unwrap();
        let s = synthesize_ejd_form(&b).unwrap();
        assert!(optimality_check(&s.form, &exaq_form(&z)).passed());
    }

    #[test]
    fn dual_subquotients_are_noetherian_and_receive_the_synthesis() {
        let z = finset_skeleton(2);
        let b = Bicategory::new(z.cat.clone(), epis(&z.cat), monos(&z.cat)).unwrap();
        let target = dual_subquotients_form(&b).unwrap();
        assert_eq!(target.fiber_sizes(), vec![1, 2, 6]);
        let of = check_orean(&target).1.unwrap();
        assert!(check_noetherian(&of).all_pass());
        let s = synthesize_ejd_form(&b).unwrap();
        assert!(optimality_check(&s.form, &target).passed());
    }
}
