//! Orean structure on a validated form: fiber lattices, direct and inverse
//! images, images and kernels, conormal/normal clusters, hulls, embeddings and
//! quotients, the noetherian axioms and closure operators.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{
    all_flags, inverse, lifts_in, CatView, FinCategory, MorId, MorphismFlags, ObjId,
};
use crate::formcore::{
    dual_form, subform, validate_form, validate_operator, Form, FormError, Operator,
};
use crate::lattice::{check_bounded_lattice, greatest_of, least_of, LatticeTables};
use crate::report::{CheckItem, CheckReport, Status, Tally, Witness};

/// Default node budget for closure-operator enumeration.
pub const DEFAULT_CENSUS_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OreanError {
    #[error("form is not orean: {0}")]
    NotOrean(String),
    #[error("operator is not an idempotent closure operator: {0}")]
    NotClosure(String),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// A form together with its verified lattice and Galois data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OreanForm {
    form: Form,
    fibers: Vec<LatticeTables>,
    direct: Vec<Vec<usize>>,
    inverse: Vec<Vec<usize>>,
}

impl OreanForm {
    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn base(&self) -> &FinCategory {
        self.form.base()
    }

    pub fn n_objects(&self) -> usize {
        self.form.n_objects()
    }

    pub fn fiber_size(&self, x: ObjId) -> usize {
        self.form.fiber_size(x)
    }

    pub fn fiber(&self, x: ObjId) -> &LatticeTables {
        &self.fibers[x]
    }

    pub fn top(&self, x: ObjId) -> usize {
        self.fibers[x].top
    }

    pub fn bottom(&self, x: ObjId) -> usize {
        self.fibers[x].bottom
    }

    pub fn meet(&self, x: ObjId, a: usize, b: usize) -> usize {
        self.fibers[x].meet(a, b)
    }

    pub fn join(&self, x: ObjId, a: usize, b: usize) -> usize {
        self.fibers[x].join(a, b)
    }

    /// `a ≤ b` over `x`.
    pub fn leq(&self, x: ObjId, a: usize, b: usize) -> bool {
        self.form.le_at(x, a, b)
    }

    /// `f·S`.
    pub fn direct(&self, f: MorId, s: usize) -> usize {
        self.direct[f][s]
    }

    /// `T·f`.
    pub fn inverse(&self, f: MorId, t: usize) -> usize {
        self.inverse[f][t]
    }

    pub fn image(&self, f: MorId) -> usize {
        self.direct(f, self.top(self.base().dom(f)))
    }

    pub fn kernel(&self, f: MorId) -> usize {
        self.inverse(f, self.bottom(self.base().cod(f)))
    }

    pub fn cluster_name(&self, x: ObjId, a: usize) -> &str {
        self.form.cluster_name(x, a)
    }

    /// The dual orean form: order reversed, direct and inverse images swapped.
    pub fn dual(&self) -> OreanForm {
        OreanForm {
            form: dual_form(&self.form),
            fibers: self.fibers.iter().map(LatticeTables::dual).collect(),
            direct: self.inverse.clone(),
            inverse: self.direct.clone(),
        }
    }
}

/// Runs the form axioms, then (O1)–(O3), the Galois laws and the image laws.
/// The orean structure is returned only when every item passes.
pub fn check_orean(form: &Form) -> (CheckReport, Option<OreanForm>) {
    let mut report = CheckReport::new(format!("orean {}", form.label()));
    report.absorb("", validate_form(form));
    const LATER: [&str; 13] = [
        "O1",
        "O2",
        "O3",
        "galois",
        "functoriality",
        "galois.unit",
        "galois.counit",
        "galois.bottom",
        "galois.top",
        "galois.joins",
        "galois.meets",
        "identity-images",
        "iso-images",
    ];
    if !report.all_pass() {
        for name in LATER {
            report.push(CheckItem::with_status(
                name,
                Status::Skipped,
                "form axioms fail",
            ));
        }
        return (report, None);
    }
    let c = form.base();

    let mut o1 = Tally::new("O1");
    let mut fibers = Vec::with_capacity(form.n_objects());
    for x in 0..form.n_objects() {
        let (sub, tables) = check_bounded_lattice(&form.fiber_poset(x));
        o1.check(tables.is_some(), || {
            let why = sub
                .failing()
                .map(|i| i.name.clone())
                .collect::<Vec<_>>()
                .join(", ");
            Witness::new(format!("fiber over {} fails {why}", c.object_name(x))).objects(&[x])
        });
        fibers.push(tables);
    }

    let mut o2 = Tally::new("O2");
    for (g, f) in c.composable_pairs() {
        let gf = c.comp(g, f);
        let composite = form.rel(g).after(form.rel(f));
        let missing = form.rel(gf).first_excess(&composite);
        o2.check(missing.is_none(), || {
            let (cc, a) = missing.unwrap();
            Witness::new(format!(
                "{} ≥_(g∘f) {} with no intermediate cluster",
                form.cluster_name(c.cod(g), cc),
                form.cluster_name(c.dom(f), a)
            ))
            .morphisms(&[g, f])
            .clusters(&[(c.cod(g), cc), (c.dom(f), a)])
        });
    }

    let mut o3 = Tally::new("O3");
    let mut direct = Vec::with_capacity(c.n_morphisms());
    let mut inv = Vec::with_capacity(c.n_morphisms());
    for f in 0..c.n_morphisms() {
        let (x, y) = (c.dom(f), c.cod(f));
        let (px, py) = (form.fiber_poset(x), form.fiber_poset(y));
        let mut d = Vec::with_capacity(form.fiber_size(x));
        for s in 0..form.fiber_size(x) {
            let above: Vec<usize> = (0..form.fiber_size(y))
                .filter(|&t| form.ge(f, t, s))
                .collect();
            let least = least_of(&py, &above);
            o3.check(least.ok().is_some(), || {
                Witness::new(format!(
                    "no direct image of {} ({least:?})",
                    form.cluster_name(x, s)
                ))
                .morphisms(&[f])
                .clusters(&[(x, s)])
            });
            d.push(least.ok().unwrap_or(usize::MAX));
        }
        let mut i = Vec::with_capacity(form.fiber_size(y));
        for t in 0..form.fiber_size(y) {
            let below: Vec<usize> = (0..form.fiber_size(x))
                .filter(|&s| form.ge(f, t, s))
                .collect();
            let greatest = greatest_of(&px, &below);
            o3.check(greatest.ok().is_some(), || {
                Witness::new(format!(
                    "no inverse image of {} ({greatest:?})",
                    form.cluster_name(y, t)
                ))
                .morphisms(&[f])
                .clusters(&[(y, t)])
            });
            i.push(greatest.ok().unwrap_or(usize::MAX));
        }
        direct.push(d);
        inv.push(i);
    }
    let structural = !o1.failed() && !o3.failed();
    report.push(o1.finish());
    report.push(o2.finish());
    report.push(o3.finish());
    if !structural {
        for name in &LATER[3..] {
            report.push(CheckItem::with_status(
                *name,
                Status::Skipped,
                "no lattice or Galois data",
            ));
        }
        return (report, None);
    }

    let of = OreanForm {
        form: form.clone(),
        fibers: fibers.into_iter().map(Option::unwrap).collect(),
        direct,
        inverse: inv,
    };
    for item in galois_laws(&of) {
        report.push(item);
    }
    let ok = report.all_pass();
    (report, ok.then_some(of))
}

/// Convenience: the orean structure, if the form has one.
pub fn orean(form: &Form) -> Option<OreanForm> {
    check_orean(form).1
}

fn galois_laws(of: &OreanForm) -> Vec<CheckItem> {
    let c = of.base();
    let name = |x: ObjId, a: usize| of.cluster_name(x, a).to_string();
    let mut galois = Tally::new("galois");
    let mut func = Tally::new("functoriality");
    let mut unit = Tally::new("galois.unit");
    let mut counit = Tally::new("galois.counit");
    let mut bot = Tally::new("galois.bottom");
    let mut top = Tally::new("galois.top");
    let mut joins = Tally::new("galois.joins");
    let mut meets = Tally::new("galois.meets");
    let mut ident = Tally::new("identity-images");
    let mut iso = Tally::new("iso-images");

    for f in 0..c.n_morphisms() {
        let (x, y) = (c.dom(f), c.cod(f));
        let (nx, ny) = (of.fiber_size(x), of.fiber_size(y));
        for s in 0..nx {
            for t in 0..ny {
                let a = of.leq(y, of.direct(f, s), t);
                let b = of.form.ge(f, t, s);
                let d = of.leq(x, s, of.inverse(f, t));
                galois.check(a == b && b == d, || {
                    Witness::new(format!(
                        "adjunction breaks at {} and {}",
                        name(x, s),
                        name(y, t)
                    ))
                    .morphisms(&[f])
                    .clusters(&[(x, s), (y, t)])
                });
            }
            unit.check(of.leq(x, s, of.inverse(f, of.direct(f, s))), || {
                Witness::new(format!("(f·S)·f ≱ S for S = {}", name(x, s))).morphisms(&[f])
            });
            for s2 in 0..nx {
                let lhs = of.direct(f, of.join(x, s, s2));
                let rhs = of.join(y, of.direct(f, s), of.direct(f, s2));
                joins.check(lhs == rhs, || {
                    Witness::new(format!(
                        "f·(S∨S′) ≠ f·S∨f·S′ for {}, {}",
                        name(x, s),
                        name(x, s2)
                    ))
                    .morphisms(&[f])
                });
            }
        }
        for t in 0..ny {
            counit.check(of.leq(y, of.direct(f, of.inverse(f, t)), t), || {
                Witness::new(format!("f·(T·f) ≰ T for T = {}", name(y, t))).morphisms(&[f])
            });
            for t2 in 0..ny {
                let lhs = of.inverse(f, of.meet(y, t, t2));
                let rhs = of.meet(x, of.inverse(f, t), of.inverse(f, t2));
                meets.check(lhs == rhs, || {
                    Witness::new(format!(
                        "(T∧T′)·f ≠ T·f∧T′·f for {}, {}",
                        name(y, t),
                        name(y, t2)
                    ))
                    .morphisms(&[f])
                });
            }
        }
        bot.check(of.direct(f, of.bottom(x)) == of.bottom(y), || {
            Witness::new("f·⊥ ≠ ⊥").morphisms(&[f])
        });
        top.check(of.inverse(f, of.top(y)) == of.top(x), || {
            Witness::new("⊤·f ≠ ⊤").morphisms(&[f])
        });

        if c.is_identity(f) {
            for s in 0..nx {
                ident.check(of.direct(f, s) == s && of.inverse(f, s) == s, || {
                    Witness::new(format!("identity moves {}", name(x, s))).morphisms(&[f])
                });
            }
        }
        if let Some(g) = inverse(c, f) {
            for s in 0..nx {
                let ok = of.inverse(f, of.direct(f, s)) == s && of.direct(f, s) == of.inverse(g, s);
                iso.check(ok, || {
                    Witness::new(format!("isomorphism law fails at {}", name(x, s)))
                        .morphisms(&[f, g])
                });
            }
        }
    }
    for (g, f) in c.composable_pairs() {
        let gf = c.comp(g, f);
        let (x, z) = (c.dom(f), c.cod(g));
        for s in 0..of.fiber_size(x) {
            func.check(of.direct(gf, s) == of.direct(g, of.direct(f, s)), || {
                Witness::new(format!("(g∘f)·S ≠ g·(f·S) for {}", name(x, s))).morphisms(&[g, f])
            });
        }
        for t in 0..of.fiber_size(z) {
            func.check(of.inverse(gf, t) == of.inverse(f, of.inverse(g, t)), || {
                Witness::new(format!("T·(g∘f) ≠ (T·g)·f for {}", name(z, t))).morphisms(&[g, f])
            });
        }
    }
    vec![
        galois.finish(),
        func.finish(),
        unit.finish(),
        counit.finish(),
        bot.finish(),
        top.finish(),
        joins.finish(),
        meets.finish(),
        ident.finish(),
        iso.finish(),
    ]
}

/// What is known about one cluster.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterInfo {
    /// Least morphism whose image is this cluster.
    pub conormal: Option<MorId>,
    /// Least morphism whose kernel is this cluster.
    pub normal: Option<MorId>,
    pub interior_c: Option<usize>,
    pub exterior_c: Option<usize>,
    pub interior_n: Option<usize>,
    pub exterior_n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub info: Vec<Vec<ClusterInfo>>,
}

impl Classification {
    pub fn get(&self, x: ObjId, a: usize) -> &ClusterInfo {
        &self.info[x][a]
    }

    pub fn is_conormal(&self, x: ObjId, a: usize) -> bool {
        self.info[x][a].conormal.is_some()
    }

    pub fn is_normal(&self, x: ObjId, a: usize) -> bool {
        self.info[x][a].normal.is_some()
    }

    pub fn conormal(&self, x: ObjId) -> Vec<usize> {
        (0..self.info[x].len())
            .filter(|&a| self.is_conormal(x, a))
            .collect()
    }

    pub fn normal(&self, x: ObjId) -> Vec<usize> {
        (0..self.info[x].len())
            .filter(|&a| self.is_normal(x, a))
            .collect()
    }

    pub fn conormal_selection(&self) -> Vec<Vec<usize>> {
        (0..self.info.len()).map(|x| self.conormal(x)).collect()
    }

    pub fn normal_selection(&self) -> Vec<Vec<usize>> {
        (0..self.info.len()).map(|x| self.normal(x)).collect()
    }
}

pub fn classify(of: &OreanForm) -> Classification {
    let c = of.base();
    let mut info: Vec<Vec<ClusterInfo>> = (0..of.n_objects())
        .map(|x| vec![ClusterInfo::default(); of.fiber_size(x)])
        .collect();
    for f in 0..c.n_morphisms() {
        let im = of.image(f);
        let slot = &mut info[c.cod(f)][im].conormal;
        slot.get_or_insert(f);
        let ker = of.kernel(f);
        let slot = &mut info[c.dom(f)][ker].normal;
        slot.get_or_insert(f);
    }
    for (x, row) in info.iter_mut().enumerate() {
        let p = of.form.fiber_poset(x);
        let cn: Vec<usize> = (0..row.len())
            .filter(|&a| row[a].conormal.is_some())
            .collect();
        let nn: Vec<usize> = (0..row.len())
            .filter(|&a| row[a].normal.is_some())
            .collect();
        for a in 0..row.len() {
            let below = |set: &[usize]| -> Vec<usize> {
                set.iter().copied().filter(|&b| p.leq(b, a)).collect()
            };
            let above = |set: &[usize]| -> Vec<usize> {
                set.iter().copied().filter(|&b| p.leq(a, b)).collect()
            };
            row[a].interior_c = greatest_of(&p, &below(&cn)).ok();
            row[a].exterior_c = least_of(&p, &above(&cn)).ok();
            row[a].interior_n = greatest_of(&p, &below(&nn)).ok();
            row[a].exterior_n = least_of(&p, &above(&nn)).ok();
        }
    }
    Classification { info }
}

/// A hull (subform of conormal or normal clusters) with its index map.
#[derive(Debug, Clone)]
pub struct Hull {
    pub form: Form,
    /// `selection[x][i]` is the parent cluster of hull cluster `i`.
    pub selection: Vec<Vec<usize>>,
    pub orean: Option<OreanForm>,
}

pub fn hull_conormal(of: &OreanForm, cls: &Classification) -> Hull {
    make_hull(of, cls.conormal_selection(), "conormal hull")
}

pub fn hull_normal(of: &OreanForm, cls: &Classification) -> Hull {
    make_hull(of, cls.normal_selection(), "normal hull")
}

fn make_hull(of: &OreanForm, selection: Vec<Vec<usize>>, what: &str) -> Hull {
    let form = subform(&of.form, &selection)
        .expect("restricting a valid form keeps (F1)-(F3)")
        .with_label(format!("{what} of {}", of.form.label()));
    let orean = orean(&form);
    Hull {
        form,
        selection,
        orean,
    }
}

/// Strong oreanness plus the hull formulas, for both hulls.
pub fn check_hulls(of: &OreanForm, cls: &Classification) -> CheckReport {
    let mut report = CheckReport::new(format!("hulls of {}", of.form.label()));
    let hc = hull_conormal(of, cls);
    let hn = hull_normal(of, cls);
    report.push(CheckItem::from_bool(
        "conormal-hull-orean",
        hc.orean.is_some(),
        "the conormal hull is not orean",
    ));
    report.push(CheckItem::from_bool(
        "normal-hull-orean",
        hn.orean.is_some(),
        "the normal hull is not orean",
    ));
    for item in hull_criterion(of, cls, &hc, "conormal-hull") {
        report.push(item);
    }
    let dual = of.dual();
    let dcls = classify(&dual);
    let dh = hull_conormal(&dual, &dcls);
    for item in hull_criterion(&dual, &dcls, &dh, "normal-hull") {
        report.push(item);
    }
    report
}

pub fn is_strongly_orean(of: &OreanForm, cls: &Classification) -> bool {
    hull_conormal(of, cls).orean.is_some() && hull_normal(of, cls).orean.is_some()
}

/// Criterion and formulas for the conormal hull; the normal case runs on the dual.
fn hull_criterion(
    of: &OreanForm,
    cls: &Classification,
    hull: &Hull,
    prefix: &str,
) -> Vec<CheckItem> {
    let c = of.base();
    let info = |x: ObjId, a: usize| cls.get(x, a);
    let mut exists = true;
    for x in 0..of.n_objects() {
        exists &= info(x, of.bottom(x)).exterior_c.is_some();
        let cn = cls.conormal(x);
        for &a in &cn {
            for &b in &cn {
                exists &= info(x, of.join(x, a, b)).exterior_c.is_some();
                exists &= info(x, of.meet(x, a, b)).interior_c.is_some();
            }
        }
    }
    for f in 0..c.n_morphisms() {
        for a in cls.conormal(c.cod(f)) {
            exists &= info(c.dom(f), of.inverse(f, a)).interior_c.is_some();
        }
    }
    let criterion = CheckItem::from_bool(
        format!("{prefix}.criterion"),
        exists == hull.orean.is_some(),
        format!(
            "hull orean = {} but the interior/exterior constructions exist = {exists}",
            hull.orean.is_some()
        ),
    );
    let Some(h) = &hull.orean else {
        return vec![
            criterion,
            CheckItem::with_status(
                format!("{prefix}.formulas"),
                Status::Skipped,
                "hull is not orean",
            ),
        ];
    };
    let mut t = Tally::new(format!("{prefix}.formulas"));
    let up = |x: ObjId, i: usize| hull.selection[x][i];
    for x in 0..of.n_objects() {
        t.check(up(x, h.top(x)) == of.top(x), || {
            Witness::new("hull top differs").objects(&[x])
        });
        t.check(
            Some(up(x, h.bottom(x))) == info(x, of.bottom(x)).exterior_c,
            || Witness::new("hull bottom is not the exterior of ⊥").objects(&[x]),
        );
        let n = h.fiber_size(x);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (up(x, i), up(x, j));
                t.check(
                    Some(up(x, h.meet(x, i, j))) == info(x, of.meet(x, a, b)).interior_c,
                    || {
                        Witness::new("hull meet is not the interior of the meet")
                            .clusters(&[(x, a), (x, b)])
                    },
                );
                t.check(
                    Some(up(x, h.join(x, i, j))) == info(x, of.join(x, a, b)).exterior_c,
                    || {
                        Witness::new("hull join is not the exterior of the join")
                            .clusters(&[(x, a), (x, b)])
                    },
                );
            }
        }
    }
    for f in 0..c.n_morphisms() {
        let (x, y) = (c.dom(f), c.cod(f));
        for i in 0..h.fiber_size(y) {
            let a = up(y, i);
            t.check(
                Some(up(x, h.inverse(f, i))) == info(x, of.inverse(f, a)).interior_c,
                || {
                    Witness::new("hull inverse image is not the interior")
                        .morphisms(&[f])
                        .clusters(&[(y, a)])
                },
            );
        }
        for i in 0..h.fiber_size(x) {
            let a = up(x, i);
            t.check(up(y, h.direct(f, i)) == of.direct(f, a), || {
                Witness::new("hull direct image differs")
                    .morphisms(&[f])
                    .clusters(&[(x, a)])
            });
        }
    }
    vec![criterion, t.finish()]
}

/// Canonical embeddings and quotients (least morphism id) per cluster.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representatives {
    pub emb: Vec<Vec<Option<MorId>>>,
    pub quo: Vec<Vec<Option<MorId>>>,
}

impl Representatives {
    pub fn compute(of: &OreanForm) -> Representatives {
        let dual = of.dual();
        Representatives {
            emb: embedding_table(of, &all_flags(of.base())),
            quo: embedding_table(&dual, &all_flags(dual.base())),
        }
    }

    pub fn embedding(&self, x: ObjId, a: usize) -> Option<MorId> {
        self.emb[x][a]
    }

    pub fn quotient(&self, x: ObjId, r: usize) -> Option<MorId> {
        self.quo[x][r]
    }
}

fn embedding_table(of: &OreanForm, flags: &[MorphismFlags]) -> Vec<Vec<Option<MorId>>> {
    let c = of.base();
    (0..of.n_objects())
        .map(|x| {
            let mut row = vec![None; of.fiber_size(x)];
            for m in c.morphisms_into(x) {
                let a = of.image(m);
                if row[a].is_none() && flags[m].mono && is_embedding(of, m, a) {
                    row[a] = Some(m);
                }
            }
            row
        })
        .collect()
}

/// `m` has image `a` and every `f'` with `Im f' ≤ a` factors uniquely through it.
pub fn is_embedding(of: &OreanForm, m: MorId, a: usize) -> bool {
    let c = of.base();
    let x = c.cod(m);
    of.image(m) == a
        && c.morphisms_into(x)
            .filter(|&f| of.leq(x, of.image(f), a))
            .all(|f| lifts_in(c, m, f).len() == 1)
}

/// The dual notion, checked on the dual form.
pub fn is_quotient(of: &OreanForm, e: MorId, r: usize) -> bool {
    is_embedding(&of.dual(), e, r)
}

pub fn find_embedding(of: &OreanForm, x: ObjId, a: usize) -> Option<MorId> {
    let c = of.base();
    c.morphisms_into(x)
        .find(|&m| of.image(m) == a && is_embedding(of, m, a))
}

pub fn find_quotient(of: &OreanForm, x: ObjId, r: usize) -> Option<MorId> {
    find_embedding(&of.dual(), x, r)
}

/// Identities embed top clusters and are quotients of bottom clusters.
pub fn lemma_identity_representatives(of: &OreanForm) -> CheckItem {
    let dual = of.dual();
    let mut t = Tally::new("identity-representatives");
    for x in 0..of.n_objects() {
        let id = of.base().id(x);
        t.check(is_embedding(of, id, of.top(x)), || {
            Witness::new("identity is not an embedding of ⊤").objects(&[x])
        });
        t.check(is_embedding(&dual, id, dual.top(x)), || {
            Witness::new("identity is not a quotient of ⊥").objects(&[x])
        });
    }
    t.finish()
}

/// For each morphism, `(ι, u, π)` with `f = ι∘u∘π`, `u` an isomorphism.
pub fn n2_factorizations(
    of: &OreanForm,
    reps: &Representatives,
) -> Vec<Result<(MorId, MorId, MorId), String>> {
    let c = of.base();
    (0..c.n_morphisms())
        .map(|f| {
            let (x, y) = (c.dom(f), c.cod(f));
            let (a, r) = (of.image(f), of.kernel(f));
            let iota = reps.embedding(y, a).ok_or_else(|| {
                format!(
                    "image {} of {} has no embedding",
                    of.cluster_name(y, a),
                    c.morphism_name(f)
                )
            })?;
            let pi = reps.quotient(x, r).ok_or_else(|| {
                format!(
                    "kernel {} of {} has no quotient",
                    of.cluster_name(x, r),
                    c.morphism_name(f)
                )
            })?;
            c.hom(c.cod(pi), c.dom(iota))
                .iter()
                .copied()
                .find(|&u| inverse(c, u).is_some() && c.comp(iota, c.comp(u, pi)) == f)
                .map(|u| (iota, u, pi))
                .ok_or_else(|| {
                    format!(
                        "{} ≠ {}∘u∘{} for every isomorphism u",
                        c.morphism_name(f),
                        c.morphism_name(iota),
                        c.morphism_name(pi)
                    )
                })
        })
        .collect()
}

/// (N1) both formulas, their reduced forms, (N2), (N3) and, under (N1), the
/// restricted modular law.
pub fn check_noetherian(of: &OreanForm) -> CheckReport {
    let c = of.base();
    let cls = classify(of);
    let mut report = CheckReport::new(format!("noetherian {}", of.form.label()));
    let name = |x: ObjId, a: usize| of.cluster_name(x, a).to_string();

    let mut join = Tally::new("N1-join");
    let mut meet = Tally::new("N1-meet");
    let mut remb = Tally::new("reduced-n1");
    for f in 0..c.n_morphisms() {
        let (x, y) = (c.dom(f), c.cod(f));
        let (k, im) = (of.kernel(f), of.image(f));
        let (mut full_j, mut red_j, mut full_m, mut red_m) = (true, true, true, true);
        for s in 0..of.fiber_size(x) {
            let back = of.inverse(f, of.direct(f, s));
            let ok = back == of.join(x, s, k);
            full_j &= ok;
            if of.leq(x, k, s) {
                red_j &= back == s;
            }
            join.check(ok, || {
                Witness::new(format!(
                    "(f·S)·f = {} but S∨Ker f = {} for S = {}",
                    name(x, back),
                    name(x, of.join(x, s, k)),
                    name(x, s)
                ))
                .morphisms(&[f])
                .clusters(&[(x, s)])
            });
        }
        for t in 0..of.fiber_size(y) {
            let there = of.direct(f, of.inverse(f, t));
            let ok = there == of.meet(y, t, im);
            full_m &= ok;
            if of.leq(y, t, im) {
                red_m &= there == t;
            }
            meet.check(ok, || {
                Witness::new(format!(
                    "f·(T·f) = {} but T∧Im f = {} for T = {}",
                    name(y, there),
                    name(y, of.meet(y, t, im)),
                    name(y, t)
                ))
                .morphisms(&[f])
                .clusters(&[(y, t)])
            });
        }
        remb.check(full_j == red_j && full_m == red_m, || {
            Witness::new("a formula and its reduced form disagree").morphisms(&[f])
        });
    }
    let n1 = !join.failed() && !meet.failed();
    report.push(join.finish());
    report.push(meet.finish());
    report.push(remb.finish());

    let reps = Representatives::compute(of);
    let mut n2 = Tally::new("N2");
    for (f, r) in n2_factorizations(of, &reps).into_iter().enumerate() {
        n2.check(r.is_ok(), || {
            Witness::new(r.clone().unwrap_err()).morphisms(&[f])
        });
    }
    let mut n2 = n2.finish();
    if n2.passed() {
        n2 = n2.note(
            "every morphism is ι∘u∘π for the least-id embedding and quotient, u an isomorphism",
        );
    }
    report.push(n2);

    let mut n3 = Tally::new("N3");
    for x in 0..of.n_objects() {
        let nn = cls.normal(x);
        for &a in &nn {
            for &b in &nn {
                let j = of.join(x, a, b);
                n3.check(cls.is_normal(x, j), || {
                    Witness::new(format!("{} ∨ {} is not normal", name(x, a), name(x, b)))
                        .clusters(&[(x, a), (x, b)])
                });
            }
        }
        let cn = cls.conormal(x);
        for &a in &cn {
            for &b in &cn {
                let m = of.meet(x, a, b);
                n3.check(cls.is_conormal(x, m), || {
                    Witness::new(format!("{} ∧ {} is not conormal", name(x, a), name(x, b)))
                        .clusters(&[(x, a), (x, b)])
                });
            }
        }
    }
    report.push(n3.finish());

    if n1 {
        report.push(restricted_modular_law(of, &cls));
    } else {
        report.push(CheckItem::with_status(
            "modular-law",
            Status::Skipped,
            "(N1) fails",
        ));
    }
    report
}

/// `(X∨Y)∧Z = X∨(Y∧Z)` for `X ≤ Z` with `X` normal and `Y` conormal, or `Y`
/// normal and `Z` conormal.
pub fn restricted_modular_law(of: &OreanForm, cls: &Classification) -> CheckItem {
    let mut t = Tally::new("modular-law");
    for x in 0..of.n_objects() {
        let n = of.fiber_size(x);
        for a in 0..n {
            for z in 0..n {
                if !of.leq(x, a, z) {
                    continue;
                }
                for y in 0..n {
                    let applicable = (cls.is_normal(x, a) && cls.is_conormal(x, y))
                        || (cls.is_normal(x, y) && cls.is_conormal(x, z));
                    if !applicable {
                        continue;
                    }
                    let lhs = of.meet(x, of.join(x, a, y), z);
                    let rhs = of.join(x, a, of.meet(x, y, z));
                    t.check(lhs == rhs, || {
                        Witness::new("restricted modular law fails").clusters(&[
                            (x, a),
                            (x, y),
                            (x, z),
                        ])
                    });
                }
            }
        }
    }
    t.finish()
}

fn fixed_points(t: &Operator) -> Vec<Vec<usize>> {
    t.assign
        .iter()
        .map(|row| (0..row.len()).filter(|&a| row[a] == a).collect())
        .collect()
}

/// Monotone and extensive (`co`: intensive). Returns the report and whether
/// the operator is idempotent.
pub fn validate_closure(
    of: &OreanForm,
    t: &Operator,
    co: bool,
) -> Result<(CheckReport, bool), OreanError> {
    let flags = validate_operator(&of.form, &of.form, t)?;
    let mut report = CheckReport::new(if co {
        "co-closure operator"
    } else {
        "closure operator"
    });
    report.push(CheckItem::from_bool(
        "monotone",
        flags.valid,
        "operator is not monotone",
    ));
    let mut ext = Tally::new(if co { "intensive" } else { "extensive" });
    for x in 0..of.n_objects() {
        for a in 0..of.fiber_size(x) {
            let b = t.apply(x, a);
            let ok = if co { of.leq(x, b, a) } else { of.leq(x, a, b) };
            ext.check(ok, || {
                Witness::new("cluster moves the wrong way").clusters(&[(x, a), (x, b)])
            });
        }
    }
    report.push(ext.finish());
    Ok((report, flags.idempotent == Some(true)))
}

/// The subform of closed clusters, with the transferred operations verified.
#[derive(Debug, Clone)]
pub struct ClosedSubform {
    pub orean: OreanForm,
    pub selection: Vec<Vec<usize>>,
    pub report: CheckReport,
}

pub fn closed_subform(of: &OreanForm, kappa: &Operator) -> Result<ClosedSubform, OreanError> {
    let (rep, idem) = validate_closure(of, kappa, false)?;
    if !rep.all_pass() || !idem {
        return Err(OreanError::NotClosure(
            if idem {
                "not monotone and extensive"
            } else {
                "not idempotent"
            }
            .into(),
        ));
    }
    let selection = fixed_points(kappa);
    let sub = subform(&of.form, &selection)?
        .with_label(format!("closed clusters of {}", of.form.label()));
    let (orep, ok) = check_orean(&sub);
    let closed = ok.ok_or_else(|| {
        OreanError::NotOrean(
            orep.failing()
                .map(|i| i.name.clone())
                .collect::<Vec<_>>()
                .join(", "),
        )
    })?;
    let c = of.base();
    let up = |x: ObjId, i: usize| selection[x][i];
    let k = |x: ObjId, a: usize| kappa.apply(x, a);
    let mut report = CheckReport::new("closed subform");
    let mut t = Tally::new("closed-orean");
    for x in 0..of.n_objects() {
        t.check(up(x, closed.top(x)) == of.top(x), || {
            Witness::new("top is not inherited").objects(&[x])
        });
        t.check(up(x, closed.bottom(x)) == k(x, of.bottom(x)), || {
            Witness::new("bottom is not the closure of ⊥").objects(&[x])
        });
        let n = closed.fiber_size(x);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (up(x, i), up(x, j));
                t.check(up(x, closed.meet(x, i, j)) == of.meet(x, a, b), || {
                    Witness::new("meet is not inherited").clusters(&[(x, a), (x, b)])
                });
                t.check(
                    up(x, closed.join(x, i, j)) == k(x, of.join(x, a, b)),
                    || {
                        Witness::new("join is not the closure of the join")
                            .clusters(&[(x, a), (x, b)])
                    },
                );
            }
        }
    }
    for f in 0..c.n_morphisms() {
        let (x, y) = (c.dom(f), c.cod(f));
        for i in 0..closed.fiber_size(x) {
            t.check(
                up(y, closed.direct(f, i)) == k(y, of.direct(f, up(x, i))),
                || Witness::new("direct image is not the closure").morphisms(&[f]),
            );
        }
        for i in 0..closed.fiber_size(y) {
            t.check(
                up(x, closed.inverse(f, i)) == of.inverse(f, up(y, i)),
                || Witness::new("inverse image is not inherited").morphisms(&[f]),
            );
        }
    }
    report.push(t.finish());
    Ok(ClosedSubform {
        orean: closed,
        selection,
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum Census {
    Complete {
        operators: Vec<Operator>,
        nodes: u64,
    },
    BudgetExhausted {
        found: Vec<Operator>,
        nodes: u64,
    },
}

impl Census {
    pub fn operators(&self) -> Option<&[Operator]> {
        match self {
            Census::Complete { operators, .. } => Some(operators),
            Census::BudgetExhausted { .. } => None,
        }
    }
}

/// Every closure (`co`: co-closure) operator, in lexicographic order.
pub fn enumerate_closure_operators(of: &OreanForm, co: bool, budget: u64) -> Census {
    let vars: Vec<(ObjId, usize)> = of.form.all_clusters().collect();
    let cands: Vec<Vec<usize>> = vars
        .iter()
        .map(|&(x, a)| {
            (0..of.fiber_size(x))
                .filter(|&b| if co { of.leq(x, b, a) } else { of.leq(x, a, b) })
                .collect()
        })
        .collect();
    let mut st = CensusState {
        of,
        vars,
        cands,
        assign: (0..of.n_objects())
            .map(|x| vec![usize::MAX; of.fiber_size(x)])
            .collect(),
        found: Vec::new(),
        nodes: 0,
        budget,
    };
    if st.descend(0) {
        Census::Complete {
            operators: st.found,
            nodes: st.nodes,
        }
    } else {
        Census::BudgetExhausted {
            found: st.found,
            nodes: st.nodes,
        }
    }
}

struct CensusState<'a> {
    of: &'a OreanForm,
    vars: Vec<(ObjId, usize)>,
    cands: Vec<Vec<usize>>,
    assign: Vec<Vec<usize>>,
    found: Vec<Operator>,
    nodes: u64,
    budget: u64,
}

impl CensusState<'_> {
    /// False when the budget ran out.
    fn descend(&mut self, i: usize) -> bool {
        if i == self.vars.len() {
            let t = Operator {
                assign: self.assign.clone(),
            };
            if t.then(&t) == t {
                self.found.push(t);
            }
            return true;
        }
        let (x, a) = self.vars[i];
        for k in 0..self.cands[i].len() {
            let b = self.cands[i][k];
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            self.assign[x][a] = b;
            if self.monotone_so_far(x, a) && !self.descend(i + 1) {
                return false;
            }
        }
        self.assign[x][a] = usize::MAX;
        true
    }

    fn monotone_so_far(&self, x: ObjId, a: usize) -> bool {
        let c = self.of.base();
        let form = &self.of.form;
        let b = self.assign[x][a];
        for y in 0..c.n_objects() {
            for &h in c.hom(x, y) {
                for (a2, &b2) in self.assign[y].iter().enumerate() {
                    if b2 != usize::MAX && form.ge(h, a2, a) && !form.ge(h, b2, b) {
                        return false;
                    }
                }
            }
            for &h in c.hom(y, x) {
                for (a2, &b2) in self.assign[y].iter().enumerate() {
                    if b2 != usize::MAX && form.ge(h, a, a2) && !form.ge(h, b, b2) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn constant_top(of: &OreanForm) -> Operator {
    Operator::from_fn(of.form(), |x, _| of.top(x))
}

pub fn constant_bottom(of: &OreanForm) -> Operator {
    Operator::from_fn(of.form(), |x, _| of.bottom(x))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityFlags {
    pub conormal: bool,
    pub normal: bool,
    pub binormal: bool,
}

/// Image and kernel preservation, with the top/bottom consequences and the
/// uniqueness of conormal (normal) operators out of conormal (normal) forms.
pub fn operator_normality(
    src: &OreanForm,
    dst: &OreanForm,
    t: &Operator,
) -> (NormalityFlags, CheckReport) {
    let c = src.base();
    let conormal = (0..c.n_morphisms()).all(|f| t.apply(c.cod(f), src.image(f)) == dst.image(f));
    let normal = (0..c.n_morphisms()).all(|f| t.apply(c.dom(f), src.kernel(f)) == dst.kernel(f));
    let flags = NormalityFlags {
        conormal,
        normal,
        binormal: conormal && normal,
    };
    let mut report = CheckReport::new("operator normality");
    let tops = (0..src.n_objects()).all(|x| t.apply(x, src.top(x)) == dst.top(x));
    let bots = (0..src.n_objects()).all(|x| t.apply(x, src.bottom(x)) == dst.bottom(x));
    report.push(CheckItem::from_bool(
        "preserves-extremes",
        (!conormal || tops) && (!normal || bots),
        "a conormal operator moves ⊤ or a normal one moves ⊥",
    ));
    let scls = classify(src);
    let src_conormal = (0..src.n_objects()).all(|x| scls.conormal(x).len() == src.fiber_size(x));
    let src_normal = (0..src.n_objects()).all(|x| scls.normal(x).len() == src.fiber_size(x));
    if (conormal && src_conormal) || (normal && src_normal) {
        let mut ok = true;
        if conormal && src_conormal {
            ok &= forced_conormal_operator(src, dst).as_ref() == Some(t);
        }
        if normal && src_normal {
            ok &= forced_normal_operator(src, dst).as_ref() == Some(t);
        }
        report.push(CheckItem::from_bool(
            "forced-operator",
            ok,
            "operator differs from the forced one",
        ));
    } else {
        report.push(CheckItem::with_status(
            "forced-operator",
            Status::Skipped,
            "source is not conormal/normal",
        ));
    }
    (flags, report)
}

/// On a conormal source, `A = Im f ↦ Im^G f` is the only candidate. Returned
/// only when well defined, monotone and conormal.
pub fn forced_conormal_operator(src: &OreanForm, dst: &OreanForm) -> Option<Operator> {
    forced(src, dst, |of, f| of.image(f), |c, f| c.cod(f))
}

pub fn forced_normal_operator(src: &OreanForm, dst: &OreanForm) -> Option<Operator> {
    forced(src, dst, |of, f| of.kernel(f), |c, f| c.dom(f))
}

fn forced(
    src: &OreanForm,
    dst: &OreanForm,
    key: impl Fn(&OreanForm, MorId) -> usize,
    at: impl Fn(&FinCategory, MorId) -> ObjId,
) -> Option<Operator> {
    let c = src.base();
    let mut assign: Vec<Vec<Option<usize>>> = (0..src.n_objects())
        .map(|x| vec![None; src.fiber_size(x)])
        .collect();
    for f in 0..c.n_morphisms() {
        let x = at(c, f);
        let (a, b) = (key(src, f), key(dst, f));
        match assign[x][a] {
            None => assign[x][a] = Some(b),
            Some(prev) if prev != b => return None,
            Some(_) => {}
        }
    }
    let op = Operator {
        assign: assign
            .into_iter()
            .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?,
    };
    let flags = validate_operator(src.form(), dst.form(), &op).ok()?;
    flags.valid.then_some(op)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialFlags {
    pub conormal_form: bool,
    pub normal_form: bool,
    pub binormal: bool,
    pub antinormal: bool,
    pub anticonormal: bool,
    pub antibinormal: bool,
    pub isoform: bool,
}

/// The bottom (`top = false`) or top clusters as a subform.
pub fn extreme_subform(of: &OreanForm, top: bool) -> Form {
    let sel: Vec<Vec<usize>> = (0..of.n_objects())
        .map(|x| vec![if top { of.top(x) } else { of.bottom(x) }])
        .collect();
    subform(of.form(), &sel)
        .expect("extreme clusters always form a subform")
        .with_label(format!(
            "{} of {}",
            if top { "top" } else { "bottom" },
            of.form().label()
        ))
}

pub fn special_predicates(of: &OreanForm, cls: &Classification) -> (SpecialFlags, CheckReport) {
    let all = |pred: &dyn Fn(ObjId, usize) -> bool| {
        (0..of.n_objects()).all(|x| (0..of.fiber_size(x)).all(|a| pred(x, a)))
    };
    let conormal_form = all(&|x, a| cls.is_conormal(x, a));
    let normal_form = all(&|x, a| cls.is_normal(x, a));
    let antinormal = all(&|x, a| !cls.is_normal(x, a) || a == of.bottom(x));
    let anticonormal = all(&|x, a| !cls.is_conormal(x, a) || a == of.top(x));
    let isoform = (0..of.n_objects()).all(|x| of.fiber_size(x) == 1);
    let flags = SpecialFlags {
        conormal_form,
        normal_form,
        binormal: conormal_form && normal_form,
        antinormal,
        anticonormal,
        antibinormal: antinormal && anticonormal,
        isoform,
    };
    let mut report = CheckReport::new("special predicates");
    let top_is_bottom = (0..of.n_objects()).all(|x| of.top(x) == of.bottom(x));
    let equivalent = [
        top_is_bottom,
        conormal_form && anticonormal,
        normal_form && antinormal,
        flags.binormal && flags.antibinormal,
    ];
    report.push(CheckItem::from_bool(
        "isoform-criteria",
        equivalent.iter().all(|&e| e == isoform),
        format!("isoform = {isoform} but equivalent conditions give {equivalent:?}"),
    ));
    let mut extremes = Tally::new("extreme-subforms");
    for top in [false, true] {
        let sub = extreme_subform(of, top);
        let ok = orean(&sub).is_some() && (0..sub.n_objects()).all(|x| sub.fiber_size(x) == 1);
        extremes.check(ok, || {
            Witness::new(format!("{} is not an isoform", sub.label()))
        });
    }
    report.push(extremes.finish());
    (flags, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;
    use std::sync::Arc;

    fn one() -> Arc<FinCategory> {
        Arc::new(FinCategory::from_tables(
            vec!["*".into()],
            vec![("1".into(), 0, 0)],
            vec![0],
            |_, _| 0,
        ))
    }

    fn poset_form(n: usize, le: impl Fn(usize, usize) -> bool) -> Form {
        let names = (0..n).map(|i| i.to_string()).collect();
        Form::from_fn(one(), "poset", vec![names], |_, b, a| le(a, b))
    }

    #[test]
    fn lattice_over_one_is_orean() {
        let f = poset_form(4, |a, b| a & !b == 0);
        let (r, of) = check_orean(&f);
        assert!(r.all_pass(), "{}", r.to_pretty());
        let of = of.unwrap();
        assert_eq!(of.image(0), 3);
        assert_eq!(of.kernel(0), 0);
    }

    #[test]
    fn non_lattice_fails_o1_and_skips_the_rest() {
        let f = poset_form(2, |a, b| a == b);
        let (r, of) = check_orean(&f);
        assert!(of.is_none());
        assert_eq!(r.status_of("O1"), Some(Status::Fail));
        assert_eq!(r.status_of("galois"), Some(Status::Skipped));
    }

    #[test]
    fn over_one_only_top_is_conormal_and_bottom_normal() {
        let of = orean(&poset_form(3, |a, b| a <= b)).unwrap();
        let cls = classify(&of);
        assert_eq!(cls.conormal(0), vec![2]);
        assert_eq!(cls.normal(0), vec![0]);
        assert_eq!(cls.get(0, 1).exterior_c, Some(2));
        assert_eq!(cls.get(0, 1).interior_c, None);
        let (flags, r) = special_predicates(&of, &cls);
        assert!(flags.antibinormal && !flags.isoform);
        assert!(r.all_pass());
    }

    #[test]
    fn closure_census_on_a_chain() {
        // On 0 < 1 < 2: κ2 = 2, κ1 ∈ {1, 2}, κ0 ≤ κ1 and κ0 fixed, giving four.
        let of = orean(&poset_form(3, |a, b| a <= b)).unwrap();
        let census = enumerate_closure_operators(&of, false, DEFAULT_CENSUS_BUDGET);
        let ops = census.operators().unwrap();
        assert_eq!(ops.len(), 4);
        assert!(ops.contains(&Operator::identity(of.form())));
        assert!(ops.contains(&constant_top(&of)));
    }

    #[test]
    fn dual_swaps_images_and_kernels() {
        let of = orean(&poset_form(3, |a, b| a <= b)).unwrap();
        let d = of.dual();
        assert_eq!(d.image(0), of.kernel(0));
        assert_eq!(d.top(0), of.bottom(0));
    }

    #[test]
    fn census_budget_is_reported() {
        let of = orean(&poset_form(3, |a, b| a <= b)).unwrap();
        assert!(matches!(
            enumerate_closure_operators(&of, true, 1),
            Census::BudgetExhausted { .. }
        ));
    }
}
