//! Decompositions of orean forms into a conormal and a normal part, joined by
//! one of the six binary lattice terms, with the exactness classification,
//! the join and meet criteria, and searches for the unique exact one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factor::{check_orean_factorization, pair_exactness, OreanFactorization};
use crate::fincat::{CatView, ObjId};
use crate::formcore::{
    find_isomorphism, product, subform, validate_operator, Form, FormError, Operator,
};
use crate::orean::{
    check_noetherian, classify, forced_conormal_operator, hull_conormal, hull_normal,
    operator_normality, orean, special_predicates, Classification, OreanForm,
};
use crate::report::{CheckItem, CheckReport, Status, Tally, Witness};

/// The six binary terms of bounded lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Top,
    Bottom,
    First,
    Second,
    Meet,
    Join,
}

impl Term {
    pub const ALL: [Term; 6] = [
        Term::Top,
        Term::Bottom,
        Term::First,
        Term::Second,
        Term::Meet,
        Term::Join,
    ];

    pub fn eval(self, of: &OreanForm, x: ObjId, a: usize, b: usize) -> usize {
        match self {
            Term::Top => of.top(x),
            Term::Bottom => of.bottom(x),
            Term::First => a,
            Term::Second => b,
            Term::Meet => of.meet(x, a, b),
            Term::Join => of.join(x, a, b),
        }
    }

    /// The term that plays the same role in the dual form.
    pub fn dual(self) -> Term {
        match self {
            Term::Top => Term::Bottom,
            Term::Bottom => Term::Top,
            Term::First => Term::Second,
            Term::Second => Term::First,
            Term::Meet => Term::Join,
            Term::Join => Term::Meet,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Term::Top => "⊤",
            Term::Bottom => "⊥",
            Term::First => "1st",
            Term::Second => "2nd",
            Term::Meet => "∧",
            Term::Join => "∨",
        }
    }
}

#[derive(Debug, Error)]
pub enum DecompError {
    #[error("operator {0} is not a valid idempotent operator on the form")]
    NotIdempotent(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// A pair of idempotent operators on an orean form, with everything the
/// classification needs.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub form: OreanForm,
    pub ks: Operator,
    pub ke: Operator,
    /// Every satisfied decomposing term; empty when (D2) fails.
    pub terms: Vec<Term>,
    /// Fixed clusters of `ks` and `ke`.
    pub sel_s: Vec<Vec<usize>>,
    pub sel_e: Vec<Vec<usize>>,
    pub fs: Option<OreanForm>,
    pub fe: Option<OreanForm>,
    /// Projections onto the parts, in subform indices.
    pub tau_s: Operator,
    pub tau_e: Operator,
    pub semiexact: bool,
    pub exact: bool,
    pub report: CheckReport,
}

impl Decomposition {
    /// (D1) together with at least one decomposing term.
    pub fn is_decomposition(&self) -> bool {
        self.report.passed("conormal-part")
            && self.report.passed("normal-part")
            && !self.terms.is_empty()
    }

    pub fn has_term(&self, t: Term) -> bool {
        self.terms.contains(&t)
    }

    pub fn to_doc(&self) -> DecompositionDoc {
        let names = |sel: &Vec<Vec<usize>>| -> Vec<Vec<String>> {
            sel.iter()
                .enumerate()
                .map(|(x, row)| {
                    row.iter()
                        .map(|&a| self.form.cluster_name(x, a).to_string())
                        .collect()
                })
                .collect()
        };
        DecompositionDoc {
            schema: "decomposition/1".into(),
            form: self.form.form().label().to_string(),
            terms: self.terms.iter().map(|t| t.symbol().to_string()).collect(),
            decomposition: self.is_decomposition(),
            semiexact: self.semiexact,
            exact: self.exact,
            ks: self.ks.assign.clone(),
            ke: self.ke.assign.clone(),
            conormal_part: names(&self.sel_s),
            normal_part: names(&self.sel_e),
            report: self.report.clone(),
        }
    }
}

/// Serialized summary of a decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub schema: String,
    pub form: String,
    pub terms: Vec<String>,
    pub decomposition: bool,
    pub semiexact: bool,
    pub exact: bool,
    pub ks: Vec<Vec<usize>>,
    pub ke: Vec<Vec<usize>>,
    pub conormal_part: Vec<Vec<String>>,
    pub normal_part: Vec<Vec<String>>,
    pub report: CheckReport,
}

fn fixed_points(of: &OreanForm, k: &Operator) -> Vec<Vec<usize>> {
    (0..of.n_objects())
        .map(|x| {
            (0..of.fiber_size(x))
                .filter(|&a| k.apply(x, a) == a)
                .collect()
        })
        .collect()
}

fn inclusion(sel: &[Vec<usize>]) -> Operator {
    Operator {
        assign: sel.to_vec(),
    }
}

/// Corestriction of an idempotent `k` onto its fixed clusters.
fn projection(of: &OreanForm, k: &Operator, sel: &[Vec<usize>]) -> Operator {
    Operator::from_fn(of.form(), |x, a| {
        sel[x]
            .iter()
            .position(|&b| b == k.apply(x, a))
            .expect("idempotent values are fixed")
    })
}

/// Checks (D1) and (D2), records every decomposing term, and classifies
/// the decomposition as semiexact and exact.
pub fn check_decomposition(
    of: &OreanForm,
    ks: &Operator,
    ke: &Operator,
) -> Result<Decomposition, DecompError> {
    for (k, name) in [(ks, "κs"), (ke, "κe")] {
        let ok = validate_operator(of.form(), of.form(), k)
            .map(|f| f.valid && f.idempotent == Some(true))
            .unwrap_or(false);
        if !ok {
            return Err(DecompError::NotIdempotent(name));
        }
    }
    let mut report = CheckReport::new(format!("decomposition of {}", of.form().label()));
    let sel_s = fixed_points(of, ks);
    let sel_e = fixed_points(of, ke);
    let fs = orean(
        &subform(of.form(), &sel_s)?.with_label(format!("{} closed under κs", of.form().label())),
    );
    let fe = orean(
        &subform(of.form(), &sel_e)?.with_label(format!("{} closed under κe", of.form().label())),
    );
    let conormal = fs
        .as_ref()
        .map(|g| special_predicates(g, &classify(g)).0.conormal_form);
    let normal = fe
        .as_ref()
        .map(|g| special_predicates(g, &classify(g)).0.normal_form);
    report.push(CheckItem::from_bool(
        "conormal-part",
        conormal == Some(true),
        match conormal {
            None => "the κs-closed subform is not orean",
            _ => "the κs-closed subform is not a conormal form",
        },
    ));
    report.push(CheckItem::from_bool(
        "normal-part",
        normal == Some(true),
        match normal {
            None => "the κe-closed subform is not orean",
            _ => "the κe-closed subform is not a normal form",
        },
    ));

    let terms: Vec<Term> = Term::ALL
        .into_iter()
        .filter(|&t| {
            (0..of.n_objects()).all(|x| {
                (0..of.fiber_size(x)).all(|s| t.eval(of, x, ks.apply(x, s), ke.apply(x, s)) == s)
            })
        })
        .collect();
    let listed: Vec<&str> = terms.iter().map(|t| t.symbol()).collect();
    report.push(
        CheckItem::from_bool(
            "decomposing-term",
            !terms.is_empty(),
            "no term recovers every cluster from its parts",
        )
        .note(format!("terms: {}", listed.join(" "))),
    );

    let tau_s = projection(of, ks, &sel_s);
    let tau_e = projection(of, ke, &sel_e);
    let mut semiexact = false;
    let mut exact = false;
    if let (Some(gs), Some(ge), true) = (
        &fs,
        &fe,
        conormal == Some(true) && normal == Some(true) && !terms.is_empty(),
    ) {
        let ns = operator_normality(of, gs, &tau_s).0;
        let ne = operator_normality(of, ge, &tau_e).0;
        let pair = pair_exactness(gs, ge).semiexact;
        semiexact = ns.binormal && ne.binormal && pair;
        report.push(
            CheckItem::from_bool(
                "semiexact",
                semiexact,
                format!(
                    "τs binormal {}, τe binormal {}, semiexact pair {pair}",
                    ns.binormal, ne.binormal
                ),
            )
            .note(format!("semiexact: {semiexact}")),
        );
        let is = operator_normality(gs, of, &inclusion(&sel_s)).0.conormal;
        let ie = operator_normality(ge, of, &inclusion(&sel_e)).0.normal;
        exact = semiexact && is && ie;
        report.push(
            CheckItem::from_bool(
                "exact",
                !semiexact || exact == (is && ie),
                "classification inconsistent",
            )
            .note(format!(
                "exact: {exact} (conormal inclusion {is}, normal inclusion {ie})"
            )),
        );
        if semiexact {
            let cls = classify(of);
            let hc = hull_conormal(of, &cls);
            let hn = hull_normal(of, &cls);
            let iso_c = find_isomorphism(gs.form(), &hc.form).found().is_some();
            let iso_n = find_isomorphism(ge.form(), &hn.form).found().is_some();
            report.push(CheckItem::from_bool(
                "parts-match-hulls",
                iso_c && iso_n,
                format!("conormal part ≅ hull: {iso_c}, normal part ≅ hull: {iso_n}"),
            ));
            let n2 = check_noetherian(of).passed("N2");
            let fac = check_orean_factorization(gs, ge)
                .ok()
                .and_then(|(_, f)| f)
                .is_some();
            report.push(
                CheckItem::from_bool(
                    "n2-iff-factorization",
                    n2 == fac,
                    format!("(N2) {n2}, factorization {fac}"),
                )
                .note(format!("(N2) holds: {n2}")),
            );
        }
        if exact {
            report.push(CheckItem::from_bool(
                "exact-parts-are-hulls",
                sel_s == cls_selection(of, true) && sel_e == cls_selection(of, false),
                "an exact decomposition must split into conormal and normal clusters",
            ));
        }
    } else {
        report.push(CheckItem::with_status(
            "semiexact",
            Status::Skipped,
            "not a decomposition",
        ));
    }

    Ok(Decomposition {
        form: of.clone(),
        ks: ks.clone(),
        ke: ke.clone(),
        terms,
        sel_s,
        sel_e,
        fs,
        fe,
        tau_s,
        tau_e,
        semiexact,
        exact,
        report,
    })
}

fn cls_selection(of: &OreanForm, conormal: bool) -> Vec<Vec<usize>> {
    let cls = classify(of);
    if conormal {
        cls.conormal_selection()
    } else {
        cls.normal_selection()
    }
}

/// Largest cluster in `candidates` below `s`, if one dominates all others.
fn largest_below(of: &OreanForm, x: ObjId, s: usize, candidates: &[usize]) -> Option<usize> {
    let below: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&c| of.leq(x, c, s))
        .collect();
    below
        .iter()
        .copied()
        .find(|&m| below.iter().all(|&c| of.leq(x, c, m)))
}

/// Direct test of the three conditions characterizing an exact join
/// decomposition, followed by construction of `F = F_c ∨ F_n` and the
/// closure consequences.
pub fn exact_join_check(of: &OreanForm) -> (CheckReport, Option<Decomposition>) {
    let c = of.base();
    let n = of.n_objects();
    let cls = classify(of);
    let mut report = CheckReport::new(format!("exact join decomposition of {}", of.form().label()));
    let cs: Vec<Vec<usize>> = cls.conormal_selection();
    let ns: Vec<Vec<usize>> = cls.normal_selection();
    let lc: Vec<Vec<Option<usize>>> = (0..n)
        .map(|x| {
            (0..of.fiber_size(x))
                .map(|s| largest_below(of, x, s, &cs[x]))
                .collect()
        })
        .collect();
    let ln: Vec<Vec<Option<usize>>> = (0..n)
        .map(|x| {
            (0..of.fiber_size(x))
                .map(|s| largest_below(of, x, s, &ns[x]))
                .collect()
        })
        .collect();

    let mut parts = Tally::new("join-of-parts");
    for x in 0..n {
        for s in 0..of.fiber_size(x) {
            let ok = matches!((lc[x][s], ln[x][s]), (Some(a), Some(r)) if of.join(x, a, r) == s);
            parts.check(ok, || {
                let why = match (lc[x][s], ln[x][s]) {
                    (None, _) => "no largest conormal cluster below it",
                    (_, None) => "no largest normal cluster below it",
                    _ => "it is not the join of its largest conormal and normal parts",
                };
                Witness::new(format!("{}: {why}", of.cluster_name(x, s))).clusters(&[(x, s)])
            });
        }
    }
    let parts_ok = !parts.failed();
    report.push(parts.finish());
    if !parts_ok {
        skip(
            &mut report,
            &["normal-part-pulls-back", "normal-top-pushes"],
            "parts are missing",
        );
        return (report, None);
    }
    let lc: Vec<Vec<usize>> = lc
        .into_iter()
        .map(|r| r.into_iter().map(Option::unwrap).collect())
        .collect();
    let ln: Vec<Vec<usize>> = ln
        .into_iter()
        .map(|r| r.into_iter().map(Option::unwrap).collect())
        .collect();

    let mut pull = Tally::new("normal-part-pulls-back");
    let mut push = Tally::new("normal-top-pushes");
    for f in 0..c.n_morphisms() {
        let (x, y) = (c.dom(f), c.cod(f));
        for s in 0..of.fiber_size(y) {
            pull.check(of.inverse(f, ln[y][s]) == ln[x][of.inverse(f, s)], || {
                Witness::new(format!("S = {}", of.cluster_name(y, s)))
                    .morphisms(&[f])
                    .clusters(&[(y, s)])
            });
        }
        push.check(of.direct(f, ln[x][of.top(x)]) == ln[y][of.image(f)], || {
            Witness::new(
                "direct image of the largest normal cluster is not the normal part of the image",
            )
            .morphisms(&[f])
        });
    }
    let ok = !pull.failed() && !push.failed();
    report.push(pull.finish());
    report.push(push.finish());
    if !ok {
        return (report, None);
    }

    let ks = Operator { assign: lc };
    let ke = Operator { assign: ln };
    let dec = match check_decomposition(of, &ks, &ke) {
        Ok(d) => d,
        Err(e) => {
            report.push(CheckItem::fail(
                "decomposition",
                Witness::new(e.to_string()),
            ));
            return (report, None);
        }
    };
    report.push(CheckItem::from_bool(
        "exact-join-decomposition",
        dec.exact && dec.has_term(Term::Join),
        format!(
            "built pair is exact {} with terms {:?}",
            dec.exact, dec.terms
        ),
    ));
    consequences(of, &cls, &mut report);
    let found = report.all_pass().then_some(dec);
    (report, found)
}

fn consequences(of: &OreanForm, cls: &Classification, report: &mut CheckReport) {
    let c = of.base();
    let mut direct = Tally::new("normal-direct-images");
    for f in 0..c.n_morphisms() {
        let x = c.dom(f);
        for r in cls.normal(x) {
            direct.check(cls.is_normal(c.cod(f), of.direct(f, r)), || {
                Witness::new("direct image of a normal cluster is not normal")
                    .morphisms(&[f])
                    .clusters(&[(x, r)])
            });
        }
    }
    report.push(direct.finish());
    let mut cj = Tally::new("conormal-joins");
    let mut nj = Tally::new("normal-joins");
    for x in 0..of.n_objects() {
        let (cs, ns) = (cls.conormal(x), cls.normal(x));
        for &a in &cs {
            for &b in &cs {
                cj.check(cls.is_conormal(x, of.join(x, a, b)), || {
                    Witness::new("join of conormal clusters").clusters(&[(x, a), (x, b)])
                });
            }
        }
        for &a in &ns {
            for &b in &ns {
                nj.check(cls.is_normal(x, of.join(x, a, b)), || {
                    Witness::new("join of normal clusters").clusters(&[(x, a), (x, b)])
                });
            }
        }
    }
    report.push(cj.finish());
    report.push(nj.finish());
}

fn skip(report: &mut CheckReport, names: &[&str], why: &str) {
    for n in names {
        report.push(CheckItem::with_status(*n, Status::Skipped, why));
    }
}

/// Moves a decomposition of the dual form back: `(κs, κe)` on `F^op`
/// becomes `(κe, κs)` on `F`.
fn undual(of: &OreanForm, d: &Decomposition) -> Result<Decomposition, DecompError> {
    check_decomposition(of, &d.ke, &d.ks)
}

/// The dual of [`exact_join_check`].
pub fn exact_meet_check(of: &OreanForm) -> (CheckReport, Option<Decomposition>) {
    let (dual_report, found) = exact_join_check(&of.dual());
    let mut report = CheckReport::new(format!("exact meet decomposition of {}", of.form().label()));
    report.absorb("dual", dual_report);
    let dec = found.and_then(|d| match undual(of, &d) {
        Ok(m) => {
            report.push(CheckItem::from_bool(
                "exact-meet-decomposition",
                m.exact && m.has_term(Term::Meet),
                format!(
                    "transported pair is exact {} with terms {:?}",
                    m.exact, m.terms
                ),
            ));
            (m.exact && m.has_term(Term::Meet)).then_some(m)
        }
        Err(e) => {
            report.push(CheckItem::fail(
                "exact-meet-decomposition",
                Witness::new(e.to_string()),
            ));
            None
        }
    });
    (report, dec)
}

/// `Fs×Fe = (Fs×Fe^⊥) ∨ (Fs^⊥×Fe)` with its three biconditionals.
pub fn canonical_join_decomposition(
    fs: &OreanForm,
    fe: &OreanForm,
) -> Result<Decomposition, DecompError> {
    let p = product(fs.form(), fe.form())?;
    let po =
        orean(&p).ok_or_else(|| DecompError::Precondition("the product is not orean".into()))?;
    let w = |x: ObjId| fe.fiber_size(x);
    let ks = Operator::from_fn(&p, |x, k| (k / w(x)) * w(x) + fe.bottom(x));
    let ke = Operator::from_fn(&p, |x, k| fs.bottom(x) * w(x) + k % w(x));
    let mut d = check_decomposition(&po, &ks, &ke)?;
    let pair = pair_exactness(fs, fe).semiexact;
    let iso = special_predicates(fe, &classify(fe)).0.isoform;
    let anti = special_predicates(fs, &classify(fs)).0.antinormal;
    d.report.push(CheckItem::from_bool(
        "canonical-join-term",
        d.has_term(Term::Join),
        "the canonical pair does not join back",
    ));
    let binormal = match (&d.fs, &d.fe) {
        (Some(gs), Some(ge)) => {
            operator_normality(&po, gs, &d.tau_s).0.binormal
                && operator_normality(&po, ge, &d.tau_e).0.binormal
        }
        _ => false,
    };
    d.report.push(CheckItem::from_bool(
        "canonical-projections-binormal",
        binormal,
        "a projection is not binormal",
    ));
    d.report.push(CheckItem::from_bool(
        "canonical-semiexact",
        d.semiexact == pair,
        format!(
            "decomposition semiexact {} but pair semiexact {pair}",
            d.semiexact
        ),
    ));
    d.report.push(CheckItem::from_bool(
        "canonical-exact",
        d.exact == (iso && anti),
        format!(
            "decomposition exact {} but isoform {iso}, antinormal {anti}",
            d.exact
        ),
    ));
    Ok(d)
}

/// `(1, βα)` for a conormal form with `α` the conormal operator onto the
/// normal hull, when it is exact.
fn left_exact_candidate(of: &OreanForm, cls: &Classification) -> Option<Decomposition> {
    if !special_predicates(of, cls).0.conormal_form {
        return None;
    }
    let hn = hull_normal(of, cls);
    let hn_o = hn.orean.as_ref()?;
    let alpha = forced_conormal_operator(of, hn_o)?;
    let ke = alpha.then(&inclusion(&hn.selection));
    let d = check_decomposition(of, &Operator::identity(of.form()), &ke).ok()?;
    (d.exact && d.has_term(Term::First)).then_some(d)
}

/// Tries every route in turn and returns the exact decomposition, checking
/// that all routes that succeed agree.
pub fn find_exact_decomposition(of: &OreanForm) -> (CheckReport, Option<Decomposition>) {
    let cls = classify(of);
    let flags = special_predicates(of, &cls).0;
    let mut report = CheckReport::new(format!("exact decomposition of {}", of.form().label()));
    let mut found: Vec<(&str, Decomposition)> = Vec::new();

    if flags.isoform {
        let id = Operator::identity(of.form());
        if let Ok(d) = check_decomposition(of, &id, &id) {
            if d.exact {
                found.push(("nullary", d));
            }
        }
    }
    if let Some(d) = left_exact_candidate(of, &cls) {
        found.push(("left", d));
    }
    let dual = of.dual();
    if let Some(d) = left_exact_candidate(&dual, &classify(&dual)) {
        if let Ok(r) = undual(of, &d) {
            if r.exact {
                found.push(("right", r));
            }
        }
    }
    let (jr, jd) = exact_join_check(of);
    report.absorb("join", jr);
    if let Some(d) = jd {
        found.push(("join", d));
    }
    let (mr, md) = exact_meet_check(of);
    report.absorb("meet", mr);
    if let Some(d) = md {
        found.push(("meet", d));
    }
    // Failing route checks are findings, not defects of the search.
    report
        .items
        .retain(|i| !(i.name.starts_with("join.") || i.name.starts_with("meet.")) || i.passed());

    let routes: Vec<&str> = found.iter().map(|(r, _)| *r).collect();
    let unique = found
        .windows(2)
        .all(|w| w[0].1.ks == w[1].1.ks && w[0].1.ke == w[1].1.ke);
    report.push(
        CheckItem::from_bool(
            "unique-exact",
            unique,
            format!("routes {routes:?} disagree"),
        )
        .note(format!(
            "routes: {}",
            if routes.is_empty() {
                "none".into()
            } else {
                routes.join(", ")
            }
        )),
    );

    let join = found.iter().any(|(r, _)| *r == "join");
    let meet = found.iter().any(|(r, _)| *r == "meet");
    let left = found.iter().any(|(_, d)| d.has_term(Term::First));
    let right = found.iter().any(|(_, d)| d.has_term(Term::Second));
    report.push(CheckItem::from_bool(
        "binormal-criteria",
        (join && meet) == flags.binormal && (left && right) == flags.binormal,
        format!(
            "binormal {} but join+meet {}, left+right {}",
            flags.binormal,
            join && meet,
            left && right
        ),
    ));

    if let Some((_, d)) = found.first() {
        let noetherian = check_noetherian(of).all_pass();
        if noetherian && d.has_term(Term::First) && d.has_term(Term::Join) {
            let mut t = Tally::new("below-normal-is-normal");
            for x in 0..of.n_objects() {
                for r in cls.normal(x) {
                    for s in (0..of.fiber_size(x)).filter(|&s| of.leq(x, s, r)) {
                        t.check(cls.is_normal(x, s), || {
                            Witness::new("cluster below a normal one is not normal")
                                .clusters(&[(x, s), (x, r)])
                        });
                    }
                }
            }
            report.push(t.finish());
        }
    }
    let dec = found.into_iter().next().map(|(_, d)| d);
    (report, dec)
}

/// The battery for a noetherian form with exact join decomposition.
pub fn exact_join_battery(of: &OreanForm) -> Result<CheckReport, DecompError> {
    let (jr, dec) = exact_join_check(of);
    if dec.is_none() {
        let failing: Vec<String> = jr.failing().map(|i| i.name.clone()).collect();
        return Err(DecompError::Precondition(format!(
            "no exact join decomposition ({})",
            failing.join(", ")
        )));
    }
    let noeth = check_noetherian(of);
    if !noeth.all_pass() {
        let failing: Vec<String> = noeth.failing().map(|i| i.name.clone()).collect();
        return Err(DecompError::Precondition(format!(
            "not noetherian ({})",
            failing.join(", ")
        )));
    }
    let cls = classify(of);
    let (hc, hn) = (hull_conormal(of, &cls), hull_normal(of, &cls));
    let (Some(oc), Some(on)) = (&hc.orean, &hn.orean) else {
        return Err(DecompError::Precondition("hulls are not orean".into()));
    };
    let mut report = CheckReport::new(format!("exact join battery for {}", of.form().label()));
    let (fr, fac) = check_orean_factorization(oc, on).map_err(DecompError::Form)?;
    report.push(CheckItem::from_bool(
        "hulls-factorization",
        fac.is_some(),
        "hulls are not an orean factorization",
    ));
    let Some(fac) = fac else {
        report.absorb("hulls", fr);
        return Ok(report);
    };
    battery_items(of, &cls, &fac, &hc.selection, &hn.selection, &mut report);
    Ok(report)
}

fn battery_items(
    of: &OreanForm,
    cls: &Classification,
    fac: &OreanFactorization,
    selc: &[Vec<usize>],
    seln: &[Vec<usize>],
    report: &mut CheckReport,
) {
    let c = of.base();
    let n = of.n_objects();
    let idx = |sel: &[Vec<usize>], x: ObjId, a: usize| sel[x].iter().position(|&b| b == a).unwrap();
    let ts = |x: ObjId, k: usize| {
        cls.get(x, k)
            .interior_c
            .expect("exact join gives interiors")
    };
    let te = |x: ObjId, k: usize| {
        cls.get(x, k)
            .interior_n
            .expect("exact join gives interiors")
    };
    let nm = |x: ObjId, k: usize| of.cluster_name(x, k).to_string();

    let mut ops = Tally::new("alpha-beta-as-interiors");
    for x in 0..n {
        for (i, &a) in selc[x].iter().enumerate() {
            ops.check(seln[x][fac.alpha(x, i)] == te(x, a), || {
                Witness::new(format!("α({})", nm(x, a))).clusters(&[(x, a)])
            });
        }
        for (j, &r) in seln[x].iter().enumerate() {
            ops.check(selc[x][fac.beta(x, j)] == ts(x, r), || {
                Witness::new(format!("β({})", nm(x, r))).clusters(&[(x, r)])
            });
        }
    }
    report.push(ops.finish());

    let mut ident = Tally::new("projection-identities");
    for x in 0..n {
        for k in 0..of.fiber_size(x) {
            let (i, j) = (idx(selc, x, ts(x, k)), idx(seln, x, te(x, k)));
            ident.check(
                fac.wyler_join(x, i, j) == i && fac.fe.leq(x, fac.alpha(x, i), j),
                || Witness::new(format!("K = {}", nm(x, k))).clusters(&[(x, k)]),
            );
        }
    }
    report.push(ident.finish());

    let admissible: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|x| {
            let mut v = Vec::new();
            for i in 0..selc[x].len() {
                for j in 0..seln[x].len() {
                    if fac.wyler_join(x, i, j) == i && fac.fe.leq(x, fac.alpha(x, i), j) {
                        v.push((i, j));
                    }
                }
            }
            v
        })
        .collect();
    let mut recon = Tally::new("reconstruction");
    let mut dist = Tally::new("inverse-image-distribution");
    for x in 0..n {
        for &(i, j) in &admissible[x] {
            let (a, r) = (selc[x][i], seln[x][j]);
            let k = of.join(x, a, r);
            recon.check(ts(x, k) == a && te(x, k) == r, || {
                Witness::new(format!("A = {}, R = {}", nm(x, a), nm(x, r)))
                    .clusters(&[(x, a), (x, r)])
            });
            for f in c.morphisms_into(x) {
                let w = c.dom(f);
                let lhs = of.inverse(f, k);
                let rhs = of.join(
                    w,
                    selc[w][fac.fs.inverse(f, i)],
                    seln[w][fac.fe.inverse(f, j)],
                );
                dist.check(lhs == rhs, || {
                    Witness::new("(A∨R)·f ≠ (A·f)∨(R·f)")
                        .morphisms(&[f])
                        .clusters(&[(x, a), (x, r)])
                });
            }
        }
    }
    report.push(recon.finish());
    report.push(dist.finish());

    let mut closed = Tally::new("parts-closed-under-lattice-operations");
    let mut meets = Tally::new("projections-preserve-meets");
    for x in 0..n {
        for &a in &selc[x] {
            for &b in &selc[x] {
                closed.check(
                    cls.is_conormal(x, of.meet(x, a, b)) && cls.is_conormal(x, of.join(x, a, b)),
                    || Witness::new("conormal part not closed").clusters(&[(x, a), (x, b)]),
                );
            }
        }
        for &r in &seln[x] {
            for s in 0..of.fiber_size(x) {
                closed.check(cls.is_normal(x, of.meet(x, r, s)), || {
                    Witness::new("meet with a normal cluster is not normal")
                        .clusters(&[(x, r), (x, s)])
                });
                if cls.is_normal(x, s) {
                    closed.check(cls.is_normal(x, of.join(x, r, s)), || {
                        Witness::new("join of normal clusters").clusters(&[(x, r), (x, s)])
                    });
                }
            }
        }
        for k in 0..of.fiber_size(x) {
            for l in 0..of.fiber_size(x) {
                let m = of.meet(x, k, l);
                meets.check(
                    ts(x, m) == of.meet(x, ts(x, k), ts(x, l))
                        && te(x, m) == of.meet(x, te(x, k), te(x, l)),
                    || {
                        Witness::new("a projection does not preserve this meet")
                            .clusters(&[(x, k), (x, l)])
                    },
                );
            }
        }
        for i in 0..selc[x].len() {
            for i2 in 0..selc[x].len() {
                meets.check(
                    fac.alpha(x, fac.fs.meet(x, i, i2))
                        == fac.fe.meet(x, fac.alpha(x, i), fac.alpha(x, i2)),
                    || {
                        Witness::new("α does not preserve this meet")
                            .clusters(&[(x, selc[x][i]), (x, selc[x][i2])])
                    },
                );
            }
        }
        for j in 0..seln[x].len() {
            for j2 in 0..seln[x].len() {
                meets.check(
                    fac.beta(x, fac.fe.meet(x, j, j2))
                        == fac.fs.meet(x, fac.beta(x, j), fac.beta(x, j2)),
                    || {
                        Witness::new("β does not preserve this meet")
                            .clusters(&[(x, seln[x][j]), (x, seln[x][j2])])
                    },
                );
            }
        }
    }
    report.push(closed.finish());
    report.push(meets.finish());
}

/// Two noetherian forms with exact join decompositions over one base are
/// isomorphic exactly when their hulls are.
pub fn hull_comparison(f: &OreanForm, g: &OreanForm) -> CheckReport {
    let mut report = CheckReport::new(format!("{} versus {}", f.form().label(), g.form().label()));
    let (cf, cg) = (classify(f), classify(g));
    let iso = find_isomorphism(f.form(), g.form());
    let hc = find_isomorphism(&hull_conormal(f, &cf).form, &hull_conormal(g, &cg).form);
    let hn = find_isomorphism(&hull_normal(f, &cf).form, &hull_normal(g, &cg).form);
    let decided = |o: &crate::formcore::IsoOutcome| o.found().is_some() || o.is_refuted();
    if !(decided(&iso) && decided(&hc) && decided(&hn)) {
        report.push(CheckItem::with_status(
            "hulls-determine-form",
            Status::Skipped,
            "isomorphism search ran out of budget",
        ));
        return report;
    }
    let forms = iso.found().is_some();
    let hulls = hc.found().is_some() && hn.found().is_some();
    report.push(
        CheckItem::from_bool(
            "hulls-determine-form",
            forms == hulls,
            format!("forms isomorphic {forms}, hulls isomorphic {hulls}"),
        )
        .note(format!("isomorphic: {forms}")),
    );
    report
}

/// A two-element lattice over the trivial category: strongly orean, yet its
/// bottom cluster has no conormal part.
pub fn undecomposable_example() -> Form {
    let c = std::sync::Arc::new(crate::zoo::chain_category(1));
    Form::from_fn(
        c,
        "two-point lattice",
        vec![vec!["0".into(), "1".into()]],
        |_, b, a| a <= b,
    )
}

/// `F` with its bottom subform, the standard left join decomposition of a
/// conormal form.
pub fn bottom_join_decomposition(of: &OreanForm) -> Result<Decomposition, DecompError> {
    let sel: Vec<Vec<usize>> = (0..of.n_objects()).map(|x| vec![of.bottom(x)]).collect();
    let ke = Operator::from_fn(of.form(), |x, _| sel[x][0]);
    check_decomposition(of, &Operator::identity(of.form()), &ke)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orean::extreme_subform;
    use crate::zoo::{
        equivrel_form, exaq_form, finset_skeleton, pointed_finset_skeleton, quotients_form,
        subsets_form, two_chain_forms,
    };

    fn o(f: &Form) -> OreanForm {
        orean(f).unwrap()
    }

    #[test]
    fn isoform_satisfies_every_term() {
        let z = finset_skeleton(2);
        let bot = o(&extreme_subform(&o(&subsets_form(&z)), false));
        let id = Operator::identity(bot.form());
        let d = check_decomposition(&bot, &id, &id).unwrap();
        assert_eq!(d.terms, Term::ALL.to_vec());
        assert!(d.exact);
    }

    #[test]
    fn subsets_split_with_empty_sets() {
        let z = finset_skeleton(3);
        let f = o(&subsets_form(&z));
        let (r, d) = exact_join_check(&f);
        let d = d.unwrap_or_else(|| panic!("{}", r.to_pretty()));
        assert!(d.exact && d.has_term(Term::First) && d.has_term(Term::Join));
        assert!(d
            .sel_e
            .iter()
            .enumerate()
            .all(|(x, s)| s == &vec![f.bottom(x)]));
        let b = bottom_join_decomposition(&f).unwrap();
        assert_eq!(b.ke, d.ke);
    }

    #[test]
    fn pairs_form_has_an_exact_join() {
        let z = finset_skeleton(3);
        let (r, d) = exact_join_check(&o(&exaq_form(&z)));
        assert!(d.is_some(), "{}", r.to_pretty());
    }

    #[test]
    fn product_of_subsets_and_relations_has_no_exact_join() {
        let z = finset_skeleton(2);
        let p = o(&product(&subsets_form(&z), &equivrel_form(&z)).unwrap());
        let (r, d) = exact_join_check(&p);
        assert!(d.is_none());
        assert!(!r.failing().next().unwrap().witnesses.is_empty());
    }

    #[test]
    fn canonical_decomposition_of_sets_is_semiexact_only() {
        let z = finset_skeleton(2);
        let d =
            canonical_join_decomposition(&o(&subsets_form(&z)), &o(&equivrel_form(&z))).unwrap();
        assert!(d.report.all_pass(), "{}", d.report.to_pretty());
        assert!(d.semiexact && !d.exact);
        let s = o(&subsets_form(&z));
        let e = canonical_join_decomposition(&s, &o(&extreme_subform(&s, false))).unwrap();
        assert!(e.exact, "{}", e.report.to_pretty());
    }

    #[test]
    fn relations_have_no_exact_decomposition() {
        let z = finset_skeleton(4);
        let f = o(&equivrel_form(&z));
        let (r, d) = find_exact_decomposition(&f);
        assert!(d.is_none());
        assert!(r.all_pass(), "{}", r.to_pretty());
        let bottom = Operator::from_fn(f.form(), |x, _| f.bottom(x));
        let right = check_decomposition(&f, &bottom, &Operator::identity(f.form())).unwrap();
        assert!(right.has_term(Term::Join) && right.has_term(Term::Second));
        assert!(!right.semiexact);
    }

    #[test]
    fn pointed_quotients_have_a_right_exact_join() {
        let z = pointed_finset_skeleton(3);
        let f = o(&quotients_form(&z));
        let (r, d) = find_exact_decomposition(&f);
        let d = d.unwrap_or_else(|| panic!("{}", r.to_pretty()));
        assert!(d.has_term(Term::Second) && d.has_term(Term::Join) && !d.has_term(Term::Meet));
    }

    #[test]
    fn two_point_lattice_is_undecomposable() {
        let f = o(&undecomposable_example());
        let (r, d) = find_exact_decomposition(&f);
        assert!(d.is_none());
        let (jr, _) = exact_join_check(&f);
        let item = jr.item("join-of-parts").unwrap();
        assert_eq!(item.status, Status::Fail);
        assert_eq!(item.witnesses[0].clusters, vec![(0, 0)]);
        assert!(r.all_pass());
    }

    #[test]
    fn battery_passes_on_pairs_and_chains() {
        let z = finset_skeleton(3);
        let r = exact_join_battery(&o(&exaq_form(&z))).unwrap();
        assert!(r.all_pass(), "{}", r.to_pretty());
        for f in two_chain_forms() {
            let r = exact_join_battery(&o(&f)).unwrap();
            assert!(r.all_pass(), "{}", r.to_pretty());
        }
    }
}
