//! The acceptance battery: eleven end-to-end criteria with pinned runtime caps.
//! Each criterion returns a one-line detail on success or the reason it failed.

use std::panic::catch_unwind;
use std::time::{Duration, Instant};

use crate::bicat::{
    check_axiom, dual_subquotients_form, synthesize_ejd_form, two_chain_example, zoo_bicategories,
    zoo_bicategory, Axiom, Side,
};
use crate::decomp::{exact_join_battery, exact_join_check, exact_meet_check};
use crate::factor::{
    check_orean_factorization, check_synthesis_conditions, construct_join_noetherian, wyler_laws,
};
use crate::formcore::{
    dual_form, find_full_embedding, find_isomorphism, validate_form, Form, Operator,
};
use crate::orean::{
    check_noetherian, check_orean, classify, constant_bottom, constant_top,
    enumerate_closure_operators, orean, restricted_modular_law, special_predicates, OreanForm,
    SpecialFlags,
};
use crate::report::{CheckItem, CheckReport, Status, Witness};
use crate::subobjects::{e_quotients_form, epis, m_subobjects_form, monos, subquotients_form};
use crate::zoo::{
    equivrel_form, exaq_form, finset_skeleton, groups_category, pointed_finset_skeleton,
    quotients_form, subgroup_form, subsets_form, zoo_catalog,
};

pub const DEFAULT_CAP: Duration = Duration::from_secs(60);
pub const CENSUS_CAP: Duration = Duration::from_secs(180);
pub const GROUPS_CAP: Duration = Duration::from_secs(180);
pub const CENSUS_BUDGET: u64 = 200_000_000;
const OPTIMALITY_BUDGET: u64 = 5_000_000;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn of(form: &Form) -> Result<OreanForm, String> {
    orean(form).ok_or_else(|| format!("{} is not orean", form.label()))
}

fn status(r: &CheckReport, name: &str) -> Status {
    r.status_of(name).unwrap_or(Status::Error)
}

fn has_witness(r: &CheckReport, name: &str) -> bool {
    r.item(name).is_some_and(|i| !i.witnesses.is_empty())
}

fn dichotomy() -> Outcome {
    let z = finset_skeleton(3);
    let subsets = subsets_form(&z);
    let v = validate_form(&subsets);
    let (o, sof) = check_orean(&subsets);
    for name in ["F1", "F2", "F3"] {
        ensure(v.passed(name), format!("subsets fail {name}"))?;
    }
    for name in ["O1", "O2", "O3"] {
        ensure(o.passed(name), format!("subsets fail {name}"))?;
    }
    let n = check_noetherian(&sof.ok_or("subsets not orean")?);
    ensure(
        n.passed("N1-meet") && n.passed("N3"),
        "subsets fail N1-meet or N3",
    )?;
    for name in ["N1-join", "N2"] {
        ensure(
            status(&n, name) == Status::Fail && has_witness(&n, name),
            format!("subsets: {name} should fail with a witness"),
        )?;
    }
    let e = check_noetherian(&of(&equivrel_form(&z))?);
    ensure(
        e.passed("N1-join") && e.passed("N1-meet"),
        "equivrel fails N1",
    )?;
    ensure(
        status(&e, "N2") == Status::Fail && has_witness(&e, "N2"),
        "equivrel: N2 should fail with a witness",
    )?;
    Ok(format!(
        "subsets N1-join witness: {}",
        n.item("N1-join").unwrap().witnesses[0].detail
    ))
}

fn exaq_reproduction() -> Outcome {
    let z = finset_skeleton(3);
    let form = exaq_form(&z);
    ensure(
        form.fiber_sizes() == [1, 2, 5, 15],
        format!("fiber sizes {:?}", form.fiber_sizes()),
    )?;
    let o = of(&form)?;
    ensure(check_noetherian(&o).all_pass(), "noetherian battery fails")?;
    let (r, dec) = exact_join_check(&o);
    ensure(dec.is_some() && r.all_pass(), "no exact join decomposition")?;
    let battery = exact_join_battery(&o).map_err(|e| e.to_string())?;
    ensure(
        battery.all_pass(),
        format!(
            "battery fails: {:?}",
            battery.failing().map(|i| &i.name).collect::<Vec<_>>()
        ),
    )?;
    Ok(format!(
        "fibers (1, 2, 5, 15), {} battery items",
        battery.items.len()
    ))
}

fn synthesis_pipeline() -> Outcome {
    let z = finset_skeleton(3);
    let (fs, fe) = (of(&subsets_form(&z))?, of(&equivrel_form(&z))?);
    let (r, fac) = check_orean_factorization(&fs, &fe).map_err(|e| e.to_string())?;
    let fac = fac.ok_or_else(|| format!("not an orean factorization:\n{}", r.to_pretty()))?;
    ensure(
        check_synthesis_conditions(&fac).all_pass(),
        "synthesis conditions fail",
    )?;
    let js = construct_join_noetherian(&fac).map_err(|e| e.to_string())?;
    ensure(
        js.report.passed("closure-agrees"),
        "closure and filtered subform disagree",
    )?;
    ensure(js.report.all_pass(), "synthesis report fails")?;
    ensure(
        find_isomorphism(&js.form, &exaq_form(&z)).found().is_some(),
        "not isomorphic to the pairs form",
    )?;
    Ok(format!("fibers {:?} ≅ pairs form", js.form.fiber_sizes()))
}

fn sets_dual_battery() -> Outcome {
    let b = zoo_bicategory("sets", 3).unwrap();
    for a in Axiom::ALL {
        ensure(
            check_axiom(&b, a, Side::Dual).all_pass(),
            format!("dual {} fails", a.label()),
        )?;
    }
    let s = synthesize_ejd_form(&b).map_err(|e| e.to_string())?;
    ensure(s.report.all_pass(), "synthesis report fails")?;
    ensure(
        find_isomorphism(&s.form, &exaq_form(&finset_skeleton(3)))
            .found()
            .is_some(),
        "ejd form is not the pairs form",
    )?;
    Ok("all 10 dual axioms pass; ejd synthesis ≅ pairs form".into())
}

fn two_chain() -> Outcome {
    let pairs = two_chain_example();
    for (b, form) in &pairs {
        for a in Axiom::BATTERY {
            ensure(
                check_axiom(b, a, Side::Dual).all_pass(),
                format!("{}: dual {} fails", form.label(), a.label()),
            )?;
        }
        let o = of(form)?;
        ensure(
            check_noetherian(&o).all_pass(),
            format!("{} not noetherian", form.label()),
        )?;
        ensure(
            exact_join_check(&o).1.is_some(),
            format!("{} lacks exact join", form.label()),
        )?;
    }
    let (f, g) = (&pairs[0].1, &pairs[1].1);
    ensure(
        f.fiber_sizes() == [1, 2, 3] && g.fiber_sizes() == [1, 3, 2],
        "fiber sizes differ from (1,2,3)/(1,3,2)",
    )?;
    ensure(
        find_isomorphism(f, g).is_refuted(),
        "isomorphism search did not refute",
    )?;
    Ok("fibers (1,2,3) and (1,3,2), isomorphism refuted".into())
}

fn closure_census() -> Outcome {
    let z = finset_skeleton(3);
    let mut lines = Vec::new();
    let mut findings = Vec::new();
    let subsets = of(&subsets_form(&z))?;
    let fill = Operator::from_fn(subsets.form(), |x, a| {
        if a == subsets.bottom(x) {
            a
        } else {
            subsets.top(x)
        }
    });
    let equivrel = of(&equivrel_form(&z))?;
    let cases: [(&str, &OreanForm, bool, Vec<Operator>, usize); 4] = [
        (
            "subsets closure",
            &subsets,
            false,
            vec![
                Operator::identity(subsets.form()),
                constant_top(&subsets),
                fill,
            ],
            3,
        ),
        (
            "subsets co-closure",
            &subsets,
            true,
            vec![
                Operator::identity(subsets.form()),
                constant_bottom(&subsets),
            ],
            2,
        ),
        (
            "equivrel closure",
            &equivrel,
            false,
            vec![Operator::identity(equivrel.form()), constant_top(&equivrel)],
            2,
        ),
        (
            "equivrel co-closure",
            &equivrel,
            true,
            vec![
                Operator::identity(equivrel.form()),
                constant_bottom(&equivrel),
            ],
            2,
        ),
    ];
    for (name, form, co, required, expected) in cases {
        let census = enumerate_closure_operators(form, co, CENSUS_BUDGET);
        let ops = census
            .operators()
            .ok_or_else(|| format!("{name}: budget exhausted"))?;
        for r in &required {
            ensure(ops.contains(r), format!("{name}: missing {:?}", r.assign))?;
        }
        for extra in ops.iter().filter(|o| !required.contains(o)) {
            findings.push(format!("{name} excess {:?}", extra.assign));
        }
        ensure(
            ops.len() == expected,
            format!("{name}: {} operators, expected {expected}", ops.len()),
        )?;
        lines.push(format!("{name}={}", ops.len()));
    }
    for f in &findings {
        println!("  finding: {f}");
    }
    Ok(lines.join(", "))
}

fn wyler_suite() -> Outcome {
    let mut done = Vec::new();
    for (name, b) in zoo_bicategories() {
        if !check_axiom(&b, Axiom::FactorizationSystem, Side::Direct).all_pass() {
            continue;
        }
        let fs = of(&m_subobjects_form(&b.cat, &b.m).map_err(|e| e.to_string())?)?;
        let fe = of(&e_quotients_form(&b.cat, &b.e).map_err(|e| e.to_string())?)?;
        let (r, fac) = check_orean_factorization(&fs, &fe).map_err(|e| e.to_string())?;
        let fac =
            fac.ok_or_else(|| format!("{name}: not an orean factorization:\n{}", r.to_pretty()))?;
        let laws = wyler_laws(&fac);
        for item in [
            "bottom-neutral",
            "idempotent",
            "beta-from-bottom",
            "beta-saturated",
            "alpha-threshold",
            "pullback-square",
        ] {
            ensure(laws.passed(item), format!("{name}: {item} fails"))?;
        }
        ensure(
            laws.all_pass(),
            format!(
                "{name}: {:?}",
                laws.failing().map(|i| &i.name).collect::<Vec<_>>()
            ),
        )?;
        done.push(name);
    }
    ensure(!done.is_empty(), "no orean factorization in the zoo")?;
    Ok(format!("laws hold on {}", done.join(", ")))
}

fn modular_law() -> Outcome {
    let mut applicable = 0;
    for (name, form) in zoo_catalog() {
        let o = of(&form)?;
        let n = check_noetherian(&o);
        if !(n.passed("N1-join") && n.passed("N1-meet")) {
            continue;
        }
        let item = restricted_modular_law(&o, &classify(&o));
        ensure(
            item.failures == 0,
            format!("{name}: {} violations", item.failures),
        )?;
        applicable += 1;
    }
    Ok(format!("zero violations across {applicable} forms with N1"))
}

fn permuted(flags: SpecialFlags) -> SpecialFlags {
    SpecialFlags {
        conormal_form: flags.normal_form,
        normal_form: flags.conormal_form,
        antinormal: flags.anticonormal,
        anticonormal: flags.antinormal,
        ..flags
    }
}

fn verdicts(o: &OreanForm) -> (Vec<(String, Status)>, SpecialFlags, usize, usize) {
    let n = check_noetherian(o);
    let cls = classify(o);
    let counts = (0..o.n_objects()).map(|x| (cls.conormal(x).len(), cls.normal(x).len()));
    let (c, nn) = counts.fold((0, 0), |(a, b), (p, q)| (a + p, b + q));
    let items = n.items.iter().map(|i| (i.name.clone(), i.status)).collect();
    (items, special_predicates(o, &cls).0, c, nn)
}

fn duality() -> Outcome {
    let swap = |name: &str| match name {
        "N1-join" => "N1-meet".to_string(),
        "N1-meet" => "N1-join".to_string(),
        other => other.to_string(),
    };
    let mut forms = 0;
    for (name, form) in zoo_catalog() {
        let (items, flags, c, n) = verdicts(&of(&form)?);
        let (ditems, dflags, dc, dn) = verdicts(&of(&dual_form(&form))?);
        let mut expected: Vec<(String, Status)> =
            items.into_iter().map(|(k, s)| (swap(&k), s)).collect();
        let mut got = ditems;
        expected.sort_by(|a, b| a.0.cmp(&b.0));
        got.sort_by(|a, b| a.0.cmp(&b.0));
        ensure(
            expected == got,
            format!("{name}: noetherian verdicts not dual"),
        )?;
        ensure(
            permuted(flags) == dflags,
            format!("{name}: special predicates not dual"),
        )?;
        ensure(
            (c, n) == (dn, dc),
            format!("{name}: conormal/normal counts not swapped"),
        )?;
        forms += 1;
    }
    let mut axioms = 0;
    for (name, b) in zoo_bicategories() {
        let op = b.opposite();
        for a in Axiom::ALL {
            let direct = check_axiom(&b, a, Side::Direct).verdict();
            let dual = check_axiom(&b, a, Side::Dual).verdict();
            ensure(
                direct == check_axiom(&op, a, Side::Dual).verdict(),
                format!("{name}: {} not dual", a.label()),
            )?;
            ensure(
                dual == check_axiom(&op, a, Side::Direct).verdict(),
                format!("{name}: dual {} not dual", a.label()),
            )?;
            axioms += 1;
        }
    }
    Ok(format!(
        "{forms} forms and {axioms} axiom pairs agree under duality"
    ))
}

fn pointed_corner() -> Outcome {
    let mut notes = Vec::new();
    let groups = of(&subgroup_form(&groups_category(4)))?;
    let cls = classify(&groups);
    ensure(
        special_predicates(&groups, &cls).0.conormal_form,
        "subgroups are not conormal",
    )?;
    ensure(
        check_noetherian(&groups).all_pass(),
        "subgroups are not noetherian",
    )?;
    let exteriors = groups
        .form()
        .all_clusters()
        .all(|(x, a)| cls.get(x, a).exterior_n.is_some());
    ensure(exteriors, "some subgroup lacks a normal exterior")?;
    notes.push("groups ≤ 4: conormal, noetherian, normal exteriors".to_string());

    let pointed = of(&quotients_form(&pointed_finset_skeleton(3)))?;
    ensure(
        check_noetherian(&pointed).all_pass(),
        "pointed quotients are not noetherian",
    )?;
    let meet = exact_meet_check(&pointed).1.is_some();
    let join = exact_join_check(&pointed).1.is_some();
    ensure(
        meet,
        format!("pointed quotients: noetherian, but no exact meet decomposition (exact join decomposition: {join})"),
    )?;
    notes.push("pointed quotients: noetherian, exact meet".to_string());
    Ok(notes.join("; "))
}

fn optimality() -> Outcome {
    let z = finset_skeleton(2);
    let b = zoo_bicategory("sets", 2).unwrap();
    let s = synthesize_ejd_form(&b).map_err(|e| e.to_string())?;
    // The direct reading is not noetherian, so optimality says nothing about it.
    let direct =
        subquotients_form(&z.cat, &epis(&z.cat), &monos(&z.cat)).map_err(|e| e.to_string())?;
    let direct_noetherian = check_orean(&direct)
        .1
        .is_some_and(|of| check_noetherian(&of).all_pass());
    let sq = dual_subquotients_form(&b).map_err(|e| e.to_string())?;
    let of = check_orean(&sq)
        .1
        .ok_or("dual subquotients are not orean")?;
    ensure(
        check_noetherian(&of).all_pass(),
        "dual subquotients are not noetherian",
    )?;
    let outcome = find_full_embedding(&s.form, &sq, OPTIMALITY_BUDGET);
    ensure(
        outcome.found().is_some(),
        format!("no full embedding: {outcome:?}"),
    )?;
    Ok(format!(
        "fibers {:?} embed into {:?} (direct subquotients noetherian: {direct_noetherian})",
        s.form.fiber_sizes(),
        sq.fiber_sizes()
    ))
}

/// One battery criterion and its runtime cap.
#[derive(Clone, Copy)]
pub struct Criterion {
    pub index: usize,
    pub name: &'static str,
    pub cap: Duration,
    run: fn() -> Outcome,
}

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub elapsed: Duration,
    pub detail: String,
}

impl CriterionResult {
    /// `PASS  n name [t s] detail`
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!(
            "{tag} {:>2} {} [{:.1}s] {}",
            self.index,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |index, name, cap, run| Criterion {
        index,
        name,
        cap,
        run,
    };
    vec![
        c(1, "subset/equivalence dichotomy", DEFAULT_CAP, dichotomy),
        c(2, "pairs form reproduction", DEFAULT_CAP, exaq_reproduction),
        c(
            3,
            "join synthesis pipeline",
            DEFAULT_CAP,
            synthesis_pipeline,
        ),
        c(
            4,
            "sets bicategory dual battery",
            DEFAULT_CAP,
            sets_dual_battery,
        ),
        c(5, "2-chain non-uniqueness", DEFAULT_CAP, two_chain),
        c(6, "closure census", CENSUS_CAP, closure_census),
        c(7, "Wyler law suite", DEFAULT_CAP, wyler_suite),
        c(8, "restricted modular law", DEFAULT_CAP, modular_law),
        c(9, "duality involution", DEFAULT_CAP, duality),
        c(10, "pointed and group corner", GROUPS_CAP, pointed_corner),
        c(11, "optimality spot-check", DEFAULT_CAP, optimality),
    ]
}

/// Runs one criterion. Panics and cap overruns count as failures.
pub fn run_criterion(c: &Criterion) -> CriterionResult {
    let start = Instant::now();
    let run = c.run;
    let outcome = catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
    let elapsed = start.elapsed();
    let outcome = match outcome {
        Ok(_) if elapsed > c.cap => Err(format!("exceeded the {}s cap", c.cap.as_secs())),
        other => other,
    };
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        index: c.index,
        name: c.name,
        passed,
        elapsed,
        detail,
    }
}

/// Folds battery results into a report with one item per criterion. Timings
/// are left out so the report is reproducible.
pub fn battery_report(results: &[CriterionResult]) -> CheckReport {
    let mut report = CheckReport::new("acceptance battery");
    for r in results {
        let name = format!("{:02}-{}", r.index, r.name);
        let item = if r.passed {
            CheckItem::pass(name, 1).note(r.detail.clone())
        } else {
            CheckItem::fail(name, Witness::new(r.detail.clone()))
        };
        report.push(item);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criteria_are_numbered_in_order() {
        let cs = criteria();
        assert_eq!(cs.len(), 11);
        assert!(cs.iter().enumerate().all(|(i, c)| c.index == i + 1));
    }

    #[test]
    fn quick_criteria_pass() {
        let cs = criteria();
        for i in [5, 11] {
            let r = run_criterion(&cs[i - 1]);
            assert!(r.passed, "{}", r.line());
        }
    }

    #[test]
    fn report_mirrors_results() {
        let ok = CriterionResult {
            index: 1,
            name: "a",
            passed: true,
            elapsed: Duration::ZERO,
            detail: "d".into(),
        };
        let bad = CriterionResult {
            passed: false,
            index: 2,
            ..ok.clone()
        };
        let report = battery_report(&[ok, bad]);
        assert!(report.passed("01-a"));
        assert!(!report.passed("02-a"));
    }
}
