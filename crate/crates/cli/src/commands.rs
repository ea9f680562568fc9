//! One function per verb. Each returns the process exit code, or an input
//! error that `main` turns into exit code 2.

use std::path::{Path, PathBuf};

use clusterform::battery::{battery_report, criteria, run_criterion};
use clusterform::bicat::{
    axiom_equivalences, check_axioms, left_exact_bicat_check, synthesize_ejd_form,
    synthesize_emd_form, trivial_objects, zoo_bicategory, Axiom, BicatError, Bicategory, Side,
    Synthesis, ZOO_BICATEGORY_NAMES,
};
use clusterform::decomp::{exact_join_check, exact_meet_check, find_exact_decomposition};
use clusterform::factor::{check_orean_factorization, construct_join_noetherian};
use clusterform::fincat::{validate_category, FinCategory};
use clusterform::formcore::{
    find_full_embedding, find_isomorphism_with_budget, same_base, validate_form, Form, IsoOutcome,
};
use clusterform::orean::{
    self, check_hulls, check_noetherian, check_orean, restricted_modular_law, special_predicates,
    OreanForm,
};
use clusterform::report::{CheckItem, CheckReport, Status, Witness};
use clusterform::zoo::{
    chain_category, finset_skeleton, groups_category, pointed_finset_skeleton, zoo_form,
    ZOO_FORM_NAMES,
};
use serde::Serialize;

use crate::docs::{input_error, load, load_bicat, load_form, Doc, InputError};
use crate::{Format, Global, Kind, SideArg};

type Outcome = Result<u8, InputError>;

const ZOO_CATEGORY_NAMES: [&str; 4] = ["finset", "pointed-finset", "groups", "chain"];
const FORM_AXIOMS: [&str; 6] = [
    "form",
    "orean",
    "noetherian",
    "exact-join",
    "exact-meet",
    "modular",
];

fn exit_code(report: &CheckReport) -> u8 {
    match report.verdict() {
        Status::Pass | Status::Skipped => 0,
        Status::Fail => 1,
        Status::BudgetExhausted => {
            eprintln!("reason: budget-exhausted");
            1
        }
        Status::Error => 2,
    }
}

fn emit_report(g: &Global, report: &CheckReport) -> u8 {
    match g.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Pretty => print!("{}", report.to_pretty()),
    }
    exit_code(report)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn write_or_print(text: &str, output: Option<&Path>) -> Result<(), InputError> {
    match output {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| input_error(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn side(s: SideArg) -> Side {
    match s {
        SideArg::Direct => Side::Direct,
        SideArg::Dual => Side::Dual,
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn validate(g: &Global, input: &Path) -> Outcome {
    let report = match load(input)? {
        Doc::Category(doc) => validate_category(&doc),
        Doc::Form(doc) => {
            let form = Form::from_doc(&doc)
                .map_err(|e| input_error(format!("{}: {e}", input.display())))?;
            validate_form(&form)
        }
        Doc::Bicat(doc) => {
            let b = load_bicat(&doc, input)?;
            check_axioms(&b, &[Axiom::FactorizationSystem], Side::Direct)
        }
    };
    Ok(emit_report(g, &report))
}

pub fn check(g: &Global, input: &Path, axioms: &str, s: SideArg) -> Outcome {
    let report = match load(input)? {
        Doc::Category(doc) => validate_category(&doc),
        Doc::Form(doc) => {
            let form = Form::from_doc(&doc)
                .map_err(|e| input_error(format!("{}: {e}", input.display())))?;
            check_form(&form, &split_list(axioms))?
        }
        Doc::Bicat(doc) => check_bicat(&load_bicat(&doc, input)?, &split_list(axioms), side(s))?,
    };
    Ok(emit_report(g, &report))
}

fn check_form(form: &Form, requested: &[String]) -> Result<CheckReport, InputError> {
    let mut wanted: Vec<&str> = Vec::new();
    for r in requested {
        match r.as_str() {
            "all" => wanted.extend(FORM_AXIOMS),
            name => match FORM_AXIOMS.iter().find(|a| **a == name) {
                Some(a) => wanted.push(a),
                None => {
                    return Err(input_error(format!(
                        "unknown form axiom set {name:?}; expected one of {FORM_AXIOMS:?} or all"
                    )))
                }
            },
        }
    }
    if wanted.is_empty() {
        return Err(input_error("no axioms requested"));
    }
    let mut report = CheckReport::new(form.label());
    if wanted.contains(&"form") {
        report.absorb("", validate_form(form));
    }
    let needs_orean = wanted.iter().any(|w| *w != "form");
    if !needs_orean {
        return Ok(report);
    }
    let (orean_report, of) = check_orean(form);
    let Some(of) = of else {
        report.absorb("", orean_report);
        return Ok(report);
    };
    if wanted.contains(&"orean") {
        report.absorb("", orean_report);
    }
    if wanted.contains(&"noetherian") {
        report.absorb("", check_noetherian(&of));
    }
    if wanted.contains(&"exact-join") {
        report.absorb("exact-join", exact_join_check(&of).0);
    }
    if wanted.contains(&"exact-meet") {
        report.absorb("exact-meet", exact_meet_check(&of).0);
    }
    if wanted.contains(&"modular") {
        report.push(restricted_modular_law(&of, &orean::classify(&of)));
    }
    Ok(report)
}

fn check_bicat(
    b: &Bicategory,
    requested: &[String],
    side: Side,
) -> Result<CheckReport, InputError> {
    let mut axioms: Vec<Axiom> = Vec::new();
    let mut extras: Vec<&str> = Vec::new();
    for r in requested {
        match r.as_str() {
            "all" => {
                axioms.extend(Axiom::ALL);
                extras.extend(["equivalences", "trivial"]);
            }
            "battery" => axioms.extend(Axiom::BATTERY),
            "equivalences" => extras.push("equivalences"),
            "trivial" => extras.push("trivial"),
            "left-exact" => extras.push("left-exact"),
            other => axioms.push(Axiom::parse(other).map_err(|e| input_error(e.to_string()))?),
        }
    }
    let mut seen = Vec::new();
    axioms.retain(|a| {
        !seen.contains(a) && {
            seen.push(*a);
            true
        }
    });
    let subject = match side {
        Side::Direct => "bicategory",
        Side::Dual => "bicategory (dual axioms)",
    };
    let mut report = CheckReport::new(subject);
    report.absorb("", check_axioms(b, &axioms, side));
    if extras.contains(&"equivalences") {
        report.absorb("", axiom_equivalences(b, side));
    }
    if extras.contains(&"trivial") {
        report.absorb("trivial", trivial_objects(b).report);
    }
    if extras.contains(&"left-exact") {
        let checked = match side {
            Side::Direct => left_exact_bicat_check(b),
            Side::Dual => left_exact_bicat_check(&b.opposite()),
        };
        report.absorb("left-exact", checked);
    }
    if report.items.is_empty() {
        return Err(input_error("no axioms requested"));
    }
    Ok(report)
}

fn require_orean(form: &Form) -> Result<OreanForm, CheckReport> {
    let (report, of) = check_orean(form);
    of.ok_or(report)
}

pub fn classify_report(form: &Form) -> CheckReport {
    let of = match require_orean(form) {
        Ok(of) => of,
        Err(report) => return report,
    };
    let cls = orean::classify(&of);
    let mut report = CheckReport::new(format!("classification of {}", form.label()));
    report.push(CheckItem::pass("orean", 1));
    report.absorb("", special_predicates(&of, &cls).1);
    report.absorb("hulls", check_hulls(&of, &cls));
    for x in 0..of.n_objects() {
        let describe = |a: usize| {
            let tag = match (cls.is_conormal(x, a), cls.is_normal(x, a)) {
                (true, true) => "binormal",
                (true, false) => "conormal",
                (false, true) => "normal",
                (false, false) => "neither",
            };
            format!("{}: {tag}", form.cluster_name(x, a))
        };
        let parts: Vec<String> = (0..of.fiber_size(x)).map(describe).collect();
        let name = format!("clusters@{}", form.base().object_name(x));
        report.push(CheckItem::with_status(name, Status::Pass, parts.join("; ")));
    }
    report
}

pub fn classify(g: &Global, input: &Path) -> Outcome {
    let form = load_form(input)?;
    Ok(emit_report(g, &classify_report(&form)))
}

pub fn decompose(g: &Global, input: &Path) -> Outcome {
    let form = load_form(input)?;
    let of = match require_orean(&form) {
        Ok(of) => of,
        Err(report) => return Ok(emit_report(g, &report)),
    };
    let (search, found) = find_exact_decomposition(&of);
    let Some(dec) = found else {
        return Ok(emit_report(g, &search));
    };
    let doc = dec.to_doc();
    match g.format {
        Format::Json => print!("{}", to_json(&doc)),
        Format::Pretty => {
            println!("exact decomposition of {}", doc.form);
            println!("  terms: {}", doc.terms.join(" "));
            println!("  semiexact: {}, exact: {}", doc.semiexact, doc.exact);
            for (x, (s, e)) in doc.conormal_part.iter().zip(&doc.normal_part).enumerate() {
                let obj = form.base().object_name(x);
                println!(
                    "  {obj}: conormal part {{{}}}, normal part {{{}}}",
                    s.join(", "),
                    e.join(", ")
                );
            }
            print!("{}", doc.report.to_pretty());
        }
    }
    Ok(if doc.exact { 0 } else { 1 })
}

fn battery_failure_report(
    b: &Bicategory,
    side: Side,
    err: BicatError,
) -> Result<CheckReport, InputError> {
    match err {
        BicatError::AxiomBatteryFailed(_) => Ok(check_axioms(b, &Axiom::BATTERY, side)),
        other => Err(input_error(other.to_string())),
    }
}

pub fn synthesize(g: &Global, inputs: &[PathBuf], s: SideArg, output: Option<&Path>) -> Outcome {
    let (form, report) = match inputs {
        [one] => {
            let Doc::Bicat(doc) = load(one)? else {
                return Err(input_error(format!(
                    "{}: expected a bicat/1 document",
                    one.display()
                )));
            };
            let b = load_bicat(&doc, one)?;
            let side = side(s);
            let made = match side {
                Side::Direct => synthesize_emd_form(&b),
                Side::Dual => synthesize_ejd_form(&b),
            };
            match made {
                Ok(Synthesis { form, report, .. }) => (Some(form), report),
                Err(e) => (None, battery_failure_report(&b, side, e)?),
            }
        }
        [a, b] => synthesize_from_pair(&load_form(a)?, &load_form(b)?)?,
        _ => {
            return Err(input_error(
                "synthesize takes one bicat/1 or two form/1 documents",
            ))
        }
    };
    let Some(form) = form else {
        return Ok(emit_report(g, &report));
    };
    let text = to_json(&form.to_doc());
    if output.is_some() || g.format == Format::Pretty {
        write_or_print(&text, output)?;
        Ok(emit_report(g, &report))
    } else {
        print!("{text}");
        Ok(exit_code(&report))
    }
}

fn synthesize_from_pair(fs: &Form, fe: &Form) -> Result<(Option<Form>, CheckReport), InputError> {
    let (fs, fe) = match (require_orean(fs), require_orean(fe)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(r), _) | (_, Err(r)) => return Ok((None, r)),
    };
    let (report, fac) =
        check_orean_factorization(&fs, &fe).map_err(|e| input_error(e.to_string()))?;
    let Some(fac) = fac else {
        return Ok((None, report));
    };
    match construct_join_noetherian(&fac) {
        Ok(js) => Ok((Some(js.form), js.report)),
        Err(e) => {
            let mut report = CheckReport::new("join synthesis");
            report.push(CheckItem::fail(
                "synthesis-conditions",
                Witness::new(e.to_string()),
            ));
            Ok((None, report))
        }
    }
}

pub fn compare_report(a: &Form, b: &Form, embed: bool, budget: u64) -> CheckReport {
    let mut report = CheckReport::new(format!("{} versus {}", a.label(), b.label()));
    let same = same_base(a, b);
    report.push(CheckItem::from_bool(
        "same-base",
        same,
        "the forms live over different base categories",
    ));
    let (fa, fb) = (a.fiber_sizes(), b.fiber_sizes());
    let sizes_ok = if embed {
        same && fa.iter().zip(&fb).all(|(x, y)| x <= y)
    } else {
        fa == fb
    };
    let certificate = format!("fiber sizes {fa:?} versus {fb:?}");
    let sizes = if sizes_ok {
        CheckItem::pass("fiber-sizes", fa.len() as u64).note(certificate)
    } else {
        CheckItem::fail("fiber-sizes", Witness::new(certificate))
    };
    report.push(sizes);
    let name = if embed {
        "full-embedding"
    } else {
        "isomorphic"
    };
    let outcome = if embed {
        find_full_embedding(a, b, budget)
    } else {
        find_isomorphism_with_budget(a, b, budget)
    };
    let item = match outcome {
        IsoOutcome::Found { iso, nodes } => {
            let maps: Vec<String> = iso.maps.iter().map(|m| format!("{m:?}")).collect();
            CheckItem::pass(name, nodes)
                .note(format!("cluster maps per object: {}", maps.join(" ")))
        }
        IsoOutcome::Refuted { reason, nodes } => {
            let mut item = CheckItem::fail(
                name,
                Witness::new(format!(
                    "not {}: {reason}",
                    if embed { "embeddable" } else { "isomorphic" }
                )),
            );
            item.instances = nodes;
            item
        }
        IsoOutcome::BudgetExhausted { nodes } => CheckItem::with_status(
            name,
            Status::BudgetExhausted,
            format!("budget of {budget} nodes exhausted after {nodes}"),
        ),
    };
    report.push(item);
    report
}

pub fn compare(g: &Global, a: &Path, b: &Path, embed: bool) -> Outcome {
    let (fa, fb) = (load_form(a)?, load_form(b)?);
    Ok(emit_report(g, &compare_report(&fa, &fb, embed, g.budget)))
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Form => "form",
        Kind::Category => "category",
        Kind::Bicat => "bicat",
    }
}

fn default_size(kind: Kind, name: &str) -> usize {
    match (kind, name) {
        (Kind::Form, "palettes") => 2,
        (Kind::Form, "subgroups" | "normal-subgroups")
        | (Kind::Category | Kind::Bicat, "groups") => 4,
        _ => 3,
    }
}

fn generate(kind: Kind, name: &str, n: usize) -> Result<String, InputError> {
    let unknown = |names: &[&str]| {
        input_error(format!(
            "unknown {} {name:?}; known: {}",
            kind_name(kind),
            names.join(", ")
        ))
    };
    match kind {
        Kind::Form => zoo_form(name, n)
            .map(|f| to_json(&f.to_doc()))
            .ok_or_else(|| unknown(&ZOO_FORM_NAMES)),
        Kind::Bicat => zoo_bicategory(name, n)
            .map(|b| to_json(&b.to_doc()))
            .ok_or_else(|| unknown(&ZOO_BICATEGORY_NAMES)),
        Kind::Category => {
            let cat: FinCategory = match name {
                "finset" => (*finset_skeleton(n).cat).clone(),
                "pointed-finset" => (*pointed_finset_skeleton(n).cat).clone(),
                "groups" => (*groups_category(n).cat).clone(),
                "chain" => chain_category(n),
                _ => return Err(unknown(&ZOO_CATEGORY_NAMES)),
            };
            Ok(to_json(&cat.to_doc()))
        }
    }
}

/// Cached documents are reused only when they still carry a known schema.
fn cached(dir: &Path, kind: Kind, name: &str, n: usize) -> Result<String, InputError> {
    let path = dir.join(format!("{}-{name}-{n}.json", kind_name(kind)));
    if path.is_file() && load(&path).is_ok() {
        return std::fs::read_to_string(&path)
            .map_err(|e| input_error(format!("{}: {e}", path.display())));
    }
    let text = generate(kind, name, n)?;
    std::fs::create_dir_all(dir).map_err(|e| input_error(format!("{}: {e}", dir.display())))?;
    std::fs::write(&path, &text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok(text)
}

pub fn zoo_emit(
    g: &Global,
    name: Option<&str>,
    kind: Kind,
    size: Option<usize>,
    output: Option<&Path>,
    list: bool,
) -> Outcome {
    if list {
        for (k, names) in [
            ("form", &ZOO_FORM_NAMES[..]),
            ("category", &ZOO_CATEGORY_NAMES[..]),
            ("bicat", &ZOO_BICATEGORY_NAMES[..]),
        ] {
            println!("{k}: {}", names.join(" "));
        }
        return Ok(0);
    }
    let name = name.ok_or_else(|| input_error("zoo-emit needs a name (or --list)"))?;
    let n = size.unwrap_or_else(|| default_size(kind, name));
    let text = match &g.seed_cache {
        Some(dir) => cached(dir, kind, name, n)?,
        None => generate(kind, name, n)?,
    };
    write_or_print(&text, output)?;
    Ok(0)
}

pub fn battery(g: &Global, only: Option<&str>) -> Outcome {
    let mut selected = criteria();
    if let Some(list) = only {
        let wanted: Vec<usize> = split_list(list)
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|_| input_error(format!("not a criterion number: {s:?}")))
            })
            .collect::<Result<_, _>>()?;
        if let Some(bad) = wanted.iter().find(|&&i| i == 0 || i > selected.len()) {
            return Err(input_error(format!("no criterion {bad}")));
        }
        selected.retain(|c| wanted.contains(&c.index));
    }
    let results: Vec<_> = selected.iter().map(run_criterion).collect();
    let report = battery_report(&results);
    match g.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Pretty => {
            for r in &results {
                println!("{}", r.line());
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!("{} passed, {failed} failed", results.len() - failed);
        }
    }
    Ok(exit_code(&report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_split_on_commas() {
        assert_eq!(split_list(" B1, B2',,all "), ["B1", "B2'", "all"]);
    }

    #[test]
    fn form_axiom_selection() {
        let form = zoo_form("subsets", 2).unwrap();
        assert!(check_form(&form, &["N9".into()]).is_err());
        assert!(check_form(&form, &[]).is_err());
        let r = check_form(&form, &["form".into()]).unwrap();
        assert!(["F1", "F2", "F3"].iter().all(|n| r.passed(n)));
        assert!(r.item("O1").is_none());
    }

    #[test]
    fn duplicate_axioms_are_checked_once() {
        let b = zoo_bicategory("sets", 2).unwrap();
        let r = check_bicat(&b, &["B3".into(), "b3".into()], Side::Dual).unwrap();
        assert_eq!(r.items.len(), 1);
    }

    #[test]
    fn comparing_a_form_with_itself_finds_the_identity() {
        let f = zoo_form("equivrel", 2).unwrap();
        assert!(compare_report(&f, &f, false, 1_000).all_pass());
        assert!(compare_report(&f, &f, true, 1_000).all_pass());
    }

    #[test]
    fn default_sizes_follow_the_catalog() {
        assert_eq!(default_size(Kind::Form, "palettes"), 2);
        assert_eq!(default_size(Kind::Category, "groups"), 4);
        assert_eq!(default_size(Kind::Bicat, "sets"), 3);
    }
}
