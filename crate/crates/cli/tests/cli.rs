use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use clusterform::formcore::{Form, FormDoc};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_clusterform"));
    cmd.env_remove("CLUSTERFORM_SEED_CACHE");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn item<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["items"]
        .as_array()
        .unwrap()
        .iter()
        .find(|i| i["name"] == name)
        .unwrap_or_else(|| panic!("no item {name}"))
}

fn emit(dir: &Path, args: &[&str], file: &str) -> PathBuf {
    let path = dir.join(file);
    let mut full: Vec<&str> = vec!["zoo-emit"];
    full.extend(args);
    full.extend(["-o", path.to_str().unwrap()]);
    let out = run(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn noetherian_check_passes_on_the_pairs_form() {
    let dir = TempDir::new().unwrap();
    let f = emit(dir.path(), &["exaq"], "exaq.json");
    let out = run(&["check", s(&f), "--axioms", "noetherian"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["schema"], "report/1");
}

#[test]
fn noetherian_check_fails_on_subsets_with_witnesses() {
    let dir = TempDir::new().unwrap();
    let f = emit(dir.path(), &["subsets"], "subsets.json");
    let out = run(&["check", s(&f), "--axioms", "noetherian"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    for name in ["N1-join", "N2"] {
        let it = item(&report, name);
        assert_eq!(it["status"], "fail");
        assert!(!it["witnesses"].as_array().unwrap().is_empty());
    }
    assert_eq!(item(&report, "N1-meet")["status"], "pass");
}

#[test]
fn two_chain_forms_compare_with_a_fiber_size_certificate() {
    let dir = TempDir::new().unwrap();
    let a = emit(dir.path(), &["two-chain-123"], "a.json");
    let b = emit(dir.path(), &["two-chain-132"], "b.json");
    let out = run(&["compare", s(&a), s(&b)]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    let detail = item(&report, "fiber-sizes")["witnesses"][0]["detail"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(
        detail.contains("[1, 2, 3]") && detail.contains("[1, 3, 2]"),
        "{detail}"
    );
    let iso = item(&report, "isomorphic")["witnesses"][0]["detail"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(iso.starts_with("not isomorphic"), "{iso}");
}

#[test]
fn form_documents_round_trip_bit_exactly() {
    let dir = TempDir::new().unwrap();
    for name in ["exaq", "palettes", "two-chain-132"] {
        let f = emit(dir.path(), &[name, "--size", "2"], &format!("{name}.json"));
        let text = std::fs::read_to_string(&f).unwrap();
        let doc: FormDoc = serde_json::from_str(&text).unwrap();
        let again = Form::from_doc(&doc).unwrap().to_doc();
        let mut back = serde_json::to_string_pretty(&again).unwrap();
        back.push('\n');
        assert_eq!(back, text, "{name}");
    }
}

#[test]
fn reports_are_byte_stable() {
    let dir = TempDir::new().unwrap();
    let f = emit(dir.path(), &["equivrel"], "e.json");
    let first = run(&["check", s(&f), "--axioms", "all"]);
    let second = run(&["check", s(&f), "--axioms", "all"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(code(&first), 1);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema":"form/2"}"#).unwrap();
    assert_eq!(code(&run(&["validate", s(&bad)])), 2);
    assert_eq!(
        code(&run(&["validate", s(&dir.path().join("missing.json"))])),
        2
    );
    let f = emit(dir.path(), &["subsets", "--size", "2"], "s.json");
    assert_eq!(code(&run(&["check", s(&f), "--axioms", "N7"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["zoo-emit", "no-such-form"])), 2);
}

#[test]
fn budget_exhaustion_is_reported_distinctly() {
    let dir = TempDir::new().unwrap();
    let a = emit(dir.path(), &["exaq"], "a.json");
    let out = run(&["compare", s(&a), s(&a), "--budget", "2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        item(&json(&out), "isomorphic")["status"],
        "budget-exhausted"
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget-exhausted"));
}

#[test]
fn pair_synthesis_reproduces_the_pairs_form() {
    let dir = TempDir::new().unwrap();
    let subsets = emit(dir.path(), &["subsets"], "s.json");
    let equivrel = emit(dir.path(), &["equivrel"], "e.json");
    let exaq = emit(dir.path(), &["exaq"], "q.json");
    let made = dir.path().join("made.json");
    let out = run(&["synthesize", s(&subsets), s(&equivrel), "-o", s(&made)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(code(&run(&["compare", s(&made), s(&exaq)])), 0);
}

#[test]
fn bicategory_synthesis_respects_the_side() {
    let dir = TempDir::new().unwrap();
    let sets = emit(dir.path(), &["--kind", "bicat", "sets"], "sets.json");
    let out = run(&["synthesize", s(&sets), "--side", "dual"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["schema"], "form/1");
    let direct = run(&["synthesize", s(&sets)]);
    assert_eq!(code(&direct), 1);
    assert_eq!(json(&direct)["schema"], "report/1");
}

#[test]
fn bicategory_checks_select_axioms() {
    let dir = TempDir::new().unwrap();
    let sets = emit(dir.path(), &["--kind", "bicat", "sets"], "sets.json");
    let dual = run(&["check", s(&sets), "--axioms", "all", "--side", "dual"]);
    assert_eq!(code(&dual), 0);
    let one = json(&run(&["check", s(&sets), "--axioms", "b3"]));
    assert!(one["items"]
        .as_array()
        .unwrap()
        .iter()
        .all(|i| i["name"].as_str().unwrap().starts_with("B3.")));
}

#[test]
fn seed_cache_is_written_and_reused() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("cache");
    let first = run(&["zoo-emit", "quotients", "--seed-cache", s(&cache)]);
    let cached = cache.join("form-quotients-3.json");
    assert!(cached.is_file());
    let second = bin()
        .args(["zoo-emit", "quotients"])
        .env("CLUSTERFORM_SEED_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read(&cached).unwrap(), first.stdout);
}

#[test]
fn decompose_and_classify_emit_reports() {
    let dir = TempDir::new().unwrap();
    let exaq = emit(dir.path(), &["exaq"], "q.json");
    let out = run(&["decompose", s(&exaq)]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["exact"], true);
    assert_eq!(doc["terms"][0], "∨");
    let chain = emit(dir.path(), &["two-chain-123"], "c.json");
    assert_eq!(code(&run(&["classify", s(&chain)])), 0);
}

#[test]
fn battery_runs_selected_criteria() {
    let ok = run(&["battery", "--only", "5,11"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["items"].as_array().unwrap().len(), 2);
    assert_eq!(code(&run(&["battery", "--only", "12"])), 2);
}
