use std::path::PathBuf;
use std::process::{Command, Output};

use cjlab_core::choice::{Choice, ChoiceFunction};
use cjlab_core::cjmodel::build_example_1_1;
use cjlab_core::json;
use cjlab_core::modal::all_models;
use cjlab_core::prefstruct::{CopyRef, PrefStructure};
use cjlab_core::Set;

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cjlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn cjlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cjlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON report")
}

fn ranked_choice() -> ChoiceFunction {
    // 0 below 1 below 2 on three elements
    ChoiceFunction::minimal(3, |a, b| a < b)
}

#[test]
fn example_summary_and_exit_codes() {
    let o = cjlab(&["example-1-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("axioms: 15/15 pass; 5-d: FAIL; O(p/p): not valid"));
    let forced = cjlab(&["example-1-1", "--force-5d"]);
    assert!(stdout(&forced).contains("O(p/p): valid"));
}

#[test]
fn example_json_report() {
    let o = cjlab(&["example-1-1", "--json"]);
    let r = report(&o);
    assert_eq!(r["command"], "example-1-1");
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
    let failed: Vec<&str> = r["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["pass"] == false)
        .map(|v| v["check"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["5-d", "O(p/p) valid"]);
}

#[test]
fn check_cj_on_example_file() {
    let path = scratch("example.json", &json::write_cj(&build_example_1_1()));
    let p = path.to_str().unwrap();
    let o = cjlab(&["check-cj", p]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("5-d              FAIL"));
    assert!(text.contains("axiom 15         PASS"));
    let frame_ok = cjlab(&["check-cj", "--only", "3-a,4-a,5-a,5-b,5-c", p]);
    assert_eq!(frame_ok.status.code(), Some(0));
    assert!(!stdout(&frame_ok).contains("axiom"));
}

#[test]
fn digest_is_deterministic_and_input_sensitive() {
    let a = scratch("d1.json", &json::write_cj(&build_example_1_1()));
    let b = scratch(
        "d2.json",
        &json::write_cj(&build_example_1_1().normalize_ob().unwrap()),
    );
    let run = |p: &PathBuf| {
        report(&cjlab(&[
            "check-cj",
            "--json",
            "--only",
            "frame",
            p.to_str().unwrap(),
        ]))
    };
    let (r1, r2) = (run(&a), run(&a));
    assert_eq!(r1["inputs_digest"], r2["inputs_digest"]);
    assert_eq!(r1["verdicts"], r2["verdicts"]);
    assert_ne!(r1["inputs_digest"], run(&b)["inputs_digest"]);
}

#[test]
fn input_errors_exit_2() {
    let bad = scratch("bad.json", "{ not json");
    let o = cjlab(&["check-cj", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed JSON"));
    assert_eq!(
        cjlab(&["check-cj", "/nonexistent/m.json"]).status.code(),
        Some(2)
    );
    assert_eq!(cjlab(&["interdep", "--row", "99"]).status.code(), Some(2));
    assert_eq!(cjlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn represent_and_verify() {
    let f = scratch("f.json", &json::write_choice(&ranked_choice()));
    let out = f.with_file_name("s.json");
    let o = cjlab(&[
        "represent",
        "--in",
        f.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = json::read_pref(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for x in Set::full(3).subsets() {
        assert_eq!(s.mu(x), ranked_choice().image(x));
    }
}

#[test]
fn represent_rejects_non_ranked_function() {
    // f({a,b}) = {a}, f({a,b,c}) = {b}: not (μ=)
    let cf = ChoiceFunction::total(3, |x| match x.index() {
        0b011 => Set::singleton(0),
        0b111 => Set::singleton(1),
        _ => x,
    });
    let f = scratch("bad_f.json", &json::write_choice(&cf));
    let o = cjlab(&["represent", "--in", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("representable    FAIL"));
}

#[test]
fn props_and_only_filter() {
    let f = scratch("props.json", &json::write_choice(&ranked_choice()));
    let o = cjlab(&["props", "--in", f.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["verdicts"].as_array().unwrap().len(), 20);
    let o = cjlab(&["props", "--in", f.to_str().unwrap(), "--only", "eq,ratm"]);
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("PASS")).count(), 2);
}

#[test]
fn rules_on_language_function() {
    // minimal models under a ranking of the four models of p0, p1
    let cf = ChoiceFunction::minimal(4, |a, b| a.count_ones() > b.count_ones());
    let f = scratch("rules.json", &json::write_choice(&cf));
    let o = cjlab(&[
        "rules",
        "--in",
        f.to_str().unwrap(),
        "--atoms",
        "p,q",
        "--only",
        "cum,ratm,or",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = cjlab(&["correspond", "--in", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let three = scratch("three.json", &json::write_choice(&ranked_choice()));
    assert_eq!(
        cjlab(&["rules", "--in", three.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn correspondence_sweep_on_one_atom() {
    let o = cjlab(&["correspond", "--atoms", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("256 functions (exhaustive)"));
}

#[test]
fn interdep_row_10() {
    let o = cjlab(&["interdep", "--row", "10", "--cap", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verified to cap 3"));
    let o = cjlab(&["interdep", "--row", "9"]);
    assert!(stdout(&o).contains("witness found"));
}

#[test]
fn normalize_structure_with_two_copies() {
    let c = |point, index| CopyRef { point, index };
    let s = PrefStructure::new(
        vec!["a".into(), "b".into()],
        [c(0, 0), c(0, 1), c(1, 0)],
        Set::EMPTY,
        [(c(0, 0), c(1, 0)), (c(0, 1), c(1, 0))],
    )
    .unwrap();
    let f = scratch("pref.json", &json::write_pref(&s));
    let out = f.with_file_name("pref_out.json");
    let o = cjlab(&[
        "normalize",
        "--in",
        f.to_str().unwrap(),
        "--extra",
        "z",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let n = json::read_pref(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(n.points().len(), 3);
    assert!(n.omega().contains(2));
}

#[test]
fn translate_and_evaluate() {
    let o = cjlab(&["translate", "cond", "p", "q"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("[]((p & ~<m> p) -> q)"));
    let m = all_models(2).into_iter().next().unwrap();
    let path = scratch("modal.json", &json::write_modal(&m));
    let o = cjlab(&[
        "translate",
        "cond",
        "p1",
        "p1",
        "--model",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(cjlab(&["translate", "ratm", "p"]).status.code(), Some(2));
    assert_eq!(
        cjlab(&["translate", "cond", "p &", "q"]).status.code(),
        Some(2)
    );
}

#[test]
fn agree_prints_matrix() {
    for (i, m) in all_models(2).into_iter().enumerate() {
        let path = scratch(&format!("agree{i}.json"), &json::write_modal(&m));
        let o = cjlab(&["agree", "--model", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("rows α, columns β"));
    }
}
