use std::path::PathBuf;

use subexp_cli::{run, Outcome, EXIT_OK, EXIT_OPEN, EXIT_REFUTED, EXIT_USAGE};
use subexp_core::adequacy::{AdequacyReport, ProofSearchResult, Status};
use subexp_core::calculus::calculus;
use subexp_core::search::Budget;
use subexp_core::{builtin, ParseMode, Sequent, SyntheticRule};

fn ok(args: &[&str]) -> String {
    let out = run(args.iter().copied());
    assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stderr);
    out.stdout
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("subexp-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn sig_show_lists_the_ll_instance() {
    let out = ok(&["sig", "--show", "ll"]);
    assert_eq!(out, "zones: lin, u\nworking: lin\nunrestricted: u\norder:\n  lin <= u\n");
    let json = ok(&["sig", "--show", "l", "--split", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["zones"], serde_json::json!(["lin.l", "lin.r"]));
    assert_eq!(v["unrestricted"], serde_json::json!(["lin.l"]));
}

#[test]
fn check_examples_exit_by_verdict() {
    let out = run(["check", "--dir", "c2i", "--sig", "mall", "--depth", "1", "lin:p |- lin:p"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("verdict: bijective"));
    assert!(out.stdout.contains("global at depth 1: agree (provable)"));

    let out = run(["check", "--dir", "naive-i2c", "--sig", "mall", "lin:(p -o 'n) |- lin:q"]);
    assert_eq!(out.code, EXIT_REFUTED);
    assert!(out.stdout.contains("offending lr-o instance: . ; [p -o 'n] |- lin:q"));

    let out = run(["check", "--dir", "i2c", "--sig", "mall", "lin:(p -o 'n) |- lin:q"]);
    assert_eq!(out.code, EXIT_OK);
}

#[test]
fn check_report_json_round_trips() {
    let text = ok(&["check", "--dir", "c2i", "--sig", "ll", "--json", "u:p |- lin:(p * ![u] 'n)"]);
    let report: AdequacyReport = serde_json::from_str(&text).unwrap();
    assert!(report.verdict.is_bijective());
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&serde_json::to_value(&report).unwrap()).unwrap()), text);
}

#[test]
fn parse_json_round_trips() {
    for (calc, text) in [("classical", "lin:p, u:(p -o 'n) |- lin:'n, u:![u] q"), ("intuitionistic", "lin:p ; . |- (p -o ?[u] p) ; .")] {
        let json = ok(&["parse", "--sig", "ll", "--calc", calc, "--json", text]);
        let s: Sequent = serde_json::from_str(&json).unwrap();
        let c = calculus(calc, builtin("ll").unwrap()).unwrap();
        assert_eq!(s, c.parse_sequent(text, ParseMode::User).unwrap());
        assert_eq!(ok(&["parse", "--sig", "ll", "--calc", calc, &s.to_string()]), format!("{s}\n"));
    }
    let f = ok(&["parse", "--formula", "--json", "p * q -o 'n"]);
    let v: serde_json::Value = serde_json::from_str(&f).unwrap();
    assert_eq!(v["polarity"], "negative");
}

#[test]
fn synthetics_json_matches_the_kernel() {
    let text = "lin:p, lin:q |- lin:(p * q), lin:(p + q)";
    let json = ok(&["synthetics", "--json", text]);
    let rules: Vec<SyntheticRule> = serde_json::from_str(&json).unwrap();
    let c = calculus("classical", builtin("mall").unwrap()).unwrap();
    let s = c.parse_sequent(text, ParseMode::User).unwrap();
    assert_eq!(rules, c.synthetic_rules(&s, &Budget::default()).unwrap());
    assert!(ok(&["synthetics", text]).starts_with(&format!("{s}\n{} synthetic rule(s)\n", rules.len())));
}

#[test]
fn prove_statuses_map_to_exit_codes() {
    let out = run(["prove", "--depth", "1", "--json", "lin:p |- lin:p"]);
    assert_eq!(out.code, EXIT_OK);
    let r: ProofSearchResult = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!((r.status, r.count), (Status::Proved, 1));

    assert_eq!(run(["prove", "--calc", "intuitionistic", "|- lin:'n"]).code, EXIT_REFUTED);
    let deep = "lin:p |- lin:(p * ![lin] (q -o ?[lin] q))";
    assert_eq!(run(["prove", "--depth", "1", deep]).code, EXIT_OPEN);
    assert_eq!(run(["prove", "--depth", "2", deep]).code, EXIT_OK);
}

#[test]
fn usage_and_validation_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["prove"],
        &["prove", "--depth", "0", "lin:p |- lin:p"],
        &["check", "--dir", "c2c", "lin:p |- lin:p"],
        &["check", "--dir", "c2i", "--sig", "nope", "lin:p |- lin:p"],
        &["parse", "lin:p -o q |- ."],
        &["parse", "--calc", "intuitionistic", "lin:p |- lin:p, lin:q"],
        &["parse", "--calc", "intuitionistic", "|- lin:('n | 'm)"],
        &["parse", "lin:'k |- lin:'k"],
        &["prove", "lin:p |- [p] ; ."],
        &["translate", "--dir", "c2i", "--mode", "lp", "p"],
        &["translate", "--dir", "naive-i2c", "--mode", "eq", "p"],
        &["synthetics", "--budget", "3", "lin:p, lin:q, lin:p |- lin:(p * q * p)"],
    ];
    for args in cases {
        let out: Outcome = run(args.iter().copied());
        assert_eq!(out.code, EXIT_USAGE, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn signature_files_are_validated() {
    let good = scratch("good.json", r#"{"zones":["lin","u"],"order":[["lin","u"]],"working":"lin","unrestricted":["u"]}"#);
    assert_eq!(ok(&["sig", "--show", good.to_str().unwrap()]), ok(&["sig", "--show", "ll"]));
    let bad = scratch("bad.json", r#"{"zones":["lin","u"],"order":[["lin","u"]],"working":"lin","unrestricted":["lin"]}"#);
    let out = run(["sig", "--show", bad.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("upward"), "{}", out.stderr);
}

#[test]
fn translate_modes() {
    assert_eq!(ok(&["translate", "--dir", "c2i", "--mode", "ne", "'n | 'm"]), "n^ * m^\n");
    assert_eq!(ok(&["translate", "--dir", "c2i", "--mode", "eq", "![lin] p"]), "![lin] (![lin] (p -o 'k) -o ?[lin] 'k)\n");
    assert_eq!(ok(&["translate", "--dir", "i2c", "--mode", "lp", "u:(p -o 'n)", "--sig", "ll"]), "u.l:(p -o 'n)\n");
    assert_eq!(ok(&["translate", "--dir", "i2c", "--mode", "ra", "'n"]), "?[lin.r] 'n | bot\n");
    assert_eq!(ok(&["translate", "--dir", "i2c", "--mode", "ra", "'n", "--unicode"]), "?_lin.r 'n ⅋ ⊥\n");
    assert_eq!(ok(&["translate", "--dir", "i2c", "lin:p |- lin:q"]), "lin.l:p |- lin.r:q\n");
    let v: serde_json::Value = serde_json::from_str(&ok(&["translate", "--dir", "i2c", "--json", "lin:p |- lin:q"])).unwrap();
    assert_eq!(v["target_signature"]["working"], "lin.l");
    let s: Sequent = serde_json::from_value(v["sequent"].clone()).unwrap();
    assert_eq!(s.to_string(), "lin.l:p |- lin.r:q");
}

#[test]
fn file_inputs_are_batched() {
    let path = scratch("batch.txt", "# identities\nlin:p |- lin:p\n\nlin:'n |- lin:'n\nlin:p |- lin:q\n");
    let file = path.to_str().unwrap();
    let out = run(["prove", "--file", file, "--depth", "2"]);
    assert_eq!(out.code, EXIT_REFUTED);
    assert_eq!(out.stdout.matches("status: proved").count(), 2);
    let json = run(["prove", "--file", file, "--json"]).stdout;
    let all: Vec<ProofSearchResult> = serde_json::from_str(&json).unwrap();
    assert_eq!(all.len(), 3);
    assert_eq!(run(["prove", "--file", file, "lin:p |- lin:p"]).code, EXIT_USAGE);
}

#[test]
fn fuzzing_is_reproducible() {
    let a = ok(&["check", "--dir", "i2c", "--fuzz", "40", "--seed", "9", "--json"]);
    let b = ok(&["check", "--dir", "i2c", "--fuzz", "40", "--seed", "9", "--json"]);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["bijective"], 40);
    let text = ok(&["check", "--dir", "c2i", "--fuzz", "30", "--seed", "2", "--depth", "2"]);
    assert!(text.starts_with("c2i: 30 cases from seed 2, 30 bijective\nglobal: "));
    let fixed = ok(&["check", "--dir", "i2c", "--sig", "l", "--fuzz", "30", "--seed", "2"]);
    assert_eq!(fixed, "i2c: 30 cases from seed 2, 30 bijective\n");
}
