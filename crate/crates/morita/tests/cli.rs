//! Runs the `morita` binary from the corpus directory and compares its
//! output with the files under `corpus/golden`. Set `MORITA_BLESS=1` to
//! rewrite them.

use std::path::PathBuf;
use std::process::{Command, Output};

use morita::corpus::corpus_dir;

fn morita(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morita"))
        .args(args)
        .current_dir(corpus_dir())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8")
}

const GOLDEN: &[(&str, i32, &[&str])] = &[
    ("verify_ex44", 0, &["verify-witness", "witnesses/ex44.wit"]),
    ("verify_ex44_categorical", 0, &["verify-witness", "witnesses/ex44.wit", "--categorical"]),
    ("verify_ex44_structured", 0, &["verify-witness", "witnesses/ex44.wit", "--format", "structured"]),
    ("verify_ex44_definitional", 1, &["verify-witness", "witnesses/ex44.wit", "--definitional"]),
    ("verify_group", 0, &["verify-witness", "witnesses/group.wit", "--definitional"]),
    ("verify_order", 0, &["verify-witness", "witnesses/order.wit", "--definitional"]),
    ("verify_mismatch", 1, &["verify-witness", "witnesses/mismatch.wit"]),
    ("verify_wrong_order", 1, &["verify-witness", "witnesses/wrong_order.wit"]),
    ("models_ex41", 0, &["models", "theories/ex41_t1.th", "--bound", "4"]),
    ("models_groups", 0, &["models", "theories/group_me.th", "--bound", "4", "--count"]),
    ("check_subsort", 0, &["check", "cases/subsort_p.th", "--step", "cases/subsort_p.ext"]),
    ("check_group_inverse", 0, &["check", "cases/group_inverse.th", "--step", "cases/group_inverse.ext", "--bound", "4"]),
    ("expand_subsort", 0, &["expand", "--theory", "cases/subsort_p.th", "--step", "cases/subsort_p.ext", "--model", "models/three_a.model"]),
    ("expand_quotient", 0, &["expand", "--theory", "cases/quotient_kernel.th", "--step", "cases/quotient_kernel.ext", "--bound", "2"]),
    ("translate_subsort", 0, &["translate", "--theory", "cases/subsort_p.th", "--step", "cases/subsort_p.ext", "--formula", "exists sp z. z = z"]),
    (
        "translate_coproduct_simplified",
        0,
        &[
            "translate", "--theory", "cases/coproduct_pair.th", "--step", "cases/coproduct_pair.ext",
            "--formula", "forall s1 z. z = w", "--free", "w:s1", "--verify", "--simplify",
        ],
    ),
    ("translate_samples", 0, &["translate", "--theory", "cases/product_rel.th", "--step", "cases/product_rel.ext", "--samples", "25", "--verify", "--seed", "3"]),
    ("category_ex41", 0, &["category", "theories/ex41_t1.th", "--bound", "4"]),
    ("category_truncated", 1, &["category", "--truncated", "4"]),
    ("check_pi_quotient", 0, &["check-pi", "--theory", "cases/quotient_kernel.th", "--step", "cases/quotient_kernel.ext"]),
    ("check_pi_coproduct", 0, &["check-pi", "--theory", "cases/coproduct_preds.th", "--step", "cases/coproduct_preds.ext"]),
    (
        "check_morphism_lift",
        0,
        &[
            "check-morphism", "--theory", "cases/subsort_p.th", "--source", "models/three_a.model", "--target",
            "models/three_b.model", "--map", "models/swap.map", "--step", "cases/subsort_p.ext",
        ],
    ),
    (
        "check_morphism_rejected",
        1,
        &[
            "check-morphism", "--theory", "cases/subsort_p.th", "--source", "models/three_a.model", "--target",
            "models/three_b.model", "--map", "models/identity.map",
        ],
    ),
];

fn golden_path(name: &str) -> PathBuf {
    corpus_dir().join("golden").join(format!("{name}.out"))
}

#[test]
fn outputs_match_golden_files() {
    let bless = std::env::var_os("MORITA_BLESS").is_some();
    let mut mismatched = Vec::new();
    for (name, code, args) in GOLDEN {
        let o = morita(args);
        assert_eq!(o.status.code(), Some(*code), "{name}: {}", stderr(&o));
        let out = stdout(&o);
        let path = golden_path(name);
        if bless {
            std::fs::write(&path, &out).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if out != expected {
            mismatched.push(format!("{name}:\n--- expected\n{expected}--- actual\n{out}"));
        }
    }
    assert!(mismatched.is_empty(), "{}", mismatched.join("\n"));
}

#[test]
fn output_is_deterministic() {
    for (_, _, args) in GOLDEN {
        assert_eq!(morita(args).stdout, morita(args).stdout, "{args:?}");
    }
}

#[test]
fn verdict_lines_name_their_bound() {
    for (name, _, args) in GOLDEN.iter().filter(|(n, _, _)| !n.ends_with("_structured")) {
        let out = stdout(&morita(args));
        for line in out.lines().filter(|l| l.contains("Verified") || l.contains("Equivalent")) {
            assert!(line.contains("bound") || line.contains('('), "{name}: {line}");
        }
    }
}

#[test]
fn structured_reports_are_json_with_bounds() {
    let o = morita(&["verify-witness", "witnesses/ex44.wit", "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["bound"], 3);
    assert_eq!(v["verdict"], "VerifiedUpToBound(3)");
    assert_eq!(v["logical"]["bound"], "3");
    assert_eq!(v["steps"].as_array().unwrap().len(), 3);
}

#[test]
fn parse_errors_point_at_file_and_line() {
    let dir = std::env::temp_dir().join(format!("morita-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.th");
    std::fs::write(&bad, "sort a\npred p : a\naxiom forall a x. q(x)\n").unwrap();
    let o = morita(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(&format!("{}:3:", bad.display())), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());

    let ext = dir.join("bad.ext");
    std::fs::write(&ext, "\n\ndefine sort sp = subsort a with i where p(y)\n").unwrap();
    let good = dir.join("good.th");
    std::fs::write(&good, "sort a\npred p : a\n").unwrap();
    let o = morita(&["check", good.to_str().unwrap(), "--step", ext.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(&format!("{}:3:", ext.display())), "{}", stderr(&o));

    let wit = dir.join("bad.wit");
    std::fs::write(&wit, "theory left {\n  sort a\n  pred p : a x\n}\n").unwrap();
    let o = morita(&["verify-witness", wit.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(&format!("{}:3:", wit.display())), "{}", stderr(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &["--bound", "0", "models", "theories/ex41_t1.th"],
        &["models"],
        &["models", "theories/missing.th"],
        &["--format", "yaml", "models", "theories/ex41_t1.th"],
        &["translate", "--theory", "cases/subsort_p.th", "--step", "cases/subsort_p.ext", "--formula", "exists sp z. q(z)"],
    ] {
        let o = morita(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&o).is_empty());
    }
    let help = morita(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("verify-witness"));
}

#[test]
fn in_process_runner_matches_the_binary() {
    let args = ["morita", "verify-witness", "witnesses/ex44.wit"];
    let dir = corpus_dir();
    let abs = dir.join("witnesses/ex44.wit");
    let o = morita::cli::run(["morita", "verify-witness", abs.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.as_bytes(), morita(&args[1..]).stdout.as_slice());
}
