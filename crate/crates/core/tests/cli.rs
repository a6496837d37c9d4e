//! End-to-end runs of the `relcalc` binary.

use std::fs;
use std::process::{Command, Output};

use relcalc::cli::RelationFile;
use relcalc::proofs::bundled_chain_induction_text;
use relcalc::syntax::{evaluate_formula, parse_formula};
use tempfile::TempDir;

fn relcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relcalc"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SUCCESSOR: &str = "universe 3\nrel a\n1 0\n2 1\nend\nrel b\n0 0\nend\n";

#[test]
fn eval_prints_pairs() {
    let dir = TempDir::new().unwrap();
    let rels = write(&dir, "r.rel", SUCCESSOR);
    let o = relcalc(&["eval", &rels, "a;a;b"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "(2,0)\n");
    let o = relcalc(&["--machine", "eval", &rels, "a_0;b"]);
    assert_eq!(stdout(&o), "0\t0\n1\t0\n2\t0\n");
}

#[test]
fn eval_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let rels = write(&dir, "r.rel", SUCCESSOR);
    for args in [
        vec!["eval", rels.as_str(), "a;x"],
        vec!["eval", rels.as_str(), "a;;b"],
        vec!["eval", "/nonexistent/r.rel", "a"],
    ] {
        let o = relcalc(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let bad = write(&dir, "bad.rel", "universe 2\nrel a\n0 5\nend\n");
    let o = relcalc(&["eval", &bad, "a"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&relcalc(&[])), 2);
    assert_eq!(code(&relcalc(&["frobnicate"])), 2);
    assert_eq!(code(&relcalc(&["check"])), 2);
    assert_eq!(code(&relcalc(&["--help"])), 0);
    assert_eq!(code(&relcalc(&["check", "a;b"])), 2);
}

#[test]
fn check_valid_and_counterexample() {
    let o = relcalc(&["check", "D22"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("clean (exhaustive n=1,2"));

    let o = relcalc(&["check", "a;a <= a", "--max-size", "2"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.starts_with("counterexample (n=2:"));
    // below the verdict line is a relation file that refutes the claim
    let body = text.split_once('\n').unwrap().1;
    let file = RelationFile::parse(body).unwrap();
    let f = parse_formula("a;a <= a").unwrap();
    assert!(!evaluate_formula(&f, &file.relations, file.universe).unwrap());

    let o = relcalc(&[
        "--machine",
        "check",
        "REFORM",
        "--max-size",
        "2",
        "--deterministic",
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(
        stdout(&o),
        "counterexample\tn=2: a={(0,1)} b={(1,0)} c={(1,0)}\n"
    );
}

#[test]
fn counterexample_feeds_back_into_eval() {
    let dir = TempDir::new().unwrap();
    let o = relcalc(&["check", "REFORM", "--max-size", "2", "--deterministic"]);
    let text = stdout(&o);
    let body: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let rels = write(&dir, "cx.rel", &body);
    // REFORM's conclusion a_0;b <= c fails: the chain leaves c
    let chain = stdout(&relcalc(&["eval", &rels, "a_0;b"]));
    let c = stdout(&relcalc(&["eval", &rels, "c"]));
    assert_eq!(c, "(1,0)\n");
    assert_eq!(chain, "(0,0) (1,0)\n");
}

#[test]
fn check_plans() {
    let o = relcalc(&["--machine", "check", "D38", "--max-size", "2"]);
    assert_eq!(stdout(&o), "valid\texhaustive n=1,2\n");
    let o = relcalc(&[
        "--machine",
        "check",
        "D38",
        "--max-size",
        "1",
        "--samples",
        "50",
        "--seed",
        "3",
    ]);
    assert_eq!(stdout(&o), "clean\texhaustive n=1; sampled n=2x50 seed=3\n");
}

#[test]
fn check_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_relcalc"))
            .env("RAYON_NUM_THREADS", threads)
            .args(["check", "a;b <= b;a", "--max-size", "2", "--deterministic"])
            .output()
            .unwrap();
        (o.status.code(), o.stdout)
    };
    let one = run("1");
    assert_eq!(one.0, Some(1));
    assert_eq!(one, run("4"));
}

#[test]
fn catalog_runs_and_is_stable() {
    let a = relcalc(&["catalog", "--deterministic"]);
    assert_eq!(code(&a), 0);
    let b = relcalc(&["catalog", "--deterministic"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text
        .lines()
        .any(|l| l.starts_with("D59 ") && l.contains("match")));
    let m = stdout(&relcalc(&["--machine", "catalog"]));
    let reform = m.lines().find(|l| l.starts_with("REFORM\t")).unwrap();
    let fields: Vec<&str> = reform.split('\t').collect();
    assert_eq!(
        fields[..4],
        ["REFORM", "counterexample", "invalid", "match"]
    );
}

#[test]
fn chain_command() {
    let dir = TempDir::new().unwrap();
    let rels = write(&dir, "r.rel", SUCCESSOR);
    let o = relcalc(&["chain", &rels, "a", "b"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("chain:      (0,0) (1,0) (2,0)"));
    assert!(text.contains("stabilized: 2"));
    let m = stdout(&relcalc(&["--machine", "chain", &rels, "a", "b"]));
    assert_eq!(
        m,
        "chain\t(0,0) (1,0) (2,0)\niterate\t(1,0) (2,0)\nstabilized\t2\n"
    );
    assert_eq!(code(&relcalc(&["chain", &rels, "a", "z"])), 2);
}

#[test]
fn strict_command() {
    let o = relcalc(&["strict", "a;(bc)", "a;b * a;c"]);
    assert_eq!(code(&o), 0);
    let file = RelationFile::parse(&stdout(&o)).unwrap();
    assert_eq!(file.universe, 2);
    // no proper inclusion when both sides agree
    assert_eq!(code(&relcalc(&["strict", "a", "a"])), 1);
    // not an inclusion at all
    assert_eq!(code(&relcalc(&["strict", "a", "b"])), 1);
}

#[test]
fn prove_bundled_and_files() {
    let o = relcalc(&["prove", "--bundled", "--audit-size", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("goal reached: a_0;b <= c"));
    assert!(!text.contains("FAIL") && !text.contains("VIOLATED"));

    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.proof", bundled_chain_induction_text());
    assert_eq!(code(&relcalc(&["prove", &good])), 0);

    // the trans premises do not chain
    let broken = write(
        &dir,
        "broken.proof",
        "hyp a <= b\nstep hyp [] a <= b\nstep mono [1] c;a <= c;b\nstep trans [1 2] a <= c;b\ngoal a <= c;b\n",
    );
    let o = relcalc(&["prove", &broken]);
    assert_eq!(code(&o), 1);
    let o = relcalc(&["--machine", "prove", &broken]);
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("step\t3\ttrans\tFAIL")));

    let bad = write(&dir, "bad.proof", "hyp a <=\ngoal a <= a\n");
    assert_eq!(code(&relcalc(&["prove", &bad])), 2);
    assert_eq!(code(&relcalc(&["prove", "/nonexistent.proof"])), 2);
}

#[test]
fn render_styles() {
    let o = relcalc(&["render", "a;(b + c) <= a;b + a;c", "--style", "unicode"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "a;(b + c) ⊆ a;b + a;c\n");
    let o = relcalc(&["render", "a;(b+c)"]);
    assert_eq!(stdout(&o), "a;(b + c)\n");
    let o = relcalc(&["render", "D37", "--style", "settheory"]);
    assert!(!stdout(&o).trim().is_empty());
    assert_eq!(code(&relcalc(&["render", "a;;b"])), 2);
}
