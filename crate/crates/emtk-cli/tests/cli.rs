//! End-to-end runs of the `emtk` binary: exit codes, report shape, and the
//! CSV contract, all through real process invocations.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn emtk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emtk"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated normally")
}

fn generate(args: &[&str], name: &str) -> PathBuf {
    let path = tmp(name);
    let mut full: Vec<&str> = vec!["generate"];
    full.extend_from_slice(args);
    let path_str = path.to_str().unwrap().to_string();
    full.extend_from_slice(&["--out", &path_str]);
    let out = emtk(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn landscape_of_the_counterexample_fixture() {
    let file = generate(&["--class", "karzanov_counterexample"], "ce_landscape.em");
    let out = emtk(&["landscape", "--instance", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0 1 3 4\n");
}

#[test]
fn landscape_truncation_is_inconclusive() {
    let file = generate(&["--class", "karzanov_counterexample"], "ce_truncated.em");
    let out = emtk(&["landscape", "--instance", file.to_str().unwrap(), "--limit", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solve_exposes_the_pipeline_defeat_on_the_counterexample() {
    let file = generate(&["--class", "karzanov_counterexample"], "ce_solve.em");
    let path = file.to_str().unwrap();
    // Auto falls back to the oracle for this class tag: definitive answers.
    let yes = emtk(&["solve", "--instance", path, "--k", "3"]);
    assert_eq!(code(&yes), 0, "{}", stdout(&yes));
    assert!(stdout(&yes).contains("verdict: yes"));
    assert!(stdout(&yes).contains("strategy: oracle"));
    let no = emtk(&["solve", "--instance", path, "--k", "2"]);
    assert_eq!(code(&no), 1);
    assert!(stdout(&no).contains("verdict: no"));
    // Forcing the rank-reduction pipeline hits its soundness boundary: the
    // one-sided queries pass but no certificate with 2 red edges exists.
    let forced = emtk(&["solve", "--instance", path, "--k", "2", "--strategy", "karzanov"]);
    assert_eq!(code(&forced), 2, "{}", stdout(&forced));
    assert!(stdout(&forced).contains("verdict: inconclusive"));
}

#[test]
fn generated_files_embed_the_target() {
    let file = generate(&["--class", "karzanov_counterexample", "--k", "3"], "ce_embedded.em");
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.lines().any(|l| l == "k 3"), "{text}");
    let out = emtk(&["solve", "--instance", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn chain_pshort_counterexample_violates_pshort() {
    let file = generate(
        &["--class", "chain_pshort_counterexample", "--pairs", "5"],
        "pshort_ce.em",
    );
    let out = emtk(&[
        "verify",
        "--property",
        "pshort",
        "--t",
        "5",
        "--instance",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    assert!(stdout(&out).contains("violated"));
}

#[test]
fn unit_interval_instances_carry_both_properties() {
    let file = generate(&["--class", "unit_interval", "--n", "8", "--seed", "3"], "ui.em");
    let path = file.to_str().unwrap();
    let chord = emtk(&["verify", "--property", "chord", "--instance", path]);
    assert_eq!(code(&chord), 0, "{}", stdout(&chord));
    assert!(stdout(&chord).contains("chord: holds"));
    let sandwich = emtk(&["verify", "--property", "karzanov", "--instance", path]);
    assert_eq!(code(&sandwich), 0, "{}", stdout(&sandwich));
}

#[test]
fn counterexample_fails_strong_but_not_weak_verification() {
    let file = generate(&["--class", "karzanov_counterexample"], "ce_verify.em");
    let path = file.to_str().unwrap();
    let strong = emtk(&["verify", "--property", "karzanov", "--instance", path]);
    assert_eq!(code(&strong), 1, "{}", stdout(&strong));
    assert!(stdout(&strong).contains("no perfect matching with 2 red edges"));
    let weak = emtk(&["verify", "--property", "weak-karzanov", "--instance", path]);
    assert_eq!(code(&weak), 0, "{}", stdout(&weak));
}

#[test]
fn all_blue_chain_solves_through_the_karzanov_pipeline() {
    let file = generate(&["--class", "chain", "--profile", "1,2,3"], "chain.em");
    let path = file.to_str().unwrap();
    let yes = emtk(&["solve", "--instance", path, "--k", "0"]);
    assert_eq!(code(&yes), 0, "{}", stdout(&yes));
    assert!(stdout(&yes).contains("strategy: karzanov"));
    assert!(stdout(&yes).contains("(red 0)"));
    let no = emtk(&["solve", "--instance", path, "--k", "1"]);
    assert_eq!(code(&no), 1);
    // Above n/2 the answer is no before any search.
    let over = emtk(&["solve", "--instance", path, "--k", "9"]);
    assert_eq!(code(&over), 1);
}

#[test]
fn local_verdicts_match_the_oracle_when_definitive() {
    let file = generate(
        &[
            "--class",
            "gnp",
            "--n",
            "8",
            "--p",
            "2/3",
            "--seed",
            "1",
            "--coloring",
            "bernoulli=1/2",
        ],
        "gnp_local.em",
    );
    let path = file.to_str().unwrap();
    for k in 0..=4 {
        let k = k.to_string();
        let local = emtk(&["solve", "--instance", path, "--k", &k, "--strategy", "local"]);
        let oracle = emtk(&["solve", "--instance", path, "--k", &k, "--strategy", "oracle"]);
        assert!([0, 1].contains(&code(&oracle)));
        if code(&local) != 2 {
            assert_eq!(code(&local), code(&oracle), "k = {k}: {}", stdout(&local));
        }
    }
}

#[test]
fn parse_and_parameter_errors_exit_three() {
    let bad = tmp("garbage.em");
    std::fs::write(&bad, "n 4\nedge 0 1 r\n").unwrap();
    let out = emtk(&["solve", "--instance", bad.to_str().unwrap(), "--k", "1"]);
    assert_eq!(code(&out), 3);
    let unknown_class = emtk(&["generate", "--class", "bogus"]);
    assert_eq!(code(&unknown_class), 3);
    let unknown_property = emtk(&["verify", "--property", "bogus", "--instance", "x"]);
    assert_eq!(code(&unknown_property), 3);
    let missing_param = emtk(&["generate", "--class", "chain"]);
    assert_eq!(code(&missing_param), 3);
    let precolored = emtk(&[
        "generate",
        "--class",
        "karzanov_counterexample",
        "--coloring",
        "exact=2",
    ]);
    assert_eq!(code(&precolored), 3);
    let not_a_family = emtk(&[
        "bench",
        "--classes",
        "karzanov_counterexample",
        "--n-values",
        "8",
        "--radii",
        "2",
        "--out",
        tmp("reject.csv").to_str().unwrap(),
    ]);
    assert_eq!(code(&not_a_family), 3);
}

fn strip_seconds(text: &str) -> String {
    text.lines()
        .map(|l| l.rsplit_once(',').expect("csv row").0)
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn bench_rows_are_sorted_reproducible_and_oracle_consistent() {
    let args = |out: &str, mode: &str| {
        vec![
            "bench".to_string(),
            "--classes".into(),
            "gnp,chain".into(),
            "--n-values".into(),
            "6,8".into(),
            "--radii".into(),
            "2,3".into(),
            "--trials".into(),
            "2".into(),
            "--seed".into(),
            "9".into(),
            "--mode".into(),
            mode.into(),
            "--out".into(),
            out.into(),
        ]
    };
    let (a, b, c) = (tmp("bench_a.csv"), tmp("bench_b.csv"), tmp("bench_c.csv"));
    for (path, mode) in [(&a, "parallel"), (&b, "parallel"), (&c, "sequential")] {
        let argv = args(path.to_str().unwrap(), mode);
        let argv: Vec<&str> = argv.iter().map(|s| s.as_str()).collect();
        let out = emtk(&argv);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial_id,n,p,class,k,strategy,radius,verdict,oracle_verdict,iterations,seconds"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 2 * 2 * 2);
    for (i, row) in rows.iter().enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], i.to_string(), "rows sorted by trial_id");
        assert_eq!(fields[5], "local");
        // Definitive local verdicts must agree with the oracle column.
        if fields[7] != "inconclusive" {
            assert_eq!(fields[7], fields[8], "row {i}: {row}");
        }
    }
    // Identical up to wall-clock times, in either execution mode.
    let again = std::fs::read_to_string(&b).unwrap();
    let sequential = std::fs::read_to_string(&c).unwrap();
    assert_eq!(strip_seconds(&text), strip_seconds(&again));
    assert_eq!(strip_seconds(&text), strip_seconds(&sequential));
}
