//! End-to-end tests of the `thurston` binary: report contents, the stable
//! exit-code contract, manifest pairing, and bit-exact replay.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use sha2::{Digest, Sha256};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thurston"))
}

/// Fresh scratch directory, unique per test name and process.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("thurston-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

/// Runs the binary; returns (exit code, stdout, stderr).
fn run(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = bin();
    cmd.current_dir(dir).args(args);
    for (key, value) in envs {
        cmd.env(key, value);
    }
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn run_json(dir: &Path, args: &[&str]) -> Value {
    let (code, stdout, stderr) = run(dir, args, &[]);
    assert_eq!(code, 0, "command {args:?} failed: {stderr}");
    serde_json::from_str(&stdout).unwrap()
}

fn sha256_of(path: &Path) -> String {
    hex::encode(Sha256::digest(fs::read(path).unwrap()))
}

const DATA_MU4: &str = r#"{ "N": [[2]] }"#;
const DATA_MU1: &str = r#"{ "N": [[1]] }"#;
const DATA_MU9: &str = r#"{ "N": [[3]] }"#;
const MEASURE_UNIFORM: &str = r#"{ "atoms": [
    { "word": "a", "prob": 0.25 },
    { "word": "A", "prob": 0.25 },
    { "word": "b", "prob": 0.25 },
    { "word": "B", "prob": 0.25 }
] }"#;

#[test]
fn construct_reports_mu_and_freeness() {
    let dir = scratch("construct");
    write(&dir, "mu4.json", DATA_MU4);
    write(&dir, "mu1.json", DATA_MU1);

    let report = run_json(&dir, &["construct", "--data", "mu4.json"]);
    assert_eq!(report["mu"], 4.0);
    assert_eq!(report["mu_is_four"], true);
    assert_eq!(report["primitive"], true);
    assert_eq!(report["leininger_free"], true);
    assert_eq!(report["dynkin_type"], "not_in_family");
    let k = report["K"].as_f64().unwrap();
    assert!((k - 0.881_373_587_019_543).abs() < 1e-12, "K(4) = {k}");

    // A single intersection of multiplicity 1 is the A2 path: in-family,
    // so the twist group is not free, and μ = 1 < 4 has no K constant.
    let report = run_json(&dir, &["construct", "--data", "mu1.json"]);
    assert_eq!(report["mu"], 1.0);
    assert_eq!(report["mu_is_four"], false);
    assert_eq!(report["leininger_free"], false);
    assert_eq!(report["dynkin_type"], "A2");
    assert_eq!(report["K"], Value::Null);
}

#[test]
fn classify_reports_bounds_for_pseudo_anosov() {
    let dir = scratch("classify");
    write(&dir, "mu4.json", DATA_MU4);

    let report = run_json(&dir, &["classify", "--data", "mu4.json", "--word", "aB"]);
    assert_eq!(report["class"], "pseudo_anosov");
    assert_eq!(report["matrix_class"], "hyperbolic");
    let log_lambda = report["log_lambda"].as_f64().unwrap();
    // log λ(T_A T_B^{-1}) at μ = 4 is 2·log(1+√2).
    assert!((log_lambda - 2.0 * (1.0 + 2.0_f64.sqrt()).ln()).abs() < 1e-12);
    assert_eq!(report["bounds"]["pass_lower"], true);
    assert_eq!(report["bounds"]["pass_upper"], true);
    assert!(report["displacement"].as_f64().unwrap() >= log_lambda - 1e-9);

    // A conjugate of a twist power: reducible, no stretch factor.
    let report = run_json(&dir, &["classify", "--data", "mu4.json", "--word", "baaB"]);
    assert_eq!(report["class"], "conj_a");
    assert_eq!(report["matrix_class"], "parabolic");
    assert_eq!(report["log_lambda"], Value::Null);
    assert_eq!(report["bounds"], Value::Null);
}

#[test]
fn exit_codes_are_stable() {
    let dir = scratch("exit-codes");
    write(&dir, "mu4.json", DATA_MU4);
    write(&dir, "bad.json", "not json");
    write(&dir, "imprimitive.json", r#"{ "N": [[0, 1], [1, 0]] }"#);
    write(
        &dir,
        "badmeasure.json",
        r#"{ "atoms": [ { "word": "a", "prob": 0.7 }, { "word": "b", "prob": 0.6 } ] }"#,
    );
    write(&dir, "measure.json", MEASURE_UNIFORM);

    // 0: success.
    let (code, _, _) = run(&dir, &["construct", "--data", "mu4.json"], &[]);
    assert_eq!(code, 0);
    // 2: malformed input file.
    let (code, _, _) = run(&dir, &["construct", "--data", "bad.json"], &[]);
    assert_eq!(code, 2);
    // 2: missing input file.
    let (code, _, _) = run(&dir, &["construct", "--data", "missing.json"], &[]);
    assert_eq!(code, 2);
    // 2: word with letters outside {a, b, A, B}.
    let (code, _, _) = run(
        &dir,
        &["classify", "--data", "mu4.json", "--word", "xy"],
        &[],
    );
    assert_eq!(code, 2);
    // 3: non-primitive Gram matrix.
    let (code, _, _) = run(&dir, &["construct", "--data", "imprimitive.json"], &[]);
    assert_eq!(code, 3);
    // 3: salem window of a non-pseudo-Anosov word.
    let (code, _, _) = run(
        &dir,
        &[
            "salem",
            "--data",
            "mu4.json",
            "--word",
            "aA",
            "--salem-log",
            "0.5",
        ],
        &[],
    );
    assert_eq!(code, 3);
    // 2: nonpositive salem log.
    let (code, _, _) = run(
        &dir,
        &[
            "salem",
            "--data",
            "mu4.json",
            "--word",
            "aB",
            "--salem-log",
            "-1.0",
        ],
        &[],
    );
    assert_eq!(code, 2);
    // 4: atom probabilities that do not sum to 1.
    let (code, _, _) = run(
        &dir,
        &[
            "walk",
            "--data",
            "mu4.json",
            "--measure",
            "badmeasure.json",
            "--steps",
            "10",
            "--trajectories",
            "2",
            "--seed",
            "1",
            "--out",
            "w.csv",
        ],
        &[],
    );
    assert_eq!(code, 4);
    // 2: volume bound needs genus >= 2.
    let (code, _, _) = run(
        &dir,
        &[
            "walk",
            "--data",
            "mu4.json",
            "--measure",
            "measure.json",
            "--steps",
            "10",
            "--trajectories",
            "2",
            "--seed",
            "1",
            "--genus",
            "1",
            "--out",
            "w.csv",
        ],
        &[],
    );
    assert_eq!(code, 2);
    // 2: clap usage error (unknown flag).
    let (code, _, _) = run(&dir, &["construct", "--nonsense"], &[]);
    assert_eq!(code, 2);
}

const WALK_ARGS: &[&str] = &[
    "walk",
    "--data",
    "mu4.json",
    "--measure",
    "measure.json",
    "--steps",
    "600",
    "--trajectories",
    "6",
    "--seed",
    "2024",
    "--stride",
    "200",
    "--out",
    "walk.csv",
];

#[test]
fn walk_replay_is_bit_exact_across_reruns_and_thread_counts() {
    let dir_a = scratch("walk-replay-a");
    let dir_b = scratch("walk-replay-b");
    for dir in [&dir_a, &dir_b] {
        write(dir, "mu4.json", DATA_MU4);
        write(dir, "measure.json", MEASURE_UNIFORM);
    }

    let (code, stdout_a, _) = run(&dir_a, WALK_ARGS, &[("THURSTON_THREADS", "1")]);
    assert_eq!(code, 0);
    let mut args_b: Vec<&str> = WALK_ARGS.to_vec();
    args_b.extend(["--threads", "4"]);
    let (code, stdout_b, _) = run(&dir_b, &args_b, &[]);
    assert_eq!(code, 0);

    // Identical CSV bytes and identical reports regardless of threading.
    assert_eq!(
        fs::read(dir_a.join("walk.csv")).unwrap(),
        fs::read(dir_b.join("walk.csv")).unwrap()
    );
    assert_eq!(stdout_a, stdout_b);

    // The manifest records the digest of the file it sits next to.
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir_a.join("walk.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["subcommand"], "walk");
    assert_eq!(manifest["seed"], 2024);
    assert_eq!(
        manifest["outputs"][0]["sha256"].as_str().unwrap(),
        sha256_of(&dir_a.join("walk.csv"))
    );

    // Replaying the manifest parameters reproduces the digest bit-exactly.
    let (code, _, _) = run(&dir_a, WALK_ARGS, &[]);
    assert_eq!(code, 0);
    assert_eq!(
        manifest["outputs"][0]["sha256"].as_str().unwrap(),
        sha256_of(&dir_a.join("walk.csv"))
    );
}

#[test]
fn drift_and_spectral_agree_with_the_walk_report() {
    let dir = scratch("aggregate");
    write(&dir, "mu4.json", DATA_MU4);
    write(&dir, "measure.json", MEASURE_UNIFORM);

    let (code, walk_stdout, _) = run(&dir, WALK_ARGS, &[]);
    assert_eq!(code, 0);
    let walk_report: Value = serde_json::from_str(&walk_stdout).unwrap();

    // Aggregating the CSV reproduces the inline aggregates bit-for-bit.
    let drift = run_json(&dir, &["drift", "--input", "walk.csv"]);
    assert_eq!(drift["drift"], walk_report["drift"]);
    assert_eq!(drift["fk"], walk_report["fk"]);

    let spectral = run_json(&dir, &["spectral", "--input", "walk.csv"]);
    assert_eq!(spectral["drift"], walk_report["drift"]);
    assert_eq!(spectral["spectral"], walk_report["spectral"]);
    assert_eq!(spectral["last_non_pa"], walk_report["last_non_pa"]);

    // Inline mode works too and matches (same seed, same streams).
    let inline = run_json(
        &dir,
        &[
            "drift",
            "--data",
            "mu4.json",
            "--measure",
            "measure.json",
            "--steps",
            "600",
            "--trajectories",
            "6",
            "--seed",
            "2024",
            "--stride",
            "200",
        ],
    );
    assert_eq!(inline["drift"], walk_report["drift"]);

    // Neither an --input nor full inline parameters: input error.
    let (code, _, _) = run(&dir, &["drift", "--steps", "10"], &[]);
    assert_eq!(code, 2);
}

#[test]
fn model_report_has_exact_fields() {
    let dir = scratch("model");
    let report = run_json(&dir, &["model", "--n", "1", "--m", "1", "--k", "4"]);
    assert_eq!(report["exact_bound"].as_f64().unwrap(), 0.125);
    assert_eq!(report["bad_event_prob_exact"].as_f64().unwrap(), 7.0 / 64.0);
    assert_eq!(report["exact_prob"].as_f64().unwrap(), 7.0 / 64.0);
    assert_eq!(report["exact_prob_fraction"], "7/64");
    assert_eq!(report["mc_estimate"], Value::Null);

    // --trials without --seed is rejected: randomized runs need a seed.
    let (code, _, _) = run(
        &dir,
        &["model", "--n", "1", "--m", "1", "--k", "4", "--trials", "100"],
        &[],
    );
    assert_eq!(code, 2);

    // k = 1 violates the parameter domain.
    let (code, _, _) = run(&dir, &["model", "--n", "1", "--m", "1", "--k", "1"], &[]);
    assert_eq!(code, 2);
}

#[test]
fn salem_window_contains_one_when_matched_to_the_element() {
    let dir = scratch("salem");
    write(&dir, "mu4.json", DATA_MU4);
    // log λ_s set to log λ(aB) itself: the window must contain k = 1.
    let report = run_json(
        &dir,
        &[
            "salem",
            "--data",
            "mu4.json",
            "--word",
            "aB",
            "--salem-log",
            "1.7627471740390859",
        ],
    );
    let k_min = report["k_min"].as_f64().unwrap();
    let k_max = report["k_max"].as_f64().unwrap();
    assert!(k_min <= 1.0 && 1.0 <= k_max + 1e-9, "window [{k_min}, {k_max}]");
    let estimated = report["estimated_k"].as_f64().unwrap();
    assert!((estimated - 1.0).abs() < 1e-9);
}

#[test]
fn audit_csv_rows_match_the_summary() {
    let dir = scratch("audit");
    write(&dir, "mu9.json", DATA_MU9);
    let (code, stdout, _) = run(
        &dir,
        &[
            "audit",
            "--data",
            "mu9.json",
            "--count",
            "300",
            "--max-norm",
            "50",
            "--seed",
            "7",
            "--out",
            "audit.csv",
        ],
        &[],
    );
    assert_eq!(code, 0);
    let summary: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(summary["violations"], 0);
    let audited = summary["audited"].as_u64().unwrap();
    assert!(audited > 200);

    let csv_text = fs::read_to_string(dir.join("audit.csv")).unwrap();
    let mut lines = csv_text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "word,cyclic_norm,log_lambda,lower,upper,pass_lower,pass_upper"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len() as u64, audited);
    for row in rows {
        assert!(row.ends_with(",true,true"), "bound violation row: {row}");
    }
    assert!(dir.join("audit.csv.manifest.json").exists());
}
