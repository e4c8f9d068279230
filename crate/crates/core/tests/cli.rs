use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use alphamod_core::covering::Covering;
use alphamod_core::report::{self, Envelope, Format, Report, VerifySummary, BOUND_CSV_HEADER};
use alphamod_core::spaces::{product_symbol_norm, NormParams};

fn alphamod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alphamod"))
        .args(args)
        .env_remove("ALPHAMOD_JOBS")
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report");
    let run = alphamod(&[
        "verify", "thm11", "--alpha", "0,0.5,1", "--dim", "1", "--grid", "128", "--trials", "10", "--seed", "42",
        "--out", path(&out),
    ]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some(BOUND_CSV_HEADER));
    assert_eq!(csv.lines().count(), 1 + 3 * 2 * 10);

    let text = fs::read_to_string(out.join("summary.json")).unwrap();
    let summary: VerifySummary = serde_json::from_str(&text).unwrap();
    assert!(summary.pass);
    assert_eq!(summary.alphas, vec![0.0, 0.5, 1.0]);
    assert_eq!(summary.checks.len(), 3);
    let again = report::render(&Report::Summary(&summary), Format::Json).unwrap();
    assert_eq!(again, text);
}

#[test]
fn covering_validate_prints_the_table() {
    let run = alphamod(&["covering", "validate", "--alpha", "0.5", "--dim", "1", "--grid", "256"]);
    assert_eq!(run.status.code(), Some(0));
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("partition_residual"));
    assert!(stdout.trim_end().ends_with("PASS"));
}

#[test]
fn norm_symbol_prints_the_total() {
    let dir = tempfile::tempdir().unwrap();
    let sigma_path = dir.path().join("sigma.json");
    let family = r#"{"family":"smooth-symbol","x_modes":3,"xi_modes":2,"xi_step":1.5707963267948966}"#;
    let run = alphamod(&["synth", "--family", family, "--grid", "64", "--seed", "5", "--out", path(&sigma_path)]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let run = alphamod(&["norm", "symbol", "--input", path(&sigma_path), "--alpha", "0", "--s1", "0", "--s2", "0"]);
    assert_eq!(run.status.code(), Some(0));
    let printed: f64 = String::from_utf8(run.stdout).unwrap().trim().parse().unwrap();

    let sigma = Envelope::read(&sigma_path).unwrap().into_symbol().unwrap();
    let cov = Covering::build(0.0, sigma.grid()).unwrap();
    let total = product_symbol_norm(&sigma, &NormParams::symbol(0.0, 0.0, 0.0), &cov).unwrap().total;
    assert_eq!(printed, total);
}

#[test]
fn operator_verbs_round_trip_envelopes() {
    let dir = tempfile::tempdir().unwrap();
    let d = |name: &str| dir.path().join(name);
    let ok = |args: &[&str]| {
        let run = alphamod(args);
        assert_eq!(run.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&run.stderr));
        run
    };
    ok(&["synth", "--family", r#"{"family":"multiplier-symbol","profile":{"profile":"constant","value":2.0}}"#, "--grid", "128", "--out", path(&d("s.json"))]);
    ok(&["synth", "--family", r#"{"family":"band-limited-random","band":2.0}"#, "--grid", "128", "--out", path(&d("f.json"))]);
    ok(&["synth", "--family", r#"{"family":"gaussian","width":1.5}"#, "--grid", "128", "--out", path(&d("a.json"))]);
    ok(&["op", "apply", "--symbol", path(&d("s.json")), "--input", path(&d("f.json")), "--out", path(&d("g.json"))]);
    let f = Envelope::read(d("f.json")).unwrap().into_function().unwrap();
    let g = Envelope::read(d("g.json")).unwrap().into_function().unwrap();
    assert!(g.max_abs_diff(&f.scaled(2.0.into())) <= 1e-12);
    ok(&["op", "commutator", "--symbol", path(&d("s.json")), "--multiplier", path(&d("a.json")), "--input", path(&d("f.json")), "--out", path(&d("c.json"))]);
    let c = Envelope::read(d("c.json")).unwrap().into_function().unwrap();
    assert!(c.max_abs() <= 1e-12);
    let run = ok(&["op", "norm-estimate", "--symbol", path(&d("s.json"))]);
    let first = String::from_utf8(run.stdout).unwrap();
    let norm: f64 = first.lines().next().unwrap().parse().unwrap();
    assert!((norm - 2.0).abs() <= 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(alphamod(&["bogus"]).status.code(), Some(1));
    assert_eq!(alphamod(&["verify", "thm11", "--grid", "48"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "grid = \"many\"\n").unwrap();
    assert_eq!(alphamod(&["--config", path(&bad), "verify", "thm11"]).status.code(), Some(1));

    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = blocker.join("sub");
    assert_eq!(alphamod(&["verify", "thm11", "--out", path(&out)]).status.code(), Some(1));

    // A zero refinement tolerance cannot be met, so the pass flag is false.
    let strict = dir.path().join("strict.toml");
    fs::write(&strict, "grid = 64\ntrials = 2\nfunctions = 1\nrefinement_tolerance = 0.0\n").unwrap();
    assert_eq!(
        alphamod(&["--config", path(&strict), "verify", "thm11", "--alpha", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "grid = 64\ntrials = 4\nfunctions = 1\nseed = 3\nalpha = [0.5]\n").unwrap();
    let out = dir.path().join("out");
    let run = alphamod(&["--config", path(&cfg), "verify", "thm11", "--trials", "2", "--out", path(&out)]);
    assert_eq!(run.status.code(), Some(0));
    let summary: VerifySummary = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!((summary.config.trials, summary.config.seed, summary.config.points_per_axis), (2, 3, 64));
    assert_eq!(summary.alphas, vec![0.5]);
}

#[test]
fn job_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str, name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_alphamod"))
            .args(["verify", "thm12", "--grid", "64", "--trials", "3", "--out", path(&out)])
            .env("ALPHAMOD_JOBS", jobs)
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        fs::read(out.join("report.csv")).unwrap()
    };
    assert_eq!(run("1", "one"), run("3", "three"));
}

#[test]
fn emitted_reports_are_byte_stable() {
    let cov = Covering::build(0.25, &alphamod_core::GridSpec::new(1, 128, 8.0 * std::f64::consts::PI).unwrap()).unwrap();
    let r = cov.validate();
    let dir = tempfile::tempdir().unwrap();
    for format in [Format::Csv, Format::Json] {
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        report::emit_report(&Report::Admissibility(&r), format, &a).unwrap();
        report::emit_report(&Report::Admissibility(&r), format, &b).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
    let json = report::render(&Report::Admissibility(&r), Format::Json).unwrap();
    let back: alphamod_core::AdmissibilityReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
}
