use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_chiral-edge"));
    c.env_remove("CHIRAL_EDGE_OUTPUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(2).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

#[test]
fn sample_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let base = ["sample", "--n", "4", "--nu", "1", "--tau", "0.5", "--seed", "7", "--trials", "3"];
    let o = bin().args(base).args(["--threads", "1", "--output"]).arg(&a).output().unwrap();
    assert!(o.status.success());
    let o = bin().args(base).args(["--threads", "2", "--output"]).arg(&b).output().unwrap();
    assert!(o.status.success());
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn header_reproduces_the_file() {
    let first = stdout(&run(&["sample", "--n", "3", "--tau", "0.3", "--seed", "11"]));
    let header: Value = serde_json::from_str(first.lines().next().unwrap().trim_start_matches('#').trim()).unwrap();
    assert_eq!(header["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(header["command"], "sample");
    let cfg = &header["config"];
    let n = cfg["ensemble"]["n"].to_string();
    let tau = cfg["ensemble"]["tau"].to_string();
    let seed = header["seed"].to_string();
    let again = stdout(&run(&["sample", "--n", &n, "--tau", &tau, "--seed", &seed]));
    assert_eq!(first, again);
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("CHIRAL_EDGE_OUTPUT_DIR", dir.path())
        .args(["sample", "--n", "2", "--tau", "0.5", "--output", "s.json", "--format", "json"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&std::fs::read(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(v["columns"], serde_json::json!(["trial", "re", "im"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn fredholm_table_is_monotone() {
    let o = run(&["fredholm", "--sigma", "0", "--t", "-3:1:0.5", "--m-xi", "24", "--m-eta", "12"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0][0], -3.0);
    assert_eq!(rows[8][0], 1.0);
    for r in &rows {
        assert!((0.0..=1.0).contains(&r[1]));
    }
    for w in rows.windows(2) {
        assert!(w[1][1] >= w[0][1]);
    }
}

#[test]
fn verify_orthogonality_reports_json() {
    let o = run(&["verify", "--suite", "orthogonality", "--nu-max", "3", "--jk-max", "8", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["header"]["pass"], true);
    let checks = v["header"]["reports"][0]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    for c in checks {
        assert!(c["value"].as_f64().unwrap() <= 1e-6);
    }
}

#[test]
fn kernel_forms_agree_on_a_small_grid() {
    let common = ["--sigma", "0.5", "--xi", "-1:1:1", "--eta", "-0.5:0.5:0.5", "--xi2", "0.2", "--eta2", "0.1"];
    let real = run(&[&["kernel", "--kind", "interp"][..], &common].concat());
    let contour = run(&[&["kernel", "--kind", "contour"][..], &common].concat());
    assert!(real.status.success() && contour.status.success());
    let (a, b) = (csv_rows(&stdout(&real)), csv_rows(&stdout(&contour)));
    assert_eq!(a.len(), 9);
    for (x, y) in a.iter().zip(&b) {
        assert!((x[2] - y[2]).abs() < 1e-8, "{x:?} {y:?}");
    }
}

#[test]
fn density_mode_emits_erfc_columns() {
    let o = run(&["density", "--n", "50", "--tau", "0.5", "--xi", "-1:1:1"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[1] > 0.0 && r[2] > 0.0));
}

#[test]
fn mc_poisson_runs() {
    let o =
        run(&["mc", "--n", "30", "--tau", "0.2", "--regime", "gumbel", "--experiment", "poisson", "--trials", "20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][..4], &[0.0, 1.0, -1.0, 1.0]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    let o = run(&["sample", "--n", "4", "--tau", "0.5", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(run(&["sample", "--n", "0", "--tau", "0.5"]).status.code(), Some(1));
    assert_eq!(run(&["sample", "--n", "3", "--tau", "1.5"]).status.code(), Some(1));
    assert_eq!(run(&["fredholm", "--sigma", "0", "--t", "1:0:0.5"]).status.code(), Some(1));
    assert_eq!(run(&["kernel", "--kind", "finite", "--tau", "0.5"]).status.code(), Some(1));
    // a mesh this coarse cannot hold monotonicity
    let o = run(&["fredholm", "--sigma", "3", "--t", "-6:-5:0.25", "--m-xi", "4", "--m-eta", "4", "--l", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn grid_endpoint_within_half_step() {
    let o = run(&["fredholm", "--sigma", "0", "--t", "0:0.29:0.1", "--m-xi", "16", "--m-eta", "8"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 4);
}
