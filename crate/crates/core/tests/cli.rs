mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::planted_instance;
use curveset::coreset::WeightedCoreset;
use curveset::io::{load_coreset, save_coreset, save_dataset};
use curveset::metrics::MetricKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn curveset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curveset")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn planted_file(dir: &Path, metric: MetricKind, n: usize) -> std::path::PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let inst = planted_instance(&mut rng, metric, n, 2, 4);
    let ids: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let file = dir.join("data.jsonl");
    save_dataset(&file, &ids, &inst).unwrap();
    file
}

#[test]
fn lower_bound_distances_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("lb.jsonl");
    let o = curveset(&["gen-lowerbound", "--n", "5", "--metric", "discrete-frechet", "--output", path(&data)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "wrote 6 objects");
    let d = path(&data);
    let pair = curveset(&["dist", "--metric", "discrete-frechet", "--a", d, "--b", d, "--a-id", "tau_1", "--b-id", "tau_2"]);
    assert_eq!(stdout(&pair).trim(), "2");
    let center = curveset(&["dist", "--metric", "frechet", "--a", d, "--b", d, "--a-id", "tau_r", "--b-id", "tau_3"]);
    assert_eq!(stdout(&center).trim(), "1");
}

#[test]
fn build_writes_requested_number_of_entries() {
    let dir = tempfile::tempdir().unwrap();
    let data = planted_file(dir.path(), MetricKind::DiscreteFrechet, 60);
    let out = dir.path().join("cs.jsonl");
    let o = curveset(&[
        "build", "--input", path(&data), "--metric", "discrete-frechet", "--k", "2", "--l", "4", "--eps", "0.3",
        "--size", "100", "--seed", "9", "--output", path(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("a=100 "));
    let (cs, ids) = load_coreset(&out).unwrap();
    assert_eq!(cs.len(), 100);
    assert!(ids.iter().all(|id| id.starts_with('p')));
    assert!(std::fs::read_to_string(&out).unwrap().lines().next().unwrap().contains("created_unix"));
}

#[test]
fn certify_accepts_identity_coreset() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let inst = planted_instance(&mut rng, MetricKind::Hausdorff, 40, 2, 3);
    let ids: Vec<String> = (0..inst.len()).map(|i| format!("s{i}")).collect();
    let data = dir.path().join("data.jsonl");
    save_dataset(&data, &ids, &inst).unwrap();
    let cs_path = dir.path().join("identity.jsonl");
    save_coreset(&cs_path, &WeightedCoreset::identity(&inst, 0.1), &ids, false).unwrap();
    let report = dir.path().join("report.json");
    let o = curveset(&[
        "certify", "--input", path(&data), "--coreset", path(&cs_path), "--candidates", "9", "--seed", "1",
        "--report", path(&report),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("pass=true"));
    let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(parsed["max_error"].as_f64().unwrap() < 1e-12);
    assert_eq!(parsed["candidates"].as_array().unwrap().len(), 9);
}

#[test]
fn trial_reports_failure_rate() {
    let dir = tempfile::tempdir().unwrap();
    let data = planted_file(dir.path(), MetricKind::ContinuousFrechet, 30);
    let o = curveset(&["trial", "--input", path(&data), "--k", "2", "--l", "3", "--eps", "0.5", "--trials", "20", "--seed", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("trials=20"));
}

#[test]
fn errors_are_single_lines_with_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.jsonl");
    let o = curveset(&["dist", "--metric", "hausdorff", "--a", path(&missing), "--b", path(&missing)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: io: "));

    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"id\":\"a\",\"kind\":\"curve\",\"points\":[[0,0]]}\nnot json\n").unwrap();
    let o = curveset(&["dist", "--metric", "frechet", "--a", path(&bad), "--b", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");

    let gen = dir.path().join("lb.jsonl");
    let o = curveset(&["gen-lowerbound", "--n", "1", "--metric", "hausdorff", "--output", path(&gen)]);
    assert_eq!(o.status.code(), Some(2));

    let o = curveset(&["dist", "--metric", "manhattan"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
}
