use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/small.toml")
}

fn szne(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_szne"))
        .arg("--config")
        .arg(config())
        .arg("--out")
        .arg(out)
        .args(args)
        .env("RUST_LOG", "warn")
        .env_remove("SZNE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(out: &Path, args: &[&str]) {
    let o = szne(out, args);
    assert!(
        o.status.success(),
        "szne {args:?} failed:\n{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn pipeline(dir: &Path, seed: &str) {
    ok(dir, &["--seed", seed, "collect"]);
    ok(dir, &["--seed", seed, "train"]);
    ok(dir, &["--seed", seed, "zne"]);
    ok(dir, &["--seed", seed, "szne"]);
    ok(dir, &["--seed", seed, "hybrid", "--surrogates", "surrogates.jsonl"]);
}

#[test]
fn collect_train_infer_report() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    pipeline(dir, "7");

    // 3 levels x 200 inputs x 1000 shots
    assert_eq!(json(&dir.join("ledger_collect.json"))["training"], 600_000);
    assert_eq!(fs::read_to_string(dir.join("datasets.jsonl")).unwrap().lines().count(), 600);
    assert_eq!(fs::read_to_string(dir.join("surrogates.jsonl")).unwrap().lines().count(), 3);
    // 16 inputs x 3 levels x 4000 shots
    assert_eq!(json(&dir.join("ledger_zne.json"))["total"], 192_000);
    assert_eq!(json(&dir.join("ledger_szne.json"))["total"], 0);
    let sel = json(&dir.join("selection.json"));
    assert_eq!(sel["mse"].as_array().unwrap().len(), 3);

    let zne = fs::read_to_string(dir.join("zne.csv")).unwrap();
    assert!(zne.starts_with("x,z1,tag1,z2,tag2,z3,tag3,estimate,ideal,residual,cost"));
    assert_eq!(zne.lines().count(), 17);

    ok(dir, &["report", "--runs", "szne.csv"]);
    let rep = json(&dir.join("szne_report.json"));
    assert_eq!(rep["count"], 16);
    assert!(rep["mse"].as_f64().unwrap() < 0.01);
    let kde = fs::read_to_string(dir.join("szne_kde.csv")).unwrap();
    assert_eq!(kde.lines().count(), 257);
}

#[test]
fn runs_are_bit_reproducible() {
    let (a, b, c) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    pipeline(a.path(), "11");
    pipeline(b.path(), "11");
    pipeline(c.path(), "12");
    for f in ["datasets.jsonl", "surrogates.jsonl", "zne.csv", "szne.csv", "hybrid.csv", "selection.json"] {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{f} differs between identical runs");
    }
    assert_ne!(
        fs::read(a.path().join("datasets.jsonl")).unwrap(),
        fs::read(c.path().join("datasets.jsonl")).unwrap()
    );
}

#[test]
fn studies_write_their_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    ok(dir, &["metrology", "--data-efficiency"]);
    let m = json(&dir.join("metrology_summary.json"));
    assert_eq!(m["zne"]["ledger"]["total"], 50 * 5 * 20_000);
    assert_eq!(fs::read_to_string(dir.join("metrology.csv")).unwrap().lines().count(), 51);
    assert_eq!(fs::read_to_string(dir.join("data_efficiency.csv")).unwrap().lines().count(), 1 + 2 * 5);

    ok(dir, &["vqa", "--estimator", "szne"]);
    let v = json(&dir.join("vqa_summary.json"));
    assert_eq!(v["ledger"]["inference"], 0);
    assert_eq!(v["ledger"]["training"], 5 * 30 * 10_000);
    assert_eq!(fs::read_to_string(dir.join("vqa_trajectory.csv")).unwrap().lines().count(), 21);

    ok(dir, &["hybrid"]);
    let h = json(&dir.join("hybrid_summary.json"));
    assert_eq!(h["conventional_ledger"]["total"], 10 * 5 * 2000);
    assert!(dir.join("hybrid_conventional.csv").exists());
}

#[test]
fn report_needs_ideal_reference() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("bare.csv"), "x,z1,tag1,estimate,ideal,residual,cost\n0.1,0.5,measured,0.5,,,10\n").unwrap();
    let o = szne(dir, &["report", "--runs", "bare.csv"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("ideal reference"));
}

#[test]
fn bad_config_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "[pipeline]\nlevels = \"five\"\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_szne"))
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .arg("zne")
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("parsing"));
}
