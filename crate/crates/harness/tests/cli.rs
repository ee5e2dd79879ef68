//! End-to-end checks of the `irsbc` binary: exit codes, file outputs and
//! byte-level determinism under a fixed seed.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_irsbc"))
}

fn write(path: &Path, body: &str) {
    std::fs::write(path, body).unwrap();
}

#[test]
fn sumrate_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(
        &cfg,
        "k_list = 4, 32\ntrials = 10\nschemes = rbf, dbf\nseed = 42\nthreads = 1\n",
    );
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let status = bin()
            .args(["sumrate", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(out_a.join("sumrate.csv")).unwrap();
    let b = std::fs::read(out_b.join("sumrate.csv")).unwrap();
    assert_eq!(a, b, "CSV bytes differ between identical runs");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("K,scheme,mean_rate_bpshz,stderr,theorem_bpshz\n"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    write(&cfg, "definitely_not_a_key = 3\n");
    let status = bin().args(["sumrate", "--config"]).arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(2));

    let cfg2 = dir.path().join("bad2.cfg");
    write(&cfg2, "n = 7\n"); // not a multiple of n1
    let status = bin().args(["sumrate", "--config"]).arg(&cfg2).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn guard_trips_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("guard.cfg");
    // 4^16 phase tuples blow the enumeration budget
    write(
        &cfg,
        "k_list = 4\ntrials = 1\nschemes = coherent(2)\nn1 = 8\nn = 16\n",
    );
    let status = bin()
        .args(["sumrate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn json_format_and_geometry_dump() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(&cfg, "k_list = 4\ntrials = 2\nschemes = dbf\n");
    let status = bin()
        .args(["sumrate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .args(["--format", "json"])
        .status()
        .unwrap();
    assert!(status.success());
    let body = std::fs::read_to_string(dir.path().join("sumrate.json")).unwrap();
    assert!(body.trim_start().starts_with('['));
    assert!(body.contains("\"scheme\": \"dbf\""));

    let status = bin()
        .arg("geometry-dump")
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let pos = std::fs::read_to_string(dir.path().join("positions.csv")).unwrap();
    // header + 2 BS antennas + 16 IRS elements
    assert_eq!(pos.lines().count(), 1 + 2 + 16);
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(&cfg, "k_list = 8\ntrials = 5\nschemes = rbf\nseed = 1\n");
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    bin().args(["sumrate", "--config"]).arg(&cfg).arg("--out").arg(&out_a).status().unwrap();
    bin()
        .args(["sumrate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_b)
        .args(["--seed", "2"])
        .status()
        .unwrap();
    let a = std::fs::read(out_a.join("sumrate.csv")).unwrap();
    let b = std::fs::read(out_b.join("sumrate.csv")).unwrap();
    assert_ne!(a, b);
}
