//! End-to-end pipeline tests through the compiled binary.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ringsynth"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn random_classify_synth_lower_verify() {
    let dir = tempdir("pipeline");
    for (gs, seed) in [
        ("int", "3"),
        ("real", "5"),
        ("imag", "7"),
        ("gauss", "11"),
        ("supgauss", "13"),
        ("supint", "17"),
    ] {
        let m = path(&dir, &format!("{gs}.mat"));
        let w = path(&dir, &format!("{gs}.gens"));
        let c = path(&dir, &format!("{gs}.circ"));
        let (rc, _, err) = run(&[
            "random",
            "--gateset",
            gs,
            "--n",
            "2",
            "--len",
            "10",
            "--seed",
            seed,
            "--out",
            &m,
        ]);
        assert_eq!(rc, 0, "random: {err}");
        let (rc, out, _) = run(&["classify", &m]);
        assert_eq!(rc, 0);
        assert!(out.contains("gateset="), "classify output: {out}");
        let (rc, _, err) = run(&["synth", &m, "--gateset", gs, "--out", &w]);
        assert_eq!(rc, 0, "synth: {err}");
        assert!(err.contains("word length"), "missing trace: {err}");
        let (rc, _, err) = run(&["lower", &w, "--gateset", gs, "--out", &c]);
        assert_eq!(rc, 0, "lower: {err}");
        let (rc, out, err) = run(&["verify", &c, &m]);
        assert_eq!(rc, 0, "verify failed for {gs}: {err}");
        assert_eq!(out.trim(), "pass");
    }
}

#[test]
fn deterministic_random_output() {
    let dir = tempdir("det");
    let a = path(&dir, "a.mat");
    let b = path(&dir, "b.mat");
    run(&[
        "random",
        "--gateset",
        "gauss",
        "--n",
        "2",
        "--len",
        "12",
        "--seed",
        "7",
        "--out",
        &a,
    ]);
    run(&[
        "random",
        "--gateset",
        "gauss",
        "--n",
        "2",
        "--len",
        "12",
        "--seed",
        "7",
        "--out",
        &b,
    ]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn env_seed_fallback() {
    let dir = tempdir("envseed");
    let a = path(&dir, "a.mat");
    let b = path(&dir, "b.mat");
    let status = bin()
        .env("RINGSYNTH_SEED", "99")
        .args([
            "random",
            "--gateset",
            "int",
            "--n",
            "2",
            "--len",
            "6",
            "--out",
            &a,
        ])
        .status()
        .unwrap();
    assert!(status.success());
    bin()
        .args([
            "random",
            "--gateset",
            "int",
            "--n",
            "2",
            "--len",
            "6",
            "--seed",
            "99",
            "--out",
            &b,
        ])
        .status()
        .unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempdir("exitcodes");
    // 1: missing file
    let (rc, _, _) = run(&["classify", &path(&dir, "missing.mat")]);
    assert_eq!(rc, 1);
    // 2: non-unitary
    let nu = path(&dir, "nu.mat");
    std::fs::write(&nu, "dim 2 2\n1 1\n0 1\n").unwrap();
    let (rc, _, _) = run(&["classify", &nu]);
    assert_eq!(rc, 2);
    // 3: unsupported ring (T gate)
    let t = path(&dir, "t.mat");
    std::fs::write(&t, "dim 2 2\n1 0\n0 w\n").unwrap();
    let (rc, _, _) = run(&["synth", &t]);
    assert_eq!(rc, 3);
    let (rc, out, _) = run(&["classify", &t]);
    assert_eq!(rc, 0);
    assert!(out.contains("Domega") && out.contains("unsupported"));
    // 3: det != 1 at dim 16 under --ancilla none
    let m = path(&dir, "det.mat");
    run(&[
        "random",
        "--gateset",
        "imag",
        "--n",
        "4",
        "--len",
        "1",
        "--seed",
        "1",
        "--out",
        &m,
    ]);
    // A single det-1 word times an F two-level would be needed; instead use
    // a non-det1 instance directly: a plain F word has det -1 components.
    std::fs::write(&m, {
        // F embedded at levels (1,2) of dim 16.
        use ringsynth::linalg::{GenKind, Generator};
        Generator::new(GenKind::F2, vec![1, 2], 16)
            .unwrap()
            .embed()
            .serialize()
    })
    .unwrap();
    let (rc, _, err) = run(&["synth", &m, "--gateset", "imag", "--ancilla", "none"]);
    assert_eq!(rc, 3, "expected det rejection: {err}");
    // 4: verification mismatch
    let c = path(&dir, "c.circ");
    let id = path(&dir, "id.mat");
    std::fs::write(&c, "qubits 1\nancillas 0 clean\nH 1\n").unwrap();
    std::fs::write(&id, "dim 2 2\n1 0\n0 1\n").unwrap();
    let (rc, _, err) = run(&["verify", &c, &id]);
    assert_eq!(rc, 4);
    assert!(err.contains("mismatch at entry"), "diagnostic: {err}");
}

#[test]
fn selftest_reports_all_pass() {
    let (rc, out, _) = run(&["selftest"]);
    assert_eq!(rc, 0);
    assert!(out.contains("0 failures"));
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() > 40);
    assert!(!out.contains("FAIL "));
}

fn tempdir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("ringsynth-test-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
