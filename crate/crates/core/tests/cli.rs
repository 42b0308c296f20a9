use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kraus_core::cli::files::{
    read_json, DilationFile, KrausSetFile, KrausTrajectoryFile, MatrixFile, PhaseFile, TrajectoryFile,
};
use kraus_core::{ComplexMatrix, Tolerances, C64};
use tempfile::TempDir;

fn kraus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kraus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_matrix(dir: &Path, name: &str, m: &ComplexMatrix) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string(&MatrixFile::from_matrix(m)).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn transposition_pair(dir: &Path) -> (PathBuf, PathBuf) {
    let a = ComplexMatrix::from_row_major(
        2,
        2,
        vec![C64::new(0.5, 0.0), C64::new(0.0, -0.25), C64::new(0.0, 0.25), C64::new(0.5, 0.0)],
    )
    .unwrap();
    (write_matrix(dir, "a.json", &a), write_matrix(dir, "b.json", &a.transpose()))
}

#[test]
fn connect_transposition_pair() {
    let dir = TempDir::new().unwrap();
    let (a, b) = transposition_pair(dir.path());
    let out = dir.path().join("k.json");
    let o = kraus(&["connect", s(&a), s(&b), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1);
    let f: KrausSetFile = read_json(&out).unwrap();
    let r = f.report.unwrap();
    assert!(r.pass);
    assert!(r.reconstruction_defect.0 <= 1e-12);
    assert_eq!(r.tolerance.0, 1e-10);
    assert_eq!(f.operators.len(), 2);
}

#[test]
fn connect_identical_states() {
    let dir = TempDir::new().unwrap();
    let (a, _) = transposition_pair(dir.path());
    let out = dir.path().join("k.json");
    let o = kraus(&["connect", s(&a), s(&a), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn non_hermitian_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = ComplexMatrix::from_real(2, 2, &[0.5, 1.0, 0.0, 0.5]).unwrap();
    let a = write_matrix(dir.path(), "bad.json", &bad);
    let (b, _) = transposition_pair(dir.path());
    let out = dir.path().join("k.json");
    let o = kraus(&["connect", s(&a), s(&b), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(err["error"], "NotHermitian");
    assert!(!out.exists());
}

#[test]
fn validation_error_kinds() {
    let dir = TempDir::new().unwrap();
    let (b, _) = transposition_pair(dir.path());
    let out = dir.path().join("k.json");
    let cases = [
        (ComplexMatrix::from_real(2, 2, &[0.6, 0.0, 0.0, 0.6]).unwrap(), "NotUnitTrace"),
        (ComplexMatrix::from_real(2, 2, &[1.2, 0.0, 0.0, -0.2]).unwrap(), "NotPSD"),
    ];
    for (i, (m, kind)) in cases.iter().enumerate() {
        let a = write_matrix(dir.path(), &format!("m{i}.json"), m);
        let o = kraus(&["connect", s(&a), s(&b), "--out", s(&out)]);
        assert_eq!(o.status.code(), Some(2));
        let err: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
        assert_eq!(err["error"], *kind);
    }
}

#[test]
fn malformed_and_missing_files() {
    let dir = TempDir::new().unwrap();
    let (b, _) = transposition_pair(dir.path());
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{ not json").unwrap();
    let out = dir.path().join("k.json");
    let o = kraus(&["connect", s(&junk), s(&b), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ParseError"));

    let missing = dir.path().join("nope.json");
    let o = kraus(&["connect", s(&missing), s(&b), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("IoError"));

    let unwritable = dir.path().join("no_such_dir").join("k.json");
    let o = kraus(&["connect", s(&b), s(&b), "--out", s(&unwritable)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_flags_are_validation_errors() {
    let o = kraus(&["connect", "a.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("UsageError"));
    let dir = TempDir::new().unwrap();
    let (a, b) = transposition_pair(dir.path());
    let out = dir.path().join("k.json");
    let o = kraus(&["connect", s(&a), s(&b), "--out", s(&out), "--tol=-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("BadParams"));
}

#[test]
fn verify_detects_missing_operator() {
    let dir = TempDir::new().unwrap();
    let (a, b) = transposition_pair(dir.path());
    let k = dir.path().join("k.json");
    assert_eq!(kraus(&["connect", s(&a), s(&b), "--out", s(&k)]).status.code(), Some(0));
    let mut f: KrausSetFile = read_json(&k).unwrap();
    f.operators.pop();
    let broken = dir.path().join("broken.json");
    fs::write(&broken, serde_json::to_string(&f).unwrap()).unwrap();
    let report = dir.path().join("r.json");
    let o = kraus(&["verify", s(&broken), s(&a), s(&b), "--out", s(&report)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    let r: KrausSetFile = read_json(&report).unwrap();
    assert!(r.report.unwrap().completeness_defect.0 > 1e-10);
}

#[test]
fn apply_reproduces_target() {
    let dir = TempDir::new().unwrap();
    let (a, b) = transposition_pair(dir.path());
    let k = dir.path().join("k.json");
    kraus(&["connect", s(&a), s(&b), "--out", s(&k)]);
    let out = dir.path().join("out.json");
    let o = kraus(&["apply", s(&k), s(&a), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let got = read_json::<MatrixFile>(&out).unwrap().to_matrix().unwrap();
    let want = read_json::<MatrixFile>(&b).unwrap().to_matrix().unwrap();
    assert!(kraus_core::linalg::frobenius_distance(&got, &want) <= 1e-12);
}

#[test]
fn dephasing_fixture_pipeline() {
    let dir = TempDir::new().unwrap();
    let traj = dir.path().join("traj.json");
    let o = kraus(&["gen", "dephasing", "--gamma", "1", "--tau", "3", "--steps", "300", "--out", s(&traj)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t: TrajectoryFile = read_json(&traj).unwrap();
    assert_eq!(t.times.len(), 301);
    let kt = dir.path().join("kt.json");
    let o = kraus(&["kraus-traj", s(&traj), "--out", s(&kt)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let f: KrausTrajectoryFile = read_json(&kt).unwrap();
    assert!(f.pass);
    assert_eq!(f.sets.len(), 301);
    assert!(f.to_trajectory().is_ok());
}

#[test]
fn phase_on_great_circle() {
    let dir = TempDir::new().unwrap();
    let traj = dir.path().join("traj.json");
    let o = kraus(&["gen", "precession", "--theta", &(PI / 2.0).to_string(), "--steps", "2000", "--out", s(&traj)]);
    assert_eq!(o.status.code(), Some(0));
    let out = dir.path().join("phase.json");
    let o = kraus(&["phase", s(&traj), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("phase: alpha=["));
    let f: PhaseFile = read_json(&out).unwrap();
    let a0 = f.alpha[0].unwrap().0;
    // −π and π coincide on the circle
    assert!((a0.abs() - PI).abs() < 2e-3, "{a0}");
    assert!(f.aligned);
    assert_eq!(f.undefined, vec![1]);
}

#[test]
fn depolarizing_needs_rho0() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.json");
    let o = kraus(&["gen", "depolarizing", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let r = write_matrix(dir.path(), "r.json", &ComplexMatrix::from_real_diagonal(&[0.7, 0.2, 0.1]));
    let o = kraus(&["gen", "depolarizing", "--rho0", s(&r), "--lambda", "0.5", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t: TrajectoryFile = read_json(&out).unwrap();
    assert!(t.to_trajectory(&Tolerances::default()).is_ok());
}

#[test]
fn dilate_pair_and_trajectory() {
    let dir = TempDir::new().unwrap();
    let (a, b) = transposition_pair(dir.path());
    for basis in ["eigen", "computational"] {
        let out = dir.path().join(format!("d_{basis}.json"));
        let o = kraus(&["dilate", s(&a), s(&b), "--basis", basis, "--out", s(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let f: DilationFile = read_json(&out).unwrap();
        assert_eq!(f.basis, basis);
        assert_eq!((f.system_dim, f.ancilla_dim), (2, 2));
        assert!(f.samples[0].report.recovery_defect.0 <= 1e-10);
        assert!(f.hamiltonians.is_none());
    }

    let traj = dir.path().join("traj.json");
    kraus(&["gen", "precession", "--theta", "1.0", "--purity", "0.8", "--steps", "50", "--out", s(&traj)]);
    let out = dir.path().join("d.json");
    let o = kraus(&["dilate", s(&traj), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let f: DilationFile = read_json(&out).unwrap();
    assert_eq!(f.samples.len(), 51);
    assert!(f.samples.iter().all(|x| x.report.pass && x.report.recovery_defect.0 <= 1e-10));
    assert_eq!(f.hamiltonians.unwrap().len(), 50);
}

#[test]
fn outputs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let traj = dir.path().join("traj.json");
    kraus(&["gen", "precession", "--theta", "0.7", "--purity", "0.9", "--steps", "100", "--out", s(&traj)]);
    let runs: Vec<(Vec<u8>, String)> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("phase{i}.json"));
            let o = kraus(&["phase", s(&traj), "--out", s(&out)]);
            (fs::read(&out).unwrap(), stdout(&o))
        })
        .collect();
    assert_eq!(runs[0], runs[1]);

    let k: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("kt{i}.json"));
            kraus(&["kraus-traj", s(&traj), "--out", s(&out)]);
            fs::read(&out).unwrap()
        })
        .collect();
    assert_eq!(k[0], k[1]);
}

#[test]
fn trajectory_round_trip_is_lossless() {
    let dir = TempDir::new().unwrap();
    let traj = dir.path().join("traj.json");
    kraus(&["gen", "precession", "--theta", "0.3", "--omega", "1.7", "--purity", "0.77", "--steps", "20", "--out", s(&traj)]);
    let text = fs::read_to_string(&traj).unwrap();
    let f: TrajectoryFile = serde_json::from_str(&text).unwrap();
    let t = f.to_trajectory(&Tolerances::default()).unwrap();
    let again = kraus_core::cli::files::to_json(&TrajectoryFile::from_trajectory(&t));
    assert_eq!(again, text);
}

#[test]
fn help_exits_zero() {
    let o = kraus(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("kraus-traj"));
}
