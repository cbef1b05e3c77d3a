use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lgt(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgt"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("LGT_OUTPUT_DIR")
        .output()
        .expect("running lgt")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

const SMALL_MC: [&str; 12] = [
    "run-mc", "--group", "su2", "--beta", "2.3", "--dims", "4x4x4x4", "--sweeps", "40", "--therm", "10", "--seed=9",
];

#[test]
fn run_mc_is_deterministic_and_writes_outputs() {
    let t = tempfile::tempdir().unwrap();
    let (a, b) = (t.path().join("a"), t.path().join("b"));
    assert_eq!(lgt(&a, &SMALL_MC).status.code(), Some(0));
    assert_eq!(lgt(&b, &SMALL_MC).status.code(), Some(0));
    for f in ["observables.csv", "final.lgc"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let m = manifest(&a);
    assert_eq!(m["command"], "run-mc");
    assert_eq!(m["parameters"]["gauge"]["seed"], 9);
    assert_eq!(m["resolved"]["beta"], 2.3);
}

#[test]
fn coupling_flag_resolves_beta() {
    let t = tempfile::tempdir().unwrap();
    let o = lgt(
        t.path(),
        &["run-mc", "--group", "su2", "--g2", "2.0", "--dims", "4x4", "--sweeps", "20", "--therm", "0"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(manifest(t.path())["resolved"]["beta"], 2.0);
}

#[test]
fn usage_errors_exit_with_two() {
    let t = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["run-mc", "--group", "su2", "--dims", "4x4"],
        &["run-mc", "--group", "su2", "--beta", "1", "--g2", "2", "--dims", "4x4"],
        &["run-mc", "--group", "su5", "--beta", "1", "--dims", "4x4"],
        &["hamiltonian", "--cutoff", "0", "--g2", "1"],
        &["strategy2", "--group", "su2", "--dims", "2x2x2x2"],
        &["config-inspect"],
    ];
    for args in cases {
        let o = lgt(t.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"), "{args:?}");
    }
}

#[test]
fn runtime_errors_exit_with_one() {
    let t = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["run-mc", "--group", "su3", "--beta", "5", "--dims", "4x4", "--algorithm", "heatbath"],
        &["run-mc", "--group", "su2", "--beta", "1", "--dims", "4x1"],
        &["hamiltonian", "--cutoff", "1", "--g2=-1"],
        &["strategy2", "--group", "u1", "--beta", "1", "--dims", "4x4", "--n-configs", "1"],
        &["cost", "--size", "0"],
    ];
    for args in cases {
        let o = lgt(t.path(), args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"), "{args:?}");
    }
}

#[test]
fn output_directory_from_environment() {
    let t = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_lgt"))
        .args(["cost", "--size", "2"])
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "relative cost: 32");
    let o = Command::new(env!("CARGO_BIN_EXE_lgt"))
        .args(["hamiltonian", "--cutoff", "1", "--g2", "1"])
        .env("LGT_OUTPUT_DIR", t.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(t.path().join("spectrum.csv").exists());
}

#[test]
fn hamiltonian_reports_gauss_law_and_sector_gaps_agree() {
    let t = tempfile::tempdir().unwrap();
    let gap = |sector: &str| {
        let dir = t.path().join(sector);
        let o = lgt(&dir, &["hamiltonian", "--cutoff", "2", "--g2", "1", "--sector", sector]);
        assert_eq!(o.status.code(), Some(0));
        let s = stdout(&o);
        assert!(s.contains("gauss law: all commutators 0"), "{s}");
        manifest(&dir)["resolved"]["gap"].as_f64().unwrap()
    };
    let (p, f) = (gap("projected"), gap("full"));
    assert!(p > 0.0);
    assert!((p - f).abs() <= 1e-8, "{p} vs {f}");
}

#[test]
fn hamiltonian_budget_error_names_dimension() {
    let t = tempfile::tempdir().unwrap();
    let o = lgt(t.path(), &["hamiltonian", "--cutoff", "5", "--g2", "1", "--sector", "full"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("214358881"));
}

#[test]
fn config_inspect_verdicts() {
    let t = tempfile::tempdir().unwrap();
    assert_eq!(lgt(t.path(), &SMALL_MC).status.code(), Some(0));
    let file = t.path().join("final.lgc");
    let o = lgt(t.path(), &["config-inspect", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("group: SU(2)") || s.contains("group: su2"), "{s}");
    assert!(s.contains("extents: 4x4x4x4"));
    assert!(s.contains("sweep: 50"));
    assert_eq!(s.lines().last(), Some("OK"));

    let mut bytes = fs::read(&file).unwrap();
    let k = bytes.len() / 2;
    bytes[k] ^= 0x40;
    let bad = t.path().join("bad.lgc");
    fs::write(&bad, bytes).unwrap();
    let o = lgt(t.path(), &["config-inspect", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("CHECKSUM MISMATCH"));

    let o = lgt(t.path(), &["config-inspect", t.path().join("missing.lgc").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn strategy2_zero_hopping_and_replay() {
    let t = tempfile::tempdir().unwrap();
    let run = t.path().join("run");
    let common = [
        "--group", "su2", "--beta", "2.0", "--dims", "4x4x2x4", "--n-configs", "4", "--therm", "20",
        "--pilot-sweeps", "100", "--min-separation", "3",
    ];
    let mut args = vec!["strategy2", "--hopping", "0"];
    args.extend(common);
    let o = lgt(&run, &args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("reweighted == quenched: yes"));

    let run2 = t.path().join("run2");
    let mut args = vec!["strategy2", "--hopping", "0.4"];
    args.extend(common);
    assert_eq!(lgt(&run2, &args).status.code(), Some(0));
    let archive = run2.join("configs");
    let replay = t.path().join("replay");
    let o = lgt(&replay, &["replay", "--archive", archive.to_str().unwrap(), "--hopping", "0.4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read(run2.join("estimates.csv")).unwrap(),
        fs::read(replay.join("estimates.csv")).unwrap()
    );
}

#[test]
fn bench_commands_write_csv() {
    let t = tempfile::tempdir().unwrap();
    let o = lgt(t.path(), &["bench", "timing", "--ns", "2,3,4", "--nt", "2", "--sweeps", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(t.path().join("timing.csv")).unwrap();
    assert!(csv.starts_with("ns,volume,links,seconds_per_sweep\n"));
    assert_eq!(csv.lines().count(), 4);
    assert!(stdout(&o).contains("time ~ volume^"));

    let o = lgt(
        t.path(),
        &["bench", "tau", "--ns", "2,3", "--nt", "2", "--sweeps", "3000", "--therm", "100"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(t.path().join("tau.csv")).unwrap();
    assert!(csv.starts_with("ns,tau_int,window,series_len\n2,"));
}

#[test]
fn rerunning_from_manifest_reproduces_outputs() {
    let t = tempfile::tempdir().unwrap();
    let first = t.path().join("first");
    assert_eq!(lgt(&first, &SMALL_MC).status.code(), Some(0));
    let p = &manifest(&first)["parameters"];
    let g = &p["gauge"];
    let s = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let args = vec![
        "run-mc".to_string(),
        "--group".into(),
        s(&g["group"]).to_lowercase(),
        "--beta".into(),
        s(&g["beta"]),
        "--dims".into(),
        s(&g["dims"]),
        "--sweeps".into(),
        s(&p["sweeps"]),
        "--therm".into(),
        s(&g["therm"]),
        "--seed".into(),
        s(&g["seed"]),
        "--start".into(),
        s(&g["start"]),
        "--step".into(),
        s(&g["step"]),
        "--hits".into(),
        s(&g["hits"]),
        "--workers".into(),
        s(&g["workers"]),
        "--measure-every".into(),
        s(&p["measure_every"]),
    ];
    let second = t.path().join("second");
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(lgt(&second, &refs).status.code(), Some(0));
    assert_eq!(
        fs::read(first.join("observables.csv")).unwrap(),
        fs::read(second.join("observables.csv")).unwrap()
    );
}
