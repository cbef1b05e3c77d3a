use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;
use std::process::ExitCode;

use lattice_gauge::bench::{
    fit_sweep_scaling, harness_overhead, tau_study, time_sweeps, write_tau_csv, write_timing_csv, BenchMetadata,
    TauStudyOptions, TimingOptions,
};
use lattice_gauge::LatticeGeometry;
use serde_json::json;

use crate::args::{default_algorithm, TauArgs, TimingArgs};
use crate::manifest::{ensure_dir, RunManifest};

pub const TIMING_FILE: &str = "timing.csv";
pub const TAU_FILE: &str = "tau.csv";

pub fn timing(a: &TimingArgs, out: &Path) -> anyhow::Result<ExitCode> {
    let geometries = a
        .ns
        .iter()
        .map(|&n| LatticeGeometry::new(&[n, n, n, a.nt]))
        .collect::<Result<Vec<_>, _>>()?;
    let opts = TimingOptions {
        algorithm: default_algorithm(a.group, a.algorithm),
        warmup: a.warmup,
        workers: a.workers,
        seed: a.seed,
    };
    let records = time_sweeps(a.group, a.beta, &geometries, a.sweeps, &opts)?;
    let overhead = harness_overhead(1001);
    for r in &records {
        println!("N_s = {:>3}  links = {:>8}  {:.6e} s/sweep", r.ns, r.links, r.seconds_per_sweep);
    }
    let fit = if records.len() >= 3 {
        let f = fit_sweep_scaling(&records)?;
        println!("time ~ volume^{:.4} (+- {:.4})", f.exponent, f.std_error);
        Some(f)
    } else {
        None
    };
    println!("harness overhead: {overhead:.3e} s per timed call");

    ensure_dir(out)?;
    write_timing_csv(&records, BufWriter::new(File::create(out.join(TIMING_FILE))?))?;
    let metadata = BenchMetadata::collect::<f64>(vec![format!("workers = {}", a.workers)]);
    fs::write(
        out.join("timing.json"),
        serde_json::to_string_pretty(&json!({"records": records, "fit": fit, "metadata": metadata}))?,
    )?;
    let mut m = RunManifest::new("bench timing", a, out);
    m.resolved = json!({"algorithm": opts.algorithm, "harness_overhead_seconds": overhead});
    m.outputs = vec![TIMING_FILE.into(), "timing.json".into()];
    m.assumptions = vec!["median wall time per sweep from a hot start; sequential unless --workers > 1".into()];
    m.write(out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn tau(a: &TauArgs, out: &Path) -> anyhow::Result<ExitCode> {
    let opts = TauStudyOptions {
        group: a.group,
        beta: a.beta,
        nt: a.nt,
        algorithm: default_algorithm(a.group, a.algorithm),
        n_therm: a.therm,
        n_sweeps: a.sweeps,
        seed: a.seed,
    };
    let records = tau_study(&a.ns, &opts)?;
    for r in &records {
        println!("N_s = {:>3}  tau_int = {:.3}  (window {})", r.ns, r.tau_int, r.window);
    }
    let monotone = records.windows(2).all(|w| w[1].tau_int > w[0].tau_int);
    println!("tau_int increasing with N_s: {}", if monotone { "yes" } else { "no" });

    ensure_dir(out)?;
    write_tau_csv(&records, BufWriter::new(File::create(out.join(TAU_FILE))?))?;
    let mut m = RunManifest::new("bench tau", a, out);
    m.resolved = json!({"options": opts, "records": records, "monotone": monotone});
    m.outputs = vec![TAU_FILE.into()];
    m.assumptions = vec![
        "default study: SU(2) at beta = 2.2 on N_s^3 x 4 lattices".into(),
        "tau_int = 1/2 + sum rho(k), window W smallest with W >= 5 tau_int(W)".into(),
        "plaquette measured every sweep from a hot start".into(),
    ];
    m.write(out)?;
    Ok(ExitCode::SUCCESS)
}
