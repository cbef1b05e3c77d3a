use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use lattice_gauge::fermion::FermionParams;
use lattice_gauge::hybrid::{replay_archive, strategy2_run, ReweightingResult, Strategy2Params};
use serde_json::json;

use crate::args::{FermionArgs, ReplayArgs, Strategy2Args};
use crate::manifest::{ensure_dir, RunManifest};

pub const ARCHIVE_DIR: &str = "configs";
pub const ESTIMATES_FILE: &str = "estimates.csv";
pub const REPORT_FILE: &str = "report.json";

fn fermion_params(f: &FermionArgs) -> FermionParams<f64> {
    FermionParams::new(f.mass, f.hopping, !f.periodic_time)
}

fn write_estimates(r: &ReweightingResult, path: &Path) -> anyhow::Result<()> {
    let mut w = fs::File::create(path)?;
    writeln!(w, "observable,quenched,quenched_error,reweighted,reweighted_imag,reweighted_error")?;
    for (q, rw) in r.quenched.iter().zip(&r.reweighted) {
        writeln!(
            w,
            "{},{:.16e},{:.6e},{:.16e},{:.6e},{:.6e}",
            q.name, q.value, q.error, rw.value, rw.imag, rw.error
        )?;
    }
    Ok(())
}

fn print_estimates(r: &ReweightingResult) {
    println!("weight sum ratio |sum w| / sum |w|: {:.6}", r.weight_sum_ratio);
    for (q, rw) in r.quenched.iter().zip(&r.reweighted) {
        println!(
            "{:>10}: quenched {:.10e} +- {:.2e}   reweighted {:.10e} +- {:.2e}",
            q.name, q.value, q.error, rw.value, rw.error
        );
    }
    let identical = r
        .quenched
        .iter()
        .zip(&r.reweighted)
        .all(|(q, rw)| q.value.to_bits() == rw.value.to_bits() && rw.imag == 0.0);
    println!("reweighted == quenched: {}", if identical { "yes" } else { "no" });
}

pub fn run(a: &Strategy2Args, out: &Path) -> anyhow::Result<ExitCode> {
    let geo = super::geometry(&a.gauge.dims)?;
    let mc = super::mc_params(&a.gauge, 0, 1)?;
    let mut params = Strategy2Params::new(mc, geo.extents(), a.gauge.group, fermion_params(&a.fermion), a.n_configs);
    params.start = a.gauge.start.into();
    params.pilot_sweeps = a.pilot_sweeps;
    params.min_separation = a.min_separation;

    ensure_dir(out)?;
    let report = strategy2_run(&params, out.join(ARCHIVE_DIR))?;
    match (report.tau_int, &report.tau_note) {
        (Some(t), _) => println!("pilot tau_int: {t:.3}"),
        (None, Some(note)) => println!("pilot tau_int: unavailable ({note})"),
        _ => {}
    }
    println!("separation: {} sweeps", report.separation);
    println!("configurations: {}", report.files.len());
    print_estimates(&report.result);

    write_estimates(&report.result, &out.join(ESTIMATES_FILE))?;
    fs::write(out.join(REPORT_FILE), serde_json::to_string_pretty(&report)?)?;
    let mut m = RunManifest::new("strategy2", a, out);
    m.resolved = json!({
        "beta": params.mc.beta,
        "algorithm": params.mc.algorithm,
        "separation": report.separation,
        "pilot_tau_int": report.tau_int,
    });
    m.outputs = vec![ARCHIVE_DIR.into(), ESTIMATES_FILE.into(), REPORT_FILE.into()];
    m.assumptions = vec![
        "fermion determinant and correlator from the hopping operator m - t sum (U + U^dag)".into(),
        "weights det_i / max |det|; errors from leave-one-out jackknife".into(),
        "snapshots separated by max(min_separation, ceil(2 tau_int)) sweeps".into(),
        super::SITE_ORDER_NOTE.into(),
    ];
    m.write(out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn replay(a: &ReplayArgs, out: &Path) -> anyhow::Result<ExitCode> {
    let result = replay_archive(&a.archive, &fermion_params(&a.fermion))?;
    println!("configurations: {}", result.measurements.len());
    print_estimates(&result);
    ensure_dir(out)?;
    write_estimates(&result, &out.join(ESTIMATES_FILE))?;
    let mut m = RunManifest::new("replay", a, out);
    m.outputs = vec![ESTIMATES_FILE.into()];
    m.write(out)?;
    Ok(ExitCode::SUCCESS)
}
