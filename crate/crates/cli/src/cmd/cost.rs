use std::process::ExitCode;

use lattice_gauge::hybrid::{cost_estimate, CostQuery};

use crate::args::CostArgs;

pub fn run(a: &CostArgs) -> anyhow::Result<ExitCode> {
    let c = cost_estimate(&CostQuery {
        lattice_size: a.size,
        lattice_spacing: a.spacing,
    })?;
    println!("relative cost: {c}");
    Ok(ExitCode::SUCCESS)
}
