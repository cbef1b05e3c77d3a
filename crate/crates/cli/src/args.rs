use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lattice_gauge::hamiltonian::DEFAULT_BUDGET;
use lattice_gauge::wilson::{beta_from_coupling, Algorithm, Start};
use lattice_gauge::GroupLabel;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "lgt", version, about = "Lattice gauge theory toolkit")]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "LGT_OUTPUT_DIR", default_value = "lgt-output")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Wilson-action Monte Carlo chain.
    RunMc(RunMcArgs),
    /// Spectrum of the truncated U(1) Hamiltonian on a 2D torus.
    Hamiltonian(HamiltonianArgs),
    /// Quenched snapshots handed to the fermion side through files, then reweighted.
    Strategy2(Strategy2Args),
    /// Recompute reweighted estimates from an existing configuration archive.
    Replay(ReplayArgs),
    /// Sweep timing and autocorrelation studies.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Relative cost of a dynamical-fermion simulation.
    Cost(CostArgs),
    /// Print the header of a configuration file and verify it.
    ConfigInspect(InspectArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StartArg {
    Hot,
    Cold,
}

impl From<StartArg> for Start {
    fn from(s: StartArg) -> Self {
        match s {
            StartArg::Hot => Start::Hot,
            StartArg::Cold => Start::Cold,
        }
    }
}

/// Gauge-field flags shared by the Monte Carlo commands.
#[derive(Args, Debug, Serialize)]
pub struct GaugeArgs {
    /// u1, su2 or su3.
    #[arg(long)]
    pub group: GroupLabel,
    /// Lattice coupling β.
    #[arg(long, conflicts_with = "g2", required_unless_present = "g2")]
    pub beta: Option<f64>,
    /// Bare coupling g²; β = 2N/g².
    #[arg(long)]
    pub g2: Option<f64>,
    /// Extents such as 8x8 or 4x4x4x4; the last axis is time.
    #[arg(long)]
    pub dims: String,
    #[arg(long, default_value_t = 100)]
    pub therm: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// metropolis or heatbath; heatbath by default except for su3.
    #[arg(long)]
    pub algorithm: Option<Algorithm>,
    /// More than 1 uses the checkerboard parallel sweep.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value = "cold")]
    pub start: StartArg,
    /// Initial Metropolis step (auto-tuned during thermalization).
    #[arg(long, default_value_t = 0.5)]
    pub step: f64,
    /// Metropolis hits per link.
    #[arg(long, default_value_t = 1)]
    pub hits: usize,
}

impl GaugeArgs {
    pub fn resolved_beta(&self) -> anyhow::Result<f64> {
        match (self.beta, self.g2) {
            (Some(b), None) => Ok(b),
            (None, Some(g2)) => Ok(beta_from_coupling(g2, self.group)?),
            _ => anyhow::bail!("give exactly one of --beta and --g2"),
        }
    }

    pub fn resolved_algorithm(&self) -> Algorithm {
        default_algorithm(self.group, self.algorithm)
    }
}

#[derive(Args, Debug, Serialize)]
pub struct RunMcArgs {
    #[command(flatten)]
    pub gauge: GaugeArgs,
    /// Measured sweeps after thermalization.
    #[arg(long, default_value_t = 1000)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 1)]
    pub measure_every: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorArg {
    /// Enumerate every state, then restrict to the zero-charge sector.
    Full,
    /// Enumerate only Gauss-law states.
    Projected,
}

#[derive(Args, Debug, Serialize)]
pub struct HamiltonianArgs {
    #[arg(long, default_value = "2x2")]
    pub dims: String,
    /// Electric-field cutoff Λ.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub cutoff: u32,
    #[arg(long)]
    pub g2: f64,
    #[arg(long, value_enum, default_value = "projected")]
    pub sector: SectorArg,
    /// Number of lowest eigenvalues.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Largest basis allowed.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct FermionArgs {
    #[arg(long, default_value_t = 0.5)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hopping: f64,
    /// Periodic instead of antiperiodic time boundary.
    #[arg(long)]
    pub periodic_time: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct Strategy2Args {
    #[command(flatten)]
    pub gauge: GaugeArgs,
    #[command(flatten)]
    pub fermion: FermionArgs,
    #[arg(long, default_value_t = 20)]
    pub n_configs: usize,
    /// Sweeps used to estimate the autocorrelation time.
    #[arg(long, default_value_t = 400)]
    pub pilot_sweeps: usize,
    #[arg(long, default_value_t = 10)]
    pub min_separation: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct ReplayArgs {
    /// Archive directory written by strategy2.
    #[arg(long)]
    pub archive: PathBuf,
    #[command(flatten)]
    pub fermion: FermionArgs,
}

#[derive(Subcommand, Debug)]
pub enum BenchCommand {
    /// Median seconds per sweep on N_s³ × nt lattices, with a log-log fit.
    Timing(TimingArgs),
    /// Integrated autocorrelation time of the plaquette on N_s³ × nt lattices.
    Tau(TauArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct TimingArgs {
    #[arg(long, default_value = "su2")]
    pub group: GroupLabel,
    #[arg(long, default_value_t = 2.2)]
    pub beta: f64,
    /// Spatial extents, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,12,16")]
    pub ns: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    pub nt: usize,
    #[arg(long, default_value_t = 20)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 3)]
    pub warmup: usize,
    #[arg(long)]
    pub algorithm: Option<Algorithm>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct TauArgs {
    #[arg(long, default_value = "su2")]
    pub group: GroupLabel,
    #[arg(long, default_value_t = 2.2)]
    pub beta: f64,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    pub ns: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    pub nt: usize,
    #[arg(long, default_value_t = 20_000)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 500)]
    pub therm: usize,
    #[arg(long)]
    pub algorithm: Option<Algorithm>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct CostArgs {
    /// Linear size ratio.
    #[arg(long, default_value_t = 1.0)]
    pub size: f64,
    /// Lattice spacing ratio.
    #[arg(long, default_value_t = 1.0)]
    pub spacing: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct InspectArgs {
    pub file: PathBuf,
}

/// Heatbath where it exists, Metropolis for SU(3).
pub fn default_algorithm(group: GroupLabel, chosen: Option<Algorithm>) -> Algorithm {
    chosen.unwrap_or(match group {
        GroupLabel::SU3 => Algorithm::Metropolis,
        _ => Algorithm::Heatbath,
    })
}
