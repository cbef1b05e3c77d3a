use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use lattice_gauge::hamiltonian::{build_basis, build_hamiltonian, ground_state, write_spectrum_csv, Sector};
use serde_json::json;

use crate::args::{HamiltonianArgs, SectorArg};
use crate::manifest::{ensure_dir, RunManifest};

pub const SPECTRUM_FILE: &str = "spectrum.csv";

pub fn run(a: &HamiltonianArgs, out: &Path) -> anyhow::Result<ExitCode> {
    let geo = super::geometry(&a.dims)?;
    let sector = match a.sector {
        SectorArg::Full => Sector::Full,
        SectorArg::Projected => Sector::zero_charge(&geo),
    };
    let basis = Arc::new(build_basis(&geo, a.cutoff, sector, a.budget)?);
    let h = build_hamiltonian::<f64>(basis, a.g2)?;
    let asym = h.max_asymmetry();
    let gauss = h.gauss_commutator_deviation();

    let (sector_dim, pairs) = match a.sector {
        SectorArg::Full => {
            let restricted = h.restricted_to_charges(&vec![0; geo.volume()])?;
            (restricted.sector_dim(), ground_state(&restricted, a.k)?)
        }
        SectorArg::Projected => (h.dim(), ground_state(&h, a.k)?),
    };

    println!("basis dimension: {}", h.dim());
    println!("zero-charge sector dimension: {sector_dim}");
    println!("nonzeros: {}", h.matrix().nnz());
    println!("hermiticity: max |H - H^T| = {asym:.3e}");
    if gauss == 0.0 {
        println!("gauss law: all commutators 0");
    } else {
        println!("gauss law: max commutator deviation {gauss:.3e}");
    }
    for (i, e) in pairs.values.iter().enumerate() {
        println!("E{i} = {e:.12}");
    }
    let gap = pairs.gap();
    if let Some(g) = gap {
        println!("gap = {g:.12}");
    }

    ensure_dir(out)?;
    write_spectrum_csv(&pairs.values, BufWriter::new(File::create(out.join(SPECTRUM_FILE))?))?;
    let mut m = RunManifest::new("hamiltonian", a, out);
    m.resolved = json!({
        "basis_dimension": h.dim(),
        "sector_dimension": sector_dim,
        "max_asymmetry": asym,
        "gauss_commutator_deviation": gauss,
        "max_relative_residual": pairs.max_relative_residual(),
        "gap": gap,
    });
    m.outputs = vec![SPECTRUM_FILE.into()];
    m.assumptions = vec![
        "compact U(1), temporal gauge, periodic boundaries".into(),
        "H = (g^2/2) sum E^2 - (2/g^2) N_p + (1/g^2) sum (U_p + U_p^dag)".into(),
        "spectrum restricted to zero static charge at every site".into(),
    ];
    m.write(out)?;
    Ok(ExitCode::SUCCESS)
}
