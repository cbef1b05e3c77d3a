use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::lattice::LatticeGeometry;

use super::HamiltonianError;

/// Which states are kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    /// Every electric configuration within the cutoff.
    Full,
    /// Only states whose divergence at each site equals the given charge.
    GaussProjected { charges: Vec<i32> },
}

impl Sector {
    pub fn zero_charge(geometry: &LatticeGeometry) -> Self {
        Sector::GaussProjected {
            charges: vec![0; geometry.volume()],
        }
    }
}

/// Electric-field eigenbasis of a 2D periodic lattice with `|E_l| ≤ Λ` on
/// every link. A state is encoded as `Σ_l (E_l + Λ) (2Λ+1)^l` with links in
/// link-id order; in the full sector the code is the basis index.
#[derive(Clone, Debug)]
pub struct GaugeBasis {
    geometry: LatticeGeometry,
    cutoff: i32,
    sector: Sector,
    radix: u64,
    strides: Vec<u64>,
    states: Option<Vec<u64>>,
    dim: usize,
}

/// Lattice divergence `Σ_out E − Σ_in E` at `site`.
pub fn divergence(geometry: &LatticeGeometry, state: &[i32], site: usize) -> i32 {
    let d = geometry.ndim();
    let mut g = 0;
    for mu in 0..d {
        g += state[site * d + mu];
        g -= state[geometry.backward(site, mu) * d + mu];
    }
    g
}

fn full_dimension(radix: u64, links: usize) -> Option<u64> {
    let mut total: u64 = 1;
    for _ in 0..links {
        total = total.checked_mul(radix)?;
    }
    Some(total)
}

/// Builds the basis for `geometry` (two dimensions, periodic).
///
/// `budget` caps the number of retained states. In the projected sector the
/// states are enumerated depth-first with each site's constraint checked as
/// soon as its last link is assigned.
pub fn build_basis(
    geometry: &LatticeGeometry,
    cutoff: u32,
    sector: Sector,
    budget: usize,
) -> Result<GaugeBasis, HamiltonianError> {
    if geometry.ndim() != 2 {
        return Err(HamiltonianError::NotTwoDimensional(geometry.ndim()));
    }
    if cutoff < 1 {
        return Err(HamiltonianError::CutoffTooSmall(cutoff));
    }
    let lambda = cutoff as i32;
    let radix = 2 * cutoff as u64 + 1;
    let n_links = geometry.link_count();
    let full = full_dimension(radix, n_links).ok_or(HamiltonianError::BudgetExceeded {
        dimension: u128::MAX,
        budget,
    })?;
    let strides: Vec<u64> = (0..n_links).map(|l| radix.pow(l as u32)).collect();

    let (states, dim) = match &sector {
        Sector::Full => {
            if full > budget as u64 {
                return Err(HamiltonianError::BudgetExceeded {
                    dimension: full as u128,
                    budget,
                });
            }
            (None, full as usize)
        }
        Sector::GaussProjected { charges } => {
            if charges.len() != geometry.volume() {
                return Err(HamiltonianError::ChargeCount {
                    expected: geometry.volume(),
                    got: charges.len(),
                });
            }
            let states = enumerate_projected(geometry, lambda, charges, &strides, budget)?;
            let dim = states.len();
            (Some(states), dim)
        }
    };
    Ok(GaugeBasis {
        geometry: geometry.clone(),
        cutoff: lambda,
        sector,
        radix,
        strides,
        states,
        dim,
    })
}

fn enumerate_projected(
    geometry: &LatticeGeometry,
    lambda: i32,
    charges: &[i32],
    strides: &[u64],
    budget: usize,
) -> Result<Vec<u64>, HamiltonianError> {
    let d = geometry.ndim();
    let n_links = geometry.link_count();
    // sites whose four links are all assigned once link `l` is set
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); n_links];
    for site in geometry.sites() {
        let mut last = 0;
        for mu in 0..d {
            last = last.max(site * d + mu);
            last = last.max(geometry.backward(site, mu) * d + mu);
        }
        closes[last].push(site);
    }
    let mut out = Vec::new();
    let mut state = vec![0i32; n_links];
    let mut stack: Vec<(usize, i32)> = vec![(0, -lambda)];
    // Iterative depth-first search over link values.
    while let Some((l, value)) = stack.pop() {
        if value > lambda {
            continue;
        }
        stack.push((l, value + 1));
        state[l] = value;
        if closes[l].iter().any(|&s| divergence(geometry, &state, s) != charges[s]) {
            continue;
        }
        if l + 1 == n_links {
            if out.len() == budget {
                return Err(HamiltonianError::BudgetExceeded {
                    dimension: (budget + 1) as u128,
                    budget,
                });
            }
            let code = state
                .iter()
                .zip(strides)
                .map(|(&e, &s)| (e + lambda) as u64 * s)
                .sum();
            out.push(code);
        } else {
            stack.push((l + 1, -lambda));
        }
    }
    out.sort_unstable();
    Ok(out)
}

impl GaugeBasis {
    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geometry
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn sector(&self) -> &Sector {
        &self.sector
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_links(&self) -> usize {
        self.strides.len()
    }

    pub fn is_full(&self) -> bool {
        self.states.is_none()
    }

    #[inline]
    pub(crate) fn strides(&self) -> &[u64] {
        &self.strides
    }

    #[inline]
    pub fn code(&self, index: usize) -> u64 {
        match &self.states {
            None => index as u64,
            Some(s) => s[index],
        }
    }

    #[inline]
    pub fn index_of_code(&self, code: u64) -> Option<usize> {
        match &self.states {
            None => ((code as usize) < self.dim).then_some(code as usize),
            Some(s) => s.binary_search(&code).ok(),
        }
    }

    /// Electric value on one link of the state at `index`.
    #[inline]
    pub fn electric(&self, index: usize, link: usize) -> i32 {
        ((self.code(index) / self.strides[link]) % self.radix) as i32 - self.cutoff
    }

    /// Electric values on all links.
    pub fn state(&self, index: usize) -> Vec<i32> {
        let mut out = vec![0; self.n_links()];
        self.decode_into(self.code(index), &mut out);
        out
    }

    #[inline]
    pub(crate) fn decode_into(&self, mut code: u64, out: &mut [i32]) {
        for e in out.iter_mut() {
            *e = (code % self.radix) as i32 - self.cutoff;
            code /= self.radix;
        }
    }

    pub fn encode(&self, state: &[i32]) -> Option<u64> {
        if state.len() != self.n_links() || state.iter().any(|e| e.abs() > self.cutoff) {
            return None;
        }
        Some(
            state
                .iter()
                .zip(&self.strides)
                .map(|(&e, &s)| (e + self.cutoff) as u64 * s)
                .sum(),
        )
    }

    pub fn index_of(&self, state: &[i32]) -> Option<usize> {
        self.index_of_code(self.encode(state)?)
    }

    /// Basis indices whose divergence equals `charges` at every site.
    pub fn states_with_charges(&self, charges: &[i32]) -> Vec<usize> {
        let mut buf = vec![0; self.n_links()];
        (0..self.dim)
            .filter(|&i| {
                self.decode_into(self.code(i), &mut buf);
                self.geometry
                    .sites()
                    .all(|s| divergence(&self.geometry, &buf, s) == charges[s])
            })
            .collect()
    }

    /// One state per line, link values separated by spaces.
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut buf = vec![0; self.n_links()];
        for i in 0..self.dim {
            self.decode_into(self.code(i), &mut buf);
            let line: Vec<String> = buf.iter().map(|e| e.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
