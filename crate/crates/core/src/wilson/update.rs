//! Local link updates: Metropolis for every group, heatbath for U(1) and SU(2).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::{exp_map, haar_sample, su2_from_quaternion, AlgebraElement, ColorMatrix, GroupElement, GroupLabel};
use crate::lattice::LinkIndex;
use crate::rng::{symmetric, uniform, uniform_open0, RngStream};
use crate::scalar::Real;

use super::config::{delta_action_with_staple, GaugeConfiguration};
use super::WilsonError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Metropolis,
    Heatbath,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Metropolis => "metropolis",
            Algorithm::Heatbath => "heatbath",
        }
    }

    /// Fails for heatbath on SU(3), which only supports Metropolis.
    pub fn check_group(self, group: GroupLabel) -> Result<(), WilsonError> {
        if self == Algorithm::Heatbath && group == GroupLabel::SU3 {
            return Err(WilsonError::UnsupportedGroup {
                algorithm: "heatbath",
                group,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "metropolis" => Ok(Algorithm::Metropolis),
            "heatbath" => Ok(Algorithm::Heatbath),
            other => Err(format!("unknown algorithm '{other}' (expected metropolis or heatbath)")),
        }
    }
}

#[inline]
fn accept<T: Real, R: Rng + ?Sized>(delta_s: T, beta: T, rng: &mut R) -> bool {
    if delta_s <= T::zero() {
        return true;
    }
    uniform::<T, _>(rng) < (-beta * delta_s).exp()
}

/// New value for one link after `hits` Metropolis proposals
/// `U′ = exp_map(step · v) U` with `v` uniform in `[−1, 1]^dim`.
fn metropolis_value<T: Real, R: Rng + ?Sized>(
    config: &GaugeConfiguration<T>,
    link: LinkIndex,
    beta: T,
    step: T,
    hits: usize,
    rng: &mut R,
) -> (GroupElement<T>, usize) {
    let group = config.group();
    let staple = config.staple_sum(link);
    let mut current = *config.link(link);
    let mut accepted = 0;
    for _ in 0..hits {
        let kick = exp_map(&AlgebraElement::random_uniform(group, step, rng));
        let proposal = kick * current;
        let ds = delta_action_with_staple(&current, &proposal, &staple);
        if accept(ds, beta, rng) {
            current = proposal;
            accepted += 1;
        }
    }
    (current, accepted)
}

/// Runs `hits` Metropolis proposals on one link; returns the number accepted.
pub fn metropolis_update_link<T: Real, R: Rng + ?Sized>(
    config: &mut GaugeConfiguration<T>,
    link: LinkIndex,
    beta: T,
    step: T,
    hits: usize,
    rng: &mut R,
) -> usize {
    let (value, accepted) = metropolis_value(config, link, beta, step, hits, rng);
    config.set_link(link, value);
    accepted
}

/// Visits every link once in link-id order; returns the acceptance rate.
pub fn metropolis_sweep<T: Real, R: Rng + ?Sized>(
    config: &mut GaugeConfiguration<T>,
    beta: T,
    step: T,
    hits: usize,
    rng: &mut R,
) -> f64 {
    let hits = hits.max(1);
    let n_links = config.geometry().link_count();
    let mut accepted = 0usize;
    for id in 0..n_links {
        let link = config.geometry().link_from_id(id);
        accepted += metropolis_update_link(config, link, beta, step, hits, rng);
    }
    accepted as f64 / (n_links * hits) as f64
}

/// Samples `x` in `[−1, 1]` with density `∝ sqrt(1 − x²) e^{a x}`.
///
/// Small `a` uses Creutz's exponential proposal; large `a` uses the
/// Kennedy–Pendleton construction, whose acceptance stays high as `a` grows.
pub fn sample_su2_x0<T: Real, R: Rng + ?Sized>(a: T, rng: &mut R) -> T {
    let one = T::one();
    let two = T::of(2.0);
    if a < T::of(1e-8) {
        loop {
            let x = symmetric::<T, _>(rng);
            if uniform::<T, _>(rng) < (one - x * x).sqrt() {
                return x;
            }
        }
    }
    if a < two {
        let floor = (-two * a).exp();
        loop {
            let r = floor + (one - floor) * uniform_open0::<T, _>(rng);
            let x = (one + r.ln() / a).max(-one);
            if uniform::<T, _>(rng) < (one - x * x).sqrt() {
                return x;
            }
        }
    }
    loop {
        let r1 = uniform_open0::<T, _>(rng);
        let r2 = uniform::<T, _>(rng);
        let r3 = uniform_open0::<T, _>(rng);
        let c = (T::TAU() * r2).cos();
        let lambda2 = -(r1.ln() + c * c * r3.ln()) / (two * a);
        let r4 = uniform::<T, _>(rng);
        if r4 * r4 <= one - lambda2 {
            return one - two * lambda2;
        }
    }
}

/// Samples an angle from the von Mises density `∝ e^{κ cos θ}` on `(−π, π]`
/// (Best–Fisher rejection; plain rejection from the uniform for tiny κ).
pub fn sample_von_mises<T: Real, R: Rng + ?Sized>(kappa: T, rng: &mut R) -> T {
    let one = T::one();
    let two = T::of(2.0);
    let pi = T::PI();
    if kappa < T::of(1e-4) {
        loop {
            let theta = pi * symmetric::<T, _>(rng);
            if uniform::<T, _>(rng) < (kappa * (theta.cos() - one)).exp() {
                return theta;
            }
        }
    }
    let tau = one + (one + T::of(4.0) * kappa * kappa).sqrt();
    let rho = (tau - (two * tau).sqrt()) / (two * kappa);
    let r = (one + rho * rho) / (two * rho);
    loop {
        let u1 = uniform::<T, _>(rng);
        let u2 = uniform_open0::<T, _>(rng);
        let z = (pi * u1).cos();
        let f = (one + r * z) / (r + z);
        let c = kappa * (r - f);
        if c * (two - c) - u2 > T::zero() || (c / u2).ln() + one - c >= T::zero() {
            let theta = f.max(-one).min(one).acos();
            return if uniform::<T, _>(rng) < T::of(0.5) { -theta } else { theta };
        }
    }
}

fn heatbath_value<T: Real, R: Rng + ?Sized>(
    config: &GaugeConfiguration<T>,
    link: LinkIndex,
    beta: T,
    rng: &mut R,
) -> GroupElement<T> {
    let group = config.group();
    let staple = config.staple_sum(link);
    match group {
        GroupLabel::U1 => {
            // weight e^{β Re(u s̄)} = e^{β|s| cos(θ − arg s)}
            let s = staple[(0, 0)];
            let k = s.norm();
            let theta = s.arg() + sample_von_mises(beta * k, rng);
            GroupElement::from_matrix_unchecked(group, ColorMatrix::diagonal(&[Complex::from_polar(T::one(), theta)]))
        }
        GroupLabel::SU2 => {
            // A sum of SU(2) matrices is k·V with V ∈ SU(2), k = sqrt(det S).
            let k = staple.determinant().re.max(T::zero()).sqrt();
            if !(k > T::tolerance(1e-12)) {
                return haar_sample(group, rng);
            }
            let v = staple.scale(T::one() / k);
            // weight e^{(β/2) Re Tr(U S†)} = e^{βk w₀} with W = U V†
            let w0 = sample_su2_x0(beta * k, rng);
            let radius = (T::one() - w0 * w0).max(T::zero()).sqrt();
            let cos_t = symmetric::<T, _>(rng);
            let sin_t = (T::one() - cos_t * cos_t).max(T::zero()).sqrt();
            let phi = T::TAU() * uniform::<T, _>(rng);
            let w = su2_from_quaternion([
                w0,
                radius * sin_t * phi.cos(),
                radius * sin_t * phi.sin(),
                radius * cos_t,
            ]);
            GroupElement::from_matrix_unchecked(group, w * v)
        }
        GroupLabel::SU3 => unreachable!("heatbath group checked by caller"),
    }
}

/// Redraws one link from its exact conditional distribution given its staple.
pub fn heatbath_update_link<T: Real, R: Rng + ?Sized>(
    config: &mut GaugeConfiguration<T>,
    link: LinkIndex,
    beta: T,
    rng: &mut R,
) -> Result<(), WilsonError> {
    Algorithm::Heatbath.check_group(config.group())?;
    let value = heatbath_value(config, link, beta, rng);
    config.set_link(link, value);
    Ok(())
}

/// Heatbath pass over every link in link-id order.
pub fn heatbath_sweep<T: Real, R: Rng + ?Sized>(
    config: &mut GaugeConfiguration<T>,
    beta: T,
    rng: &mut R,
) -> Result<(), WilsonError> {
    Algorithm::Heatbath.check_group(config.group())?;
    for id in 0..config.geometry().link_count() {
        let link = config.geometry().link_from_id(id);
        let value = heatbath_value(config, link, beta, rng);
        config.set_link(link, value);
    }
    Ok(())
}

/// Sweep over a checkerboard partition. Within each set the new link values
/// depend only on links outside the set, so each set is split into one
/// contiguous chunk per stream, updated concurrently, then written back.
/// Reproducible for a fixed number of streams.
pub fn parallel_sweep<T: Real>(
    config: &mut GaugeConfiguration<T>,
    algorithm: Algorithm,
    beta: T,
    step: T,
    hits: usize,
    partition: &[Vec<LinkIndex>],
    streams: &mut [RngStream],
) -> Result<f64, WilsonError> {
    algorithm.check_group(config.group())?;
    if streams.is_empty() {
        return Err(WilsonError::InvalidParams("parallel sweep needs at least one stream".into()));
    }
    let hits = hits.max(1);
    let mut accepted = 0usize;
    let mut visited = 0usize;
    for set in partition {
        if set.is_empty() {
            continue;
        }
        let chunk = set.len().div_ceil(streams.len());
        let snapshot = &*config;
        let updates: Vec<Vec<(LinkIndex, GroupElement<T>, usize)>> = set
            .par_chunks(chunk)
            .zip(streams.par_iter_mut())
            .map(|(links, rng)| {
                links
                    .iter()
                    .map(|&link| match algorithm {
                        Algorithm::Metropolis => {
                            let (u, a) = metropolis_value(snapshot, link, beta, step, hits, rng);
                            (link, u, a)
                        }
                        Algorithm::Heatbath => (link, heatbath_value(snapshot, link, beta, rng), hits),
                    })
                    .collect()
            })
            .collect();
        for (link, value, a) in updates.into_iter().flatten() {
            config.set_link(link, value);
            accepted += a;
            visited += hits;
        }
    }
    Ok(if visited == 0 { 1.0 } else { accepted as f64 / visited as f64 })
}
