//! Lattice gauge theory toolkit: Wilson-action Monte Carlo for U(1), SU(2)
//! and SU(3), a truncated U(1) Kogut–Susskind Hamiltonian, fermion
//! operators on fixed backgrounds, a quenched-background pipeline with a
//! bit-exact configuration format, and benchmarking utilities.
//!
//! Numerical modules are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar for the common double-precision case.

pub mod bench;
pub mod eigen;
pub mod fermion;
pub mod group;
pub mod hybrid;
pub mod hamiltonian;
pub mod lattice;
pub mod rng;
pub mod scalar;
pub mod sparse;
pub mod wilson;

pub use group::{AlgebraElement, ColorMatrix, GroupElement, GroupError, GroupLabel};
pub use lattice::{GeometryError, LatticeGeometry, LinkIndex, Orientation, PlaquetteIndex};
pub use rng::{rng_stream, worker_stream, RngStream};
pub use scalar::{Cplx, Real};
pub use wilson::{GaugeConfiguration, McParams, WilsonError};

pub type GroupElementF64 = GroupElement<f64>;
pub type GroupElementF32 = GroupElement<f32>;
pub type GaugeConfigurationF64 = GaugeConfiguration<f64>;
pub type GaugeConfigurationF32 = GaugeConfiguration<f32>;
