//! Numerical core for a driven two-level system under longitudinal and
//! transverse environmental noise.
//!
//! The crate integrates a second-order (time-dependent coefficient) master
//! equation for the reduced density matrix, evaluates the noise coefficients
//! by quadrature against Gaussian, delta-correlated and 1/f correlation
//! kernels, and extracts the mixed-state geometric phase accumulated over one
//! precession cycle.
//!
//! Everything here is `no_std` (with `alloc`). File formats, sweeps and the
//! command line live in the `berrynoise` crate.
//!
//! Units: the detuning Δ is the frequency unit and is 1 unless set otherwise;
//! times are in units of 1/Δ.

#![no_std]
// `!(x <= tol)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

mod error;
mod fmath;

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod dissipators;
pub mod evolver;
pub mod kernels;
pub mod phase;
pub mod quadrature;
pub mod qubit;
pub mod special;

pub use dissipators::{
    build_coeff_table, diffusion_coefficients, heisenberg_functions, CoeffTable, DiffusionCoeffs,
    HeisenbergCoeffs,
};
pub use error::{Error, InvariantKind, Result};
pub use evolver::{
    bloch_rhs, evolve, evolve_with_table, master_rhs, EvolveConfig, Integrator, Representation,
    Trajectory,
};
pub use kernels::{kernel_gaussian, kernel_oneoverf, Channel, NoiseModel, OneOverFRegime};
pub use phase::{
    geometric_phase, gp_ratio, gp_ratio_from, gp_ratio_with_table, unitary_berry_phase, GpResult,
};
pub use qubit::{
    bloch_from_density, density_from_bloch, eig_hermitian_2x2, BlochVector, DensityMatrix,
    EigenPair, Matrix2, QubitParams,
};
pub use special::{cosint, sinint, EULER_GAMMA};
