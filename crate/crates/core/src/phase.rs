//! Mixed-state geometric phase over one precession period.
//!
//! ```text
//! Φ = arg Σ_k √(ε_k(0) ε_k(τ)) ⟨Ψ_k(0)|Ψ_k(τ)⟩ exp(−∫₀^τ ⟨Ψ_k|∂_t Ψ_k⟩ dt)
//! ```
//!
//! Eigenvectors are followed sample to sample by maximal overlap and each is
//! re-phased so its overlap with the previous one is real and positive. In
//! that parallel-transport gauge the exponential factor is one, so only the
//! endpoint overlaps remain.
//!
//! Orientation: for the unitary cone traced from the north pole this
//! convention gives `Φ = −π(1 − cos ϑ)`. [`GpResult::ratio`] divides by the
//! reference with that sign, so it is `+1` in the unitary limit.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::dissipators::CoeffTable;
use crate::error::{Error, Result};
use crate::evolver::{evolve, evolve_with_table, EvolveConfig, Trajectory};
use crate::kernels::NoiseModel;
use crate::qubit::{inner, DensityMatrix, EigenPair, QubitParams, DEGENERACY_TOL, POSITIVITY_TOL};

/// Below this minimum gap the result is flagged as degraded.
pub const GAP_WARNING: f64 = 1e-10;
/// Largest change in Φ under halving of the sample count for a converged result.
pub const CONVERGENCE_TOL: f64 = 1e-6;
/// Relative distance allowed between the last used sample and τ.
pub const PERIOD_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpResult {
    /// Geometric phase in (−π, π].
    pub phi: f64,
    /// Unitary reference `π(1 − cos ϑ)`.
    pub phi_unitary: f64,
    /// `Φ / (−phi_unitary)`; NaN when the reference vanishes.
    pub ratio: f64,
    /// Smallest eigenvalue gap along the path.
    pub min_gap: f64,
    /// Φ moved by less than [`CONVERGENCE_TOL`] when every other sample was dropped.
    pub converged: bool,
    /// Minimum gap fell below [`GAP_WARNING`].
    pub degraded: bool,
    /// Number of times overlap tracking exchanged the eigenvalue ordering.
    pub branch_swaps: usize,
}

/// Phase and diagnostics of a single discretized path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPhase {
    pub phi: f64,
    pub min_gap: f64,
    pub degraded: bool,
    pub branch_swaps: usize,
}

/// Berry phase of the closed unitary cone, `π(1 − Δ/√(Δ²+Ω²))`.
pub fn unitary_berry_phase(p: &QubitParams) -> f64 {
    PI * (1.0 - p.cos_theta())
}

fn clamp_eigenvalue(e: f64) -> Result<f64> {
    if e < -POSITIVITY_TOL {
        return Err(Error::NegativeEigenvalue { value: e });
    }
    Ok(e.max(0.0))
}

/// Phase of a path given its spectral decompositions, first to last sample.
///
/// The eigenvector phases on input are arbitrary.
pub fn phase_from_eigen(path: &[EigenPair]) -> Result<PathPhase> {
    let (first, last) = match path {
        [f, .., l] => (f, l),
        _ => {
            return Err(Error::UndefinedPhase(
                "a path needs at least two samples".into(),
            ))
        }
    };
    if first.gap() < DEGENERACY_TOL || last.gap() < DEGENERACY_TOL {
        return Err(Error::UndefinedPhase(
            "degenerate spectrum at an endpoint".into(),
        ));
    }

    let start = [first.v1, first.v2];
    let eps0 = [clamp_eigenvalue(first.eps1)?, clamp_eigenvalue(first.eps2)?];
    let mut vecs = start;
    // Which eigenvalue slot of the current sample each branch occupies.
    let mut slot = [0usize, 1];
    let mut min_gap = first.gap();
    let mut swaps = 0usize;

    for e in &path[1..] {
        clamp_eigenvalue(e.eps2)?;
        min_gap = min_gap.min(e.gap());
        let (w0, w1) = (e.v1, e.v2);
        let keep = inner(&vecs[0], &w0).norm_sqr() + inner(&vecs[1], &w1).norm_sqr();
        let cross = inner(&vecs[0], &w1).norm_sqr() + inner(&vecs[1], &w0).norm_sqr();
        let (next, s) = if cross > keep {
            ([w1, w0], [1, 0])
        } else {
            ([w0, w1], [0, 1])
        };
        if s != slot {
            swaps += 1;
        }
        slot = s;
        for k in 0..2 {
            let ov = inner(&vecs[k], &next[k]);
            let m = ov.norm();
            let gauge = if m > 0.0 {
                ov.conj() / m
            } else {
                Complex64::new(1.0, 0.0)
            };
            vecs[k] = [next[k][0] * gauge, next[k][1] * gauge];
        }
    }

    let eps_end = [
        clamp_eigenvalue(last.value(slot[0]))?,
        clamp_eigenvalue(last.value(slot[1]))?,
    ];
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..2 {
        let w = crate::fmath::sqrt(eps0[k] * eps_end[k]);
        sum += inner(&start[k], &vecs[k]) * w;
    }
    if !(sum.norm() > 0.0) {
        return Err(Error::UndefinedPhase(
            "branch sum vanishes at the end of the path".into(),
        ));
    }
    Ok(PathPhase {
        phi: sum.arg(),
        min_gap: min_gap.max(0.0),
        degraded: min_gap <= GAP_WARNING,
        branch_swaps: swaps,
    })
}

/// Phase of a path of density matrices.
pub fn phase_from_states(states: &[DensityMatrix]) -> Result<PathPhase> {
    let eig: Vec<EigenPair> = states.iter().map(|s| s.eigen()).collect();
    phase_from_eigen(&eig)
}

/// Difference of two phases wrapped into (−π, π].
pub fn phase_difference(a: f64, b: f64) -> f64 {
    let d = libm::remainder(a - b, 2.0 * PI);
    if d <= -PI {
        d + 2.0 * PI
    } else {
        d
    }
}

/// Index of the sample at the period τ, which must be present.
fn period_index(traj: &Trajectory) -> Result<usize> {
    let tau = traj.params.period();
    if traj.t_end() < tau * (1.0 - PERIOD_MATCH_TOL) {
        return Err(Error::InvalidParameter(format!(
            "trajectory ends at {} before one period {tau}",
            traj.t_end()
        )));
    }
    let (t, _) = traj.state_near(tau);
    if (t - tau).abs() > PERIOD_MATCH_TOL * tau {
        return Err(Error::InvalidParameter(format!(
            "no sample at the period {tau}; nearest is {t}"
        )));
    }
    Ok(traj
        .times
        .iter()
        .position(|&x| x == t)
        .expect("sample located above"))
}

/// Geometric phase over `[0, τ]` of a trajectory spanning at least one period.
pub fn geometric_phase(traj: &Trajectory) -> Result<GpResult> {
    let end = period_index(traj)?;
    let eig: Vec<EigenPair> = traj.states[..=end].iter().map(|s| s.eigen()).collect();
    let full = phase_from_eigen(&eig)?;

    let mut half: Vec<EigenPair> = eig.iter().step_by(2).copied().collect();
    if end % 2 == 1 {
        half.push(eig[end]);
    }
    let converged = match phase_from_eigen(&half) {
        Ok(h) => phase_difference(full.phi, h.phi).abs() < CONVERGENCE_TOL,
        Err(_) => false,
    };

    let phi_unitary = unitary_berry_phase(&traj.params);
    let ratio = if phi_unitary != 0.0 {
        -full.phi / phi_unitary
    } else {
        f64::NAN
    };
    Ok(GpResult {
        phi: full.phi,
        phi_unitary,
        ratio,
        min_gap: full.min_gap,
        converged,
        degraded: full.degraded,
        branch_swaps: full.branch_swaps,
    })
}

/// Evolve from `|0⟩⟨0|` and extract the phase.
pub fn gp_ratio(p: &QubitParams, n: &NoiseModel, cfg: &EvolveConfig) -> Result<GpResult> {
    gp_ratio_from(p, n, &DensityMatrix::ground_z(), cfg)
}

pub fn gp_ratio_from(
    p: &QubitParams,
    n: &NoiseModel,
    rho0: &DensityMatrix,
    cfg: &EvolveConfig,
) -> Result<GpResult> {
    geometric_phase(&evolve(p, n, rho0, cfg)?)
}

/// As [`gp_ratio_from`], reusing a coefficient table.
pub fn gp_ratio_with_table(
    table: &CoeffTable,
    rho0: &DensityMatrix,
    cfg: &EvolveConfig,
) -> Result<GpResult> {
    geometric_phase(&evolve_with_table(table, rho0, cfg)?)
}
