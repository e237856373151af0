//! Two-level primitives: static Hamiltonian parameters, 2×2 complex matrices,
//! density matrices and their Bloch-vector image, and a closed-form Hermitian
//! eigensolver.

use alloc::format;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmath;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance on |R| above one before a Bloch vector is rejected.
pub const BLOCH_NORM_TOL: f64 = 1e-8;
/// Largest anti-Hermitian residue accepted in a density matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Largest |Tr ρ − 1| accepted in a density matrix.
pub const TRACE_TOL: f64 = 1e-9;
/// Eigenvalues in `[-POSITIVITY_TOL, 0)` are numerical noise; below is an error.
pub const POSITIVITY_TOL: f64 = 1e-8;
/// Eigenvalue gaps below this are reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Rotated-frame qubit Hamiltonian `H = ½(Ω σx + Δ σz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams {
    /// Rabi coupling Ω.
    pub omega: f64,
    /// Detuning Δ, the frequency unit.
    pub delta: f64,
}

impl QubitParams {
    /// Parameters in units of Δ (so `delta = 1`).
    pub fn new(omega: f64) -> Result<Self> {
        Self::with_detuning(omega, 1.0)
    }

    pub fn with_detuning(omega: f64, delta: f64) -> Result<Self> {
        let p = QubitParams { omega, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "detuning must be positive, got {}",
                self.delta
            )));
        }
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Rabi coupling must be non-negative, got {}",
                self.omega
            )));
        }
        Ok(())
    }

    /// Level splitting `E = √(Ω² + Δ²)`.
    pub fn splitting(&self) -> f64 {
        fmath::hypot(self.omega, self.delta)
    }

    /// Cosine of the cone half-angle traced by a pole state: `Δ/√(Δ²+Ω²)`.
    pub fn cos_theta(&self) -> f64 {
        self.delta / self.splitting()
    }

    /// Unitary precession period `τ = 2π/√(Δ²+Ω²)`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.splitting()
    }

    /// Field vector `h` with `H = ½ h·σ`.
    pub fn field(&self) -> [f64; 3] {
        [self.omega, 0.0, self.delta]
    }

    pub fn hamiltonian(&self) -> Matrix2 {
        (Matrix2::sigma_x().scale(self.omega) + Matrix2::sigma_z().scale(self.delta)).scale(0.5)
    }

    /// Lower eigenstate of the Hamiltonian, a stationary pure state.
    pub fn ground_state(&self) -> DensityMatrix {
        let e = self.splitting();
        BlochVector::new(-self.omega / e, 0.0, -self.delta / e)
            .to_density()
            .expect("unit vector")
    }
}

/// Dense complex 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix2 {
    pub const ZERO: Matrix2 = Matrix2([[ZERO, ZERO], [ZERO, ZERO]]);

    pub fn identity() -> Self {
        Matrix2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn sigma_x() -> Self {
        Matrix2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn sigma_y() -> Self {
        Matrix2([[ZERO, -I], [I, ZERO]])
    }

    pub fn sigma_z() -> Self {
        Matrix2([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = &self.0;
        Matrix2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        let m = &self.0;
        Matrix2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Matrix2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Matrix2) -> Matrix2 {
        *self * *other - *other * *self
    }

    /// Largest entry of `|M − M†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = *self - self.adjoint();
        d.max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Entries flattened as `[re00, im00, re01, im01, re10, im10, re11, im11]`.
    pub fn to_reals(&self) -> [f64; 8] {
        let m = &self.0;
        [
            m[0][0].re, m[0][0].im, m[0][1].re, m[0][1].im, m[1][0].re, m[1][0].im, m[1][1].re,
            m[1][1].im,
        ]
    }

    pub fn from_reals(r: &[f64; 8]) -> Self {
        Matrix2([
            [Complex64::new(r[0], r[1]), Complex64::new(r[2], r[3])],
            [Complex64::new(r[4], r[5]), Complex64::new(r[6], r[7])],
        ])
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, o: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &o.0);
        Matrix2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, o: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &o.0);
        Matrix2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &o.0);
        Matrix2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// Real image of a qubit state, `ρ = ½(I + R·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    /// `|0⟩⟨0|`.
    pub const NORTH: BlochVector = BlochVector::new(0.0, 0.0, 1.0);

    pub fn from_array(a: [f64; 3]) -> Self {
        BlochVector::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        fmath::sqrt(self.norm_sqr())
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn to_density(self) -> Result<DensityMatrix> {
        density_from_bloch(self)
    }
}

/// Qubit density matrix stored through its Hermitian parameters: the two real
/// diagonal entries and the upper off-diagonal entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub rho00: f64,
    pub rho11: f64,
    pub rho01: Complex64,
}

impl DensityMatrix {
    /// Maximally mixed state `I/2`.
    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            rho00: 0.5,
            rho11: 0.5,
            rho01: ZERO,
        }
    }

    /// `|0⟩⟨0|`, the north pole.
    pub fn ground_z() -> Self {
        DensityMatrix {
            rho00: 1.0,
            rho11: 0.0,
            rho01: ZERO,
        }
    }

    /// Projector onto a (not necessarily normalized) state vector.
    pub fn pure(psi: [Complex64; 2]) -> Result<Self> {
        let n = psi[0].norm_sqr() + psi[1].norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        Ok(DensityMatrix {
            rho00: psi[0].norm_sqr() / n,
            rho11: psi[1].norm_sqr() / n,
            rho01: psi[0] * psi[1].conj() / n,
        })
    }

    /// Accepts a general matrix, checking Hermiticity, trace and positivity.
    pub fn from_matrix(m: &Matrix2) -> Result<Self> {
        let herm = m.hermiticity_error();
        if !(herm <= HERMITICITY_TOL) {
            return Err(Error::InvalidState(format!(
                "matrix is not Hermitian (residue {herm:e})"
            )));
        }
        let rho = DensityMatrix {
            rho00: m.0[0][0].re,
            rho11: m.0[1][1].re,
            rho01: (m.0[0][1] + m.0[1][0].conj()) * 0.5,
        };
        rho.validate()?;
        Ok(rho)
    }

    pub fn to_matrix(&self) -> Matrix2 {
        Matrix2([
            [Complex64::new(self.rho00, 0.0), self.rho01],
            [self.rho01.conj(), Complex64::new(self.rho11, 0.0)],
        ])
    }

    pub fn trace(&self) -> f64 {
        self.rho00 + self.rho11
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.rho00 * self.rho00 + self.rho11 * self.rho11 + 2.0 * self.rho01.norm_sqr()
    }

    pub fn bloch(&self) -> BlochVector {
        bloch_from_density(self)
    }

    pub fn eigen(&self) -> EigenPair {
        eig_hermitian_2x2(self)
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = 0.5 * (self.rho00 + self.rho11);
        let h = 0.5 * (self.rho00 - self.rho11);
        m - fmath::hypot(h, self.rho01.norm())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho00.is_finite() && self.rho11.is_finite() && self.rho01.is_finite()) {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let tr = self.trace();
        if !((tr - 1.0).abs() <= TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let low = self.min_eigenvalue();
        if low < -POSITIVITY_TOL {
            return Err(Error::NegativeEigenvalue { value: low });
        }
        Ok(())
    }
}

/// `ρ = ½(I + R·σ)`.
pub fn density_from_bloch(r: BlochVector) -> Result<DensityMatrix> {
    let n = r.norm();
    if !(n <= 1.0 + BLOCH_NORM_TOL) {
        return Err(Error::InvalidState(format!(
            "Bloch vector length {n} exceeds 1"
        )));
    }
    Ok(DensityMatrix {
        rho00: 0.5 * (1.0 + r.z),
        rho11: 0.5 * (1.0 - r.z),
        rho01: Complex64::new(0.5 * r.x, -0.5 * r.y),
    })
}

/// `R_i = Tr(ρ σ_i)`.
pub fn bloch_from_density(rho: &DensityMatrix) -> BlochVector {
    BlochVector {
        x: 2.0 * rho.rho01.re,
        y: -2.0 * rho.rho01.im,
        z: rho.rho00 - rho.rho11,
    }
}

/// Spectral decomposition of a 2×2 Hermitian matrix.
///
/// Eigenvalues are sorted descending. Each eigenvector has unit norm and its
/// largest-magnitude component is real and positive, so repeated calls give
/// identical vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub eps1: f64,
    pub eps2: f64,
    pub v1: [Complex64; 2],
    pub v2: [Complex64; 2],
    /// Set when `|eps1 − eps2| < 1e-12`; the basis is then arbitrary.
    pub degenerate: bool,
}

impl EigenPair {
    pub fn gap(&self) -> f64 {
        self.eps1 - self.eps2
    }

    pub fn value(&self, k: usize) -> f64 {
        if k == 0 {
            self.eps1
        } else {
            self.eps2
        }
    }

    pub fn vector(&self, k: usize) -> [Complex64; 2] {
        if k == 0 {
            self.v1
        } else {
            self.v2
        }
    }
}

pub fn eig_hermitian_2x2(rho: &DensityMatrix) -> EigenPair {
    let mean = 0.5 * (rho.rho00 + rho.rho11);
    let half = 0.5 * (rho.rho00 - rho.rho11);
    let b = rho.rho01;
    let r = fmath::hypot(half, b.norm());
    if 2.0 * r < DEGENERACY_TOL {
        return EigenPair {
            eps1: mean + r,
            eps2: mean - r,
            v1: [ONE, ZERO],
            v2: [ZERO, ONE],
            degenerate: true,
        };
    }
    // Pick the branch without cancellation in the dominant component.
    let v1 = if half >= 0.0 {
        [Complex64::new(half + r, 0.0), b.conj()]
    } else {
        [b, Complex64::new(r - half, 0.0)]
    };
    let v1 = fix_phase(normalize(v1));
    let v2 = fix_phase([-v1[1].conj(), v1[0].conj()]);
    EigenPair {
        eps1: mean + r,
        eps2: mean - r,
        v1,
        v2,
        degenerate: false,
    }
}

fn normalize(v: [Complex64; 2]) -> [Complex64; 2] {
    let n = fmath::hypot(v[0].norm(), v[1].norm());
    [v[0] / n, v[1] / n]
}

fn fix_phase(v: [Complex64; 2]) -> [Complex64; 2] {
    let k = if v[0].norm() >= v[1].norm() { 0 } else { 1 };
    let norm = v[k].norm();
    let phase = v[k].conj() / norm;
    let mut out = [v[0] * phase, v[1] * phase];
    out[k] = Complex64::new(norm, 0.0);
    out
}

/// `⟨a|b⟩`.
pub fn inner(a: &[Complex64; 2], b: &[Complex64; 2]) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}
