//! Time-dependent master-equation coefficients.
//!
//! Each coefficient is a one-sided integral of a channel's correlation
//! against a Heisenberg-picture Pauli component evaluated at negative lag:
//!
//! ```text
//! D_xx, f_xy, f_xz (t) = ∫₀ᵗ ds Φ₁(s) · (X₁, Y₁, Z₁)(−s)
//! f_zx, f_zy, D_zz (t) = ∫₀ᵗ ds Φ₀(s) · (X₀, Y₀, Z₀)(−s)
//! ```
//!
//! The two channels are taken as uncorrelated, so no cross terms appear.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fmath;
use crate::kernels::{Channel, NoiseModel, OneOverFRegime};
use crate::quadrature::{integrate, QuadConfig};
use crate::qubit::QubitParams;

/// Minimum number of grid points in a [`CoeffTable`].
pub const MIN_TABLE_POINTS: usize = 64;

/// Components of the Heisenberg-evolved σx (`*1`) and σz (`*0`) along the
/// Schrödinger-picture Pauli basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergCoeffs {
    pub x1: f64,
    pub y1: f64,
    pub z1: f64,
    pub x0: f64,
    pub y0: f64,
    pub z0: f64,
}

/// Closed forms with argument `2t√(Ω²+Δ²)`. `Y₀`, `Y₁` are odd in `t`, the
/// rest even.
pub fn heisenberg_functions(p: &QubitParams, t: f64) -> HeisenbergCoeffs {
    let e2 = p.omega * p.omega + p.delta * p.delta;
    let e = fmath::sqrt(e2);
    let (s, c) = fmath::sincos(2.0 * t * e);
    let cross = p.delta * p.omega * (1.0 - c) / e2;
    HeisenbergCoeffs {
        x1: (p.omega * p.omega + p.delta * p.delta * c) / e2,
        y1: p.delta * s / e,
        z1: cross,
        x0: cross,
        y0: -p.omega * s / e,
        z0: 1.0 - p.omega * p.omega * (1.0 - c) / e2,
    }
}

/// Normal (`D`) and anomalous (`f`) diffusion coefficients at one time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiffusionCoeffs {
    pub dxx: f64,
    pub fxy: f64,
    pub fxz: f64,
    pub fzx: f64,
    pub fzy: f64,
    pub dzz: f64,
}

impl DiffusionCoeffs {
    pub const ZERO: DiffusionCoeffs = DiffusionCoeffs {
        dxx: 0.0,
        fxy: 0.0,
        fxz: 0.0,
        fzx: 0.0,
        fzy: 0.0,
        dzz: 0.0,
    };

    /// Order: `dxx, fxy, fxz, fzx, fzy, dzz`.
    pub fn to_array(self) -> [f64; 6] {
        [self.dxx, self.fxy, self.fxz, self.fzx, self.fzy, self.dzz]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        DiffusionCoeffs {
            dxx: a[0],
            fxy: a[1],
            fxz: a[2],
            fzx: a[3],
            fzy: a[4],
            dzz: a[5],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

fn delta_coeffs(n: &NoiseModel) -> Option<DiffusionCoeffs> {
    match *n {
        NoiseModel::Delta {
            gamma0,
            gamma1,
            kbt,
        } => Some(DiffusionCoeffs {
            dxx: gamma1 * kbt,
            dzz: gamma0 * kbt,
            ..DiffusionCoeffs::ZERO
        }),
        _ => None,
    }
}

/// The six coefficient integrands at lag `s`, in [`DiffusionCoeffs`] order.
///
/// Returns `None` for the delta model. Non-finite entries flag a kernel
/// evaluated outside its domain (the zero-temperature 1/f kernel at `s = 0`).
pub fn integrand(p: &QubitParams, n: &NoiseModel, s: f64) -> Option<[f64; 6]> {
    let h = heisenberg_functions(p, -s);
    let phi1 = n.correlation(Channel::Transverse, s)?.unwrap_or(f64::NAN);
    let phi0 = n.correlation(Channel::Longitudinal, s)?.unwrap_or(f64::NAN);
    Some([
        phi1 * h.x1,
        phi1 * h.y1,
        phi1 * h.z1,
        phi0 * h.x0,
        phi0 * h.y0,
        phi0 * h.z0,
    ])
}

fn channel_integrand(p: &QubitParams, n: &NoiseModel, ch: Channel, s: f64) -> [f64; 3] {
    let h = heisenberg_functions(p, -s);
    let phi = match n.correlation(ch, s) {
        Some(Ok(v)) => v,
        _ => f64::NAN,
    };
    match ch {
        Channel::Transverse => [phi * h.x1, phi * h.y1, phi * h.z1],
        Channel::Longitudinal => [phi * h.x0, phi * h.y0, phi * h.z0],
    }
}

/// `∫ₐᵇ` of the six integrands, each channel on its own adaptive mesh seeded
/// with panels no wider than the shorter of the kernel scale and a quarter
/// of the Heisenberg-function period.
fn integrate_span(
    p: &QubitParams,
    n: &NoiseModel,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<[f64; 6]> {
    let mut out = [0.0; 6];
    let period = PI / p.splitting();
    for (offset, ch) in [(0usize, Channel::Transverse), (3, Channel::Longitudinal)] {
        let upper = n.support(ch).map_or(b, |cut| b.min(cut));
        if upper <= a {
            continue;
        }
        let width = (0.25 * period).min(n.correlation_scale(ch));
        let panels = fmath::ceil((upper - a) / width).min(100_000.0) as usize;
        let breaks: Vec<f64> = (1..panels)
            .map(|i| a + (upper - a) * i as f64 / panels as f64)
            .collect();
        let r = integrate(|s| channel_integrand(p, n, ch, s), a, upper, &breaks, cfg)?;
        out[offset..offset + 3].copy_from_slice(&r.value);
    }
    Ok(out)
}

/// Coefficients at time `t` by direct adaptive quadrature.
pub fn diffusion_coefficients(p: &QubitParams, n: &NoiseModel, t: f64) -> Result<DiffusionCoeffs> {
    diffusion_coefficients_with(p, n, t, &QuadConfig::default())
}

pub fn diffusion_coefficients_with(
    p: &QubitParams,
    n: &NoiseModel,
    t: f64,
    cfg: &QuadConfig,
) -> Result<DiffusionCoeffs> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "coefficient time must be finite and non-negative, got {t}"
        )));
    }
    if let Some(c) = delta_coeffs(n) {
        return Ok(c);
    }
    if t == 0.0 {
        return Ok(DiffusionCoeffs::ZERO);
    }
    integrate_span(p, n, 0.0, t, cfg).map(DiffusionCoeffs::from_array)
}

/// Coefficients tabulated on a uniform grid over `[0, t_end]` and
/// reconstructed by cubic Hermite interpolation. Slopes at the nodes are the
/// exact integrands, so the interpolant is C¹.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    params: QubitParams,
    noise: NoiseModel,
    step: f64,
    t_end: f64,
    values: Vec<[f64; 6]>,
    slopes: Vec<[f64; 6]>,
    // Integrand diverges at s = 0; the first cell falls back to quadrature.
    singular_origin: bool,
}

impl CoeffTable {
    /// Interpolation order of [`CoeffTable::eval`].
    pub const ORDER: usize = 3;

    /// Grid size giving `per_cycle` points per precession period.
    pub fn points_for(p: &QubitParams, t_end: f64, per_cycle: usize) -> usize {
        let n = fmath::ceil(t_end / p.period() * per_cycle as f64) as usize + 1;
        n.max(MIN_TABLE_POINTS)
    }

    pub fn params(&self) -> &QubitParams {
        &self.params
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn time(&self, i: usize) -> f64 {
        if i + 1 == self.values.len() {
            self.t_end
        } else {
            i as f64 * self.step
        }
    }

    /// Tabulated coefficients at grid point `i`.
    pub fn row(&self, i: usize) -> DiffusionCoeffs {
        DiffusionCoeffs::from_array(self.values[i])
    }

    /// `(t, coefficients)` for every grid point.
    pub fn rows(&self) -> impl Iterator<Item = (f64, DiffusionCoeffs)> + '_ {
        (0..self.len()).map(|i| (self.time(i), self.row(i)))
    }

    /// Interpolated coefficients. Times past `t_end` extrapolate the last cell.
    pub fn eval(&self, t: f64) -> DiffusionCoeffs {
        if let Some(c) = delta_coeffs(&self.noise) {
            return c;
        }
        if t <= 0.0 {
            return DiffusionCoeffs::ZERO;
        }
        let last = self.values.len() - 2;
        let cell = (fmath::floor(t / self.step) as usize).min(last);
        if cell == 0 && self.singular_origin {
            return diffusion_coefficients(&self.params, &self.noise, t)
                .unwrap_or(DiffusionCoeffs::from_array([f64::NAN; 6]));
        }
        let t0 = self.time(cell);
        let h = self.time(cell + 1) - t0;
        let u = (t - t0) / h;
        let u2 = u * u;
        let u3 = u2 * u;
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        let (y0, y1) = (&self.values[cell], &self.values[cell + 1]);
        let (m0, m1) = (&self.slopes[cell], &self.slopes[cell + 1]);
        let mut out = [0.0; 6];
        for k in 0..6 {
            out[k] = h00 * y0[k] + h10 * h * m0[k] + h01 * y1[k] + h11 * h * m1[k];
        }
        DiffusionCoeffs::from_array(out)
    }
}

/// Tabulate the coefficients on `npts` uniform points over `[0, t_end]`.
///
/// Node values accumulate per-cell adaptive integrals, so construction cost
/// is linear in `npts`.
pub fn build_coeff_table(
    p: &QubitParams,
    n: &NoiseModel,
    t_end: f64,
    npts: usize,
) -> Result<CoeffTable> {
    p.validate()?;
    n.validate()?;
    if npts < MIN_TABLE_POINTS {
        return Err(Error::InvalidParameter(format!(
            "coefficient table needs at least {MIN_TABLE_POINTS} points, got {npts}"
        )));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "table end time must be positive, got {t_end}"
        )));
    }
    let step = t_end / (npts - 1) as f64;
    let mut table = CoeffTable {
        params: *p,
        noise: *n,
        step,
        t_end,
        values: Vec::with_capacity(npts),
        slopes: Vec::with_capacity(npts),
        singular_origin: matches!(
            n,
            NoiseModel::OneOverF {
                regime: OneOverFRegime::ZeroT,
                ..
            }
        ),
    };
    if let Some(c) = delta_coeffs(n) {
        table.values.resize(npts, c.to_array());
        table.slopes.resize(npts, [0.0; 6]);
        return Ok(table);
    }

    let cfg = QuadConfig::default();
    let mut acc = [0.0; 6];
    table.values.push(acc);
    table
        .slopes
        .push(integrand(p, n, 0.0).expect("non-delta model"));
    for i in 1..npts {
        let node = |j: usize| {
            if j + 1 == npts {
                t_end
            } else {
                j as f64 * step
            }
        };
        let (a, b) = (node(i - 1), node(i));
        let inc = integrate_span(p, n, a, b, &cfg)?;
        for k in 0..6 {
            acc[k] += inc[k];
        }
        table.values.push(acc);
        table
            .slopes
            .push(integrand(p, n, b).expect("non-delta model"));
    }
    Ok(table)
}
