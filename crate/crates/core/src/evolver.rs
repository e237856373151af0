//! Master-equation right-hand side and time stepping.
//!
//! ```text
//! ρ̇ = −i[H, ρ] − D_xx[σx,[σx,ρ]] − f_xy[σx,[σy,ρ]] − f_xz[σx,[σz,ρ]]
//!            − f_zx[σz,[σx,ρ]] − f_zy[σz,[σy,ρ]] − D_zz[σz,[σz,ρ]]
//! ```
//!
//! In Bloch form (`ρ = ½(I + R·σ)`, `h = (Ω, 0, Δ)`):
//!
//! ```text
//! Ṙ = h × R − 4D_xx (0, R_y, R_z) − 4D_zz (R_x, R_y, 0)
//!       + 4 (f_zx R_z, f_xy R_x + f_zy R_z, f_xz R_x)
//! ```

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dissipators::{build_coeff_table, diffusion_coefficients, CoeffTable, DiffusionCoeffs};
use crate::error::{Error, InvariantKind, Result};
use crate::fmath;
use crate::kernels::NoiseModel;
use crate::qubit::{
    BlochVector, DensityMatrix, Matrix2, QubitParams, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL,
};

/// Default RK4 steps per precession period.
pub const DEFAULT_STEPS_PER_CYCLE: usize = 10_000;
/// Default coefficient-table density.
pub const DEFAULT_TABLE_POINTS_PER_CYCLE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrator {
    /// Classical fixed-step fourth-order Runge–Kutta.
    Rk4,
    /// Adaptive Dormand–Prince 5(4). `dt` is then the initial step.
    Dopri5 { rtol: f64, atol: f64 },
}

/// State vector the integrator advances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// The full complex 2×2 density matrix.
    Matrix,
    /// The real Bloch vector.
    Bloch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub t_end: f64,
    pub dt: f64,
    /// Record every n-th step. The final state is always recorded.
    pub sample_every: usize,
    /// Interpolate coefficients from a [`CoeffTable`] instead of direct quadrature.
    pub use_table: bool,
    pub integrator: Integrator,
    pub representation: Representation,
    pub table_points_per_cycle: usize,
}

impl EvolveConfig {
    /// `cycles` precession periods at `steps_per_cycle` RK4 steps each.
    pub fn for_cycles(p: &QubitParams, cycles: f64, steps_per_cycle: usize) -> Self {
        let tau = p.period();
        EvolveConfig {
            t_end: cycles * tau,
            dt: tau / steps_per_cycle as f64,
            sample_every: 1,
            use_table: true,
            integrator: Integrator::Rk4,
            representation: Representation::Matrix,
            table_points_per_cycle: DEFAULT_TABLE_POINTS_PER_CYCLE,
        }
    }

    /// One period at the default resolution.
    pub fn one_cycle(p: &QubitParams) -> Self {
        Self::for_cycles(p, 1.0, DEFAULT_STEPS_PER_CYCLE)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.into()));
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end must be positive and finite");
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be positive and finite");
        }
        if self.sample_every == 0 {
            return bad("sample_every must be at least 1");
        }
        if let Integrator::Dopri5 { rtol, atol } = self.integrator {
            if !(rtol > 0.0 && atol > 0.0) {
                return bad("adaptive tolerances must be positive");
            }
        }
        if self.use_table && self.table_points_per_cycle == 0 {
            return bad("table_points_per_cycle must be positive");
        }
        Ok(())
    }

    /// Number of fixed steps; the step is shrunk so the last lands on `t_end`.
    pub fn steps(&self) -> usize {
        (fmath::ceil(self.t_end / self.dt * (1.0 - 1e-12)) as usize).max(1)
    }
}

/// Time-sampled solution. `times[0] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub params: QubitParams,
    pub noise: NoiseModel,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states
            .last()
            .expect("trajectory holds the initial state")
    }

    /// Sample closest to `t`.
    pub fn state_near(&self, t: f64) -> (f64, &DensityMatrix) {
        let i = match self.times.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) if i == self.times.len() => i - 1,
            Err(i) => {
                if t - self.times[i - 1] <= self.times[i] - t {
                    i - 1
                } else {
                    i
                }
            }
        };
        (self.times[i], &self.states[i])
    }
}

/// Matrix form of the master-equation generator.
pub fn master_rhs(p: &QubitParams, c: &DiffusionCoeffs, rho: &Matrix2) -> Matrix2 {
    let (sx, sy, sz) = (Matrix2::sigma_x(), Matrix2::sigma_y(), Matrix2::sigma_z());
    let unitary = p
        .hamiltonian()
        .commutator(rho)
        .scale_complex(Complex64::new(0.0, -1.0));
    let cx = sx.commutator(rho);
    let cy = sy.commutator(rho);
    let cz = sz.commutator(rho);
    let on_x = sx.commutator(&(cx.scale(c.dxx) + cy.scale(c.fxy) + cz.scale(c.fxz)));
    let on_z = sz.commutator(&(cx.scale(c.fzx) + cy.scale(c.fzy) + cz.scale(c.dzz)));
    unitary - on_x - on_z
}

/// Real 3×3 generator `A` with `Ṙ = A R`.
pub fn bloch_generator(p: &QubitParams, c: &DiffusionCoeffs) -> [[f64; 3]; 3] {
    let (om, de) = (p.omega, p.delta);
    [
        [-4.0 * c.dzz, -de, 4.0 * c.fzx],
        [de + 4.0 * c.fxy, -4.0 * (c.dxx + c.dzz), -om + 4.0 * c.fzy],
        [4.0 * c.fxz, om, -4.0 * c.dxx],
    ]
}

/// Bloch form of the master-equation generator.
pub fn bloch_rhs(p: &QubitParams, c: &DiffusionCoeffs, r: &BlochVector) -> BlochVector {
    let a = bloch_generator(p, c);
    let v = r.to_array();
    let row = |i: usize| a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
    BlochVector::new(row(0), row(1), row(2))
}

enum Source<'a> {
    Table(&'a CoeffTable),
    Direct(QubitParams, NoiseModel),
}

impl Source<'_> {
    fn at(&self, t: f64) -> DiffusionCoeffs {
        match self {
            Source::Table(tab) => tab.eval(t),
            Source::Direct(p, n) => diffusion_coefficients(p, n, t)
                .unwrap_or(DiffusionCoeffs::from_array([f64::NAN; 6])),
        }
    }
}

/// Integrate from `rho0` at `t = 0`.
///
/// With `use_table` a coefficient table covering `[0, t_end]` is built first;
/// use [`evolve_with_table`] to share one table between runs.
pub fn evolve(
    p: &QubitParams,
    n: &NoiseModel,
    rho0: &DensityMatrix,
    cfg: &EvolveConfig,
) -> Result<Trajectory> {
    p.validate()?;
    n.validate()?;
    cfg.validate()?;
    if cfg.use_table && !matches!(n, NoiseModel::Delta { .. }) {
        let npts = CoeffTable::points_for(p, cfg.t_end, cfg.table_points_per_cycle);
        let table = build_coeff_table(p, n, cfg.t_end, npts)?;
        return run(p, n, Source::Table(&table), rho0, cfg);
    }
    run(p, n, Source::Direct(*p, *n), rho0, cfg)
}

/// Integrate using a prebuilt table, which must cover `[0, t_end]`.
pub fn evolve_with_table(
    table: &CoeffTable,
    rho0: &DensityMatrix,
    cfg: &EvolveConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if table.t_end() < cfg.t_end * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "coefficient table ends at {} before t_end = {}",
            table.t_end(),
            cfg.t_end
        )));
    }
    let (p, n) = (*table.params(), *table.noise());
    run(&p, &n, Source::Table(table), rho0, cfg)
}

fn run(
    p: &QubitParams,
    n: &NoiseModel,
    src: Source<'_>,
    rho0: &DensityMatrix,
    cfg: &EvolveConfig,
) -> Result<Trajectory> {
    rho0.validate()?;
    let states = match cfg.representation {
        Representation::Matrix => {
            let rhs = |t: f64, y: &[f64; 8]| {
                master_rhs(p, &src.at(t), &Matrix2::from_reals(y)).to_reals()
            };
            drive(rhs, rho0.to_matrix().to_reals(), cfg, matrix_state)?
        }
        Representation::Bloch => {
            let rhs = |t: f64, y: &[f64; 3]| {
                bloch_rhs(p, &src.at(t), &BlochVector::from_array(*y)).to_array()
            };
            drive(rhs, rho0.bloch().to_array(), cfg, bloch_state)?
        }
    };
    let (times, states) = states.into_iter().unzip();
    Ok(Trajectory {
        times,
        states,
        params: *p,
        noise: *n,
    })
}

fn violation(t: f64, kind: InvariantKind, deviation: f64) -> Error {
    Error::Integration { t, kind, deviation }
}

fn matrix_state(t: f64, y: &[f64; 8]) -> Result<DensityMatrix> {
    if !y.iter().all(|v| v.is_finite()) {
        return Err(violation(t, InvariantKind::NonFinite, f64::NAN));
    }
    let m = Matrix2::from_reals(y);
    let herm = m.hermiticity_error();
    if herm > HERMITICITY_TOL {
        return Err(violation(t, InvariantKind::Hermiticity, herm));
    }
    let rho = DensityMatrix {
        rho00: y[0],
        rho11: y[6],
        rho01: Complex64::new(y[2], y[3]),
    };
    check_density(t, rho)
}

fn bloch_state(t: f64, y: &[f64; 3]) -> Result<DensityMatrix> {
    if !y.iter().all(|v| v.is_finite()) {
        return Err(violation(t, InvariantKind::NonFinite, f64::NAN));
    }
    let rho = DensityMatrix {
        rho00: 0.5 * (1.0 + y[2]),
        rho11: 0.5 * (1.0 - y[2]),
        rho01: Complex64::new(0.5 * y[0], -0.5 * y[1]),
    };
    check_density(t, rho)
}

fn check_density(t: f64, rho: DensityMatrix) -> Result<DensityMatrix> {
    let dev = (rho.trace() - 1.0).abs();
    if dev > TRACE_TOL {
        return Err(violation(t, InvariantKind::Trace, dev));
    }
    let low = rho.min_eigenvalue();
    if low < -POSITIVITY_TOL {
        return Err(violation(t, InvariantKind::Positivity, low));
    }
    Ok(rho)
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += h * k[i];
    }
    out
}

fn rk4_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = f(t + h, &axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    }
    out
}

fn drive<const N: usize, F, S>(
    f: F,
    y0: [f64; N],
    cfg: &EvolveConfig,
    state: S,
) -> Result<Vec<(f64, DensityMatrix)>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    S: Fn(f64, &[f64; N]) -> Result<DensityMatrix>,
{
    let steps = cfg.steps();
    let h = cfg.t_end / steps as f64;
    let time = |i: usize| {
        if i == steps {
            cfg.t_end
        } else {
            i as f64 * h
        }
    };
    let mut out = Vec::with_capacity(steps / cfg.sample_every + 2);
    out.push((0.0, state(0.0, &y0)?));
    let mut y = y0;
    match cfg.integrator {
        Integrator::Rk4 => {
            for i in 1..=steps {
                let t0 = time(i - 1);
                y = rk4_step(&f, t0, &y, time(i) - t0);
                let t = time(i);
                let rho = state(t, &y)?;
                if i % cfg.sample_every == 0 || i == steps {
                    out.push((t, rho));
                }
            }
        }
        Integrator::Dopri5 { rtol, atol } => {
            let mut stepper = Dopri5::new(rtol, atol, cfg.dt);
            let mut t = 0.0;
            let mut i = 0;
            while i < steps {
                i = (i + cfg.sample_every).min(steps);
                let target = time(i);
                y = stepper.advance(&f, t, y, target, &state)?;
                t = target;
                out.push((t, state(t, &y)?));
            }
        }
    }
    Ok(out)
}

// Dormand–Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Dopri5 {
    rtol: f64,
    atol: f64,
    h: f64,
}

impl Dopri5 {
    fn new(rtol: f64, atol: f64, h: f64) -> Self {
        Dopri5 { rtol, atol, h }
    }

    /// Step from `(t, y)` to exactly `target`, checking invariants at every
    /// accepted step.
    fn advance<const N: usize, F, S>(
        &mut self,
        f: &F,
        mut t: f64,
        mut y: [f64; N],
        target: f64,
        state: &S,
    ) -> Result<[f64; N]>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        S: Fn(f64, &[f64; N]) -> Result<DensityMatrix>,
    {
        let min_step = 1e-14 * target.max(1.0);
        while t < target {
            let last = self.h >= target - t;
            let h = if last { target - t } else { self.h };
            let mut k = [[0.0; N]; 7];
            for s in 0..7 {
                let mut ys = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    for i in 0..N {
                        ys[i] += h * DP_A[s][j] * kj[i];
                    }
                }
                k[s] = f(t + DP_C[s] * h, &ys);
            }
            let mut y5 = y;
            let mut err = 0.0f64;
            for i in 0..N {
                let mut hi = 0.0;
                let mut lo = 0.0;
                for s in 0..7 {
                    hi += DP_A[6].get(s).copied().unwrap_or(0.0) * k[s][i];
                    lo += DP_B4[s] * k[s][i];
                }
                y5[i] += h * hi;
                let scale = self.atol + self.rtol * y[i].abs().max(y5[i].abs());
                err = err.max((h * (hi - lo)).abs() / scale);
            }
            if !err.is_finite() {
                return Err(violation(t + h, InvariantKind::NonFinite, err));
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                t = if last { target } else { t + h };
                y = y5;
                state(t, &y)?;
                if !last {
                    self.h = h * factor;
                }
            } else {
                self.h = h * factor;
                if self.h < min_step {
                    return Err(Error::InvalidParameter(format!(
                        "adaptive step underflow at t = {t}"
                    )));
                }
            }
        }
        Ok(y)
    }
}
