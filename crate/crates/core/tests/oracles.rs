//! Independent reference computations for the special functions, the
//! Heisenberg closed forms and the coefficient quadrature.

mod common;

use berrynoise_core::{
    cosint, diffusion_coefficients, heisenberg_functions, sinint, NoiseModel, OneOverFRegime,
    QubitParams, EULER_GAMMA,
};
use common::{heisenberg_rotation, simpson, simpson_scalar};

const PANELS: usize = 1_000_000;

#[test]
fn euler_gamma_from_log_moment() {
    // γ = −∫₀^∞ e^{−t} ln t dt, with t = e^v.
    let g = -simpson_scalar(|v| (-(v.exp())).exp() * v * v.exp(), -40.0, 4.0, PANELS);
    assert!((g - EULER_GAMMA).abs() < 1e-12, "{g}");
}

#[test]
fn cosine_and_sine_integrals_by_quadrature() {
    for x in [0.05, 0.5, 3.0, 7.9, 8.1, 15.0, 40.0] {
        let si = simpson_scalar(|t| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, x, PANELS);
        let ci_tail = simpson_scalar(
            |t| if t == 0.0 { 0.0 } else { (t.cos() - 1.0) / t },
            0.0,
            x,
            PANELS,
        );
        let ci = EULER_GAMMA + x.ln() + ci_tail;
        assert!((sinint(x) - si).abs() < 1e-11, "Si({x})");
        assert!((cosint(x).unwrap() - ci).abs() < 1e-11, "Ci({x})");
    }
}

#[test]
fn closed_forms_are_heisenberg_rotation_at_reversed_double_time() {
    // The closed forms equal e^{iHt'}σe^{−iHt'} on (σx, σy, σz) at t' = −2t.
    for (omega, delta) in [(0.5, 1.0), (2.0, 0.3), (0.0, 1.0)] {
        let p = QubitParams::with_detuning(omega, delta).unwrap();
        for t in [-3.1, -0.2, 0.0, 0.7, 5.3] {
            let h = heisenberg_functions(&p, t);
            let sx = heisenberg_rotation(omega, delta, [1.0, 0.0, 0.0], -2.0 * t);
            let sz = heisenberg_rotation(omega, delta, [0.0, 0.0, 1.0], -2.0 * t);
            for (a, b) in [h.x1, h.y1, h.z1].iter().zip(sx) {
                assert!((a - b).abs() < 1e-13, "σx row at t={t}: {a} vs {b}");
            }
            for (a, b) in [h.x0, h.y0, h.z0].iter().zip(sz) {
                assert!((a - b).abs() < 1e-13, "σz row at t={t}: {a} vs {b}");
            }
        }
    }
}

fn oracle_kernel(n: &NoiseModel, transverse: bool, s: f64) -> f64 {
    match *n {
        NoiseModel::Gaussian {
            gamma0,
            gamma1,
            alpha0,
            alpha1,
        } => {
            let (g, a) = if transverse {
                (gamma1, alpha1)
            } else {
                (gamma0, alpha0)
            };
            g * (-(a * s) * (a * s)).exp()
        }
        NoiseModel::OneOverF {
            gamma,
            lambda,
            regime,
        } => match regime {
            OneOverFRegime::ZeroT => -gamma * lambda * cosint(lambda * s).unwrap(),
            OneOverFRegime::HighT { kbt } => {
                let x = lambda * s;
                kbt * gamma * (x.cos() + x * (sinint(x) - std::f64::consts::FRAC_PI_2))
            }
        },
        NoiseModel::Delta { .. } => unreachable!(),
    }
}

fn oracle_coefficients(p: &QubitParams, n: &NoiseModel, t: f64) -> [f64; 6] {
    let (om, de) = (p.omega, p.delta);
    let e2 = om * om + de * de;
    let e = e2.sqrt();
    let rows = |s: f64| {
        let arg = -2.0 * s * e;
        let (sn, c) = arg.sin_cos();
        let cross = de * om * (1.0 - c) / e2;
        [
            (om * om + de * de * c) / e2,
            de * sn / e,
            cross,
            cross,
            -om * sn / e,
            1.0 - om * om * (1.0 - c) / e2,
        ]
    };
    let f = |s: f64| {
        let r = rows(s);
        let k1 = oracle_kernel(n, true, s);
        let k0 = oracle_kernel(n, false, s);
        [
            k1 * r[0],
            k1 * r[1],
            k1 * r[2],
            k0 * r[3],
            k0 * r[4],
            k0 * r[5],
        ]
    };
    match n {
        NoiseModel::OneOverF {
            regime: OneOverFRegime::ZeroT,
            ..
        } => {
            // s = u² removes the logarithmic endpoint singularity.
            simpson(
                |u| {
                    if u == 0.0 {
                        [0.0; 6]
                    } else {
                        f(u * u).map(|v| 2.0 * u * v)
                    }
                },
                0.0,
                t.sqrt(),
                PANELS,
            )
        }
        _ => simpson(f, 0.0, t, PANELS),
    }
}

#[test]
fn coefficients_match_brute_force_quadrature() {
    let p = QubitParams::new(0.5).unwrap();
    let tau = p.period();
    let models = [
        NoiseModel::gaussian(0.03, 0.02, 0.03, 0.03),
        NoiseModel::gaussian(0.03, 0.03, 1.0, 30.0),
        NoiseModel::OneOverF {
            gamma: 0.03,
            lambda: 0.001,
            regime: OneOverFRegime::ZeroT,
        },
        NoiseModel::OneOverF {
            gamma: 0.03,
            lambda: 0.1,
            regime: OneOverFRegime::ZeroT,
        },
        NoiseModel::OneOverF {
            gamma: 0.03,
            lambda: 0.1,
            regime: OneOverFRegime::HighT { kbt: 1.0 },
        },
    ];
    for n in &models {
        for t in [0.013, 0.37 * tau, tau, 2.5 * tau] {
            let got = diffusion_coefficients(&p, n, t).unwrap().to_array();
            let want = oracle_coefficients(&p, n, t);
            for k in 0..6 {
                assert!(
                    (got[k] - want[k]).abs() < 1e-8,
                    "{n:?} t={t} k={k}: {} vs {}",
                    got[k],
                    want[k]
                );
            }
        }
    }
}
