//! Brute-force reference computations used to check `berrynoise-core`.
//!
//! Everything here is deliberately naive: fixed-panel Simpson quadrature and
//! direct transcriptions of the kernels and closed forms, sharing no code
//! with the adaptive paths they check.

use berrynoise_core::{cosint, sinint, NoiseModel, OneOverFRegime, QubitParams};

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson<const N: usize>(
    f: impl Fn(f64) -> [f64; N],
    a: f64,
    b: f64,
    panels: usize,
) -> [f64; N] {
    assert!(panels % 2 == 0);
    let h = (b - a) / panels as f64;
    let mut acc = [0.0; N];
    for i in 0..=panels {
        let w = if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let v = f(a + i as f64 * h);
        for k in 0..N {
            acc[k] += w * v[k];
        }
    }
    acc.map(|x| x * h / 3.0)
}

pub fn simpson_scalar(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    simpson(|x| [f(x)], a, b, panels)[0]
}

/// Euler's constant from `γ = −∫₀^∞ e^{−t} ln t dt`, substituting `t = e^v`.
pub fn euler_gamma(panels: usize) -> f64 {
    -simpson_scalar(|v| (-(v.exp())).exp() * v * v.exp(), -40.0, 4.0, panels)
}

/// `Si(x) = ∫₀ˣ sin t / t dt`.
pub fn sine_integral(x: f64, panels: usize) -> f64 {
    simpson_scalar(|t| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, x, panels)
}

/// `Ci(x) = γ + ln x + ∫₀ˣ (cos t − 1) / t dt`, with `γ` from [`euler_gamma`].
pub fn cosine_integral(x: f64, panels: usize) -> f64 {
    let tail = simpson_scalar(
        |t| if t == 0.0 { 0.0 } else { (t.cos() - 1.0) / t },
        0.0,
        x,
        panels,
    );
    euler_gamma(panels) + x.ln() + tail
}

fn kernel(n: &NoiseModel, transverse: bool, s: f64) -> f64 {
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
        } => {
            let x = lambda * s;
            match regime {
                OneOverFRegime::ZeroT => -gamma * lambda * cosint(x).unwrap(),
                OneOverFRegime::HighT { kbt } => {
                    kbt * gamma * (x.cos() + x * (sinint(x) - std::f64::consts::FRAC_PI_2))
                }
            }
        }
        NoiseModel::Delta { .. } => panic!("delta kernels have no pointwise value"),
    }
}

/// The six coefficients `(D_xx, f_xy, f_xz, f_zx, f_zy, D_zz)` at `t`, from the
/// closed forms written out directly and integrated with `panels` Simpson
/// panels. The zero-temperature 1/f kernel is integrated in `u = √s` to
/// remove its logarithmic endpoint singularity.
pub fn coefficients(p: &QubitParams, n: &NoiseModel, t: f64, panels: usize) -> [f64; 6] {
    if let NoiseModel::Delta {
        gamma0,
        gamma1,
        kbt,
    } = *n
    {
        return [gamma1 * kbt, 0.0, 0.0, 0.0, 0.0, gamma0 * kbt];
    }
    let (om, de) = (p.omega, p.delta);
    let e2 = om * om + de * de;
    let e = e2.sqrt();
    let f = move |s: f64| {
        // Closed forms evaluated at −s.
        let (sn, c) = (-2.0 * s * e).sin_cos();
        let cross = de * om * (1.0 - c) / e2;
        let k1 = kernel(n, true, s);
        let k0 = kernel(n, false, s);
        [
            k1 * (om * om + de * de * c) / e2,
            k1 * de * sn / e,
            k1 * cross,
            k0 * cross,
            k0 * -om * sn / e,
            k0 * (1.0 - om * om * (1.0 - c) / e2),
        ]
    };
    match n {
        NoiseModel::OneOverF {
            regime: OneOverFRegime::ZeroT,
            ..
        } => simpson(
            |u| {
                if u == 0.0 {
                    [0.0; 6]
                } else {
                    f(u * u).map(|v| 2.0 * u * v)
                }
            },
            0.0,
            t.sqrt(),
            panels,
        ),
        _ => simpson(f, 0.0, t, panels),
    }
}

/// Unitary geometric phase `π(1 − Δ/√(Δ² + Ω²))`.
pub fn unitary_phase(omega: f64, delta: f64) -> f64 {
    std::f64::consts::PI * (1.0 - delta / omega.hypot(delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        let v = simpson_scalar(|x| x * x * x - 2.0 * x, 0.0, 2.0, 2);
        assert!((v - 0.0).abs() < 1e-14);
    }

    #[test]
    fn euler_gamma_digits() {
        assert!((euler_gamma(200_000) - 0.577_215_664_901_532_9).abs() < 1e-12);
    }

    #[test]
    fn delta_coefficients_are_constant() {
        let p = QubitParams::new(0.5).unwrap();
        let n = NoiseModel::Delta {
            gamma0: 0.03,
            gamma1: 0.02,
            kbt: 2.0,
        };
        assert_eq!(
            coefficients(&p, &n, 1.0, 2),
            [0.04, 0.0, 0.0, 0.0, 0.0, 0.06]
        );
    }
}
