//! Cosine and sine integrals.
//!
//! `Ci(x) = γ + ln x + ∫₀ˣ (cos t − 1)/t dt` and `Si(x) = ∫₀ˣ sin t/t dt`.
//!
//! Below [`SERIES_SWITCH`] both are summed from their power series; above it
//! they come from the continued fraction of `E₁(ix)` evaluated with the
//! modified Lentz method, using `E₁(ix) = −Ci(x) + i(Si(x) − π/2)`.

use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmath;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Crossover between the series and continued-fraction branches.
pub const SERIES_SWITCH: f64 = 8.0;

const MAX_TERMS: usize = 200;

/// Cosine integral for `x > 0`.
pub fn cosint(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain { function: "Ci", x });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(cisi(x).0)
}

/// Sine integral. Odd in `x`; `Si(±∞) = ±π/2`.
pub fn sinint(x: f64) -> f64 {
    if x < 0.0 {
        return -sinint(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return FRAC_PI_2;
    }
    cisi(x).1
}

/// `(Ci(x), Si(x))` for finite `x > 0`.
fn cisi(x: f64) -> (f64, f64) {
    if x <= SERIES_SWITCH {
        cisi_series(x)
    } else {
        cisi_continued_fraction(x)
    }
}

pub(crate) fn cisi_series(x: f64) -> (f64, f64) {
    let x2 = x * x;

    // Si: Σ (−1)ⁿ x^{2n+1} / ((2n+1)(2n+1)!)
    let mut term = x;
    let mut si = x;
    for n in 1..MAX_TERMS {
        let k = (2 * n) as f64;
        term *= -x2 / (k * (k + 1.0));
        let add = term / (k + 1.0);
        si += add;
        if add.abs() < f64::EPSILON * 0.25 * si.abs() {
            break;
        }
    }

    // Ci: γ + ln x + Σ_{n≥1} (−1)ⁿ x^{2n} / (2n (2n)!)
    let mut term = 1.0;
    let mut sum = 0.0f64;
    for n in 1..MAX_TERMS {
        let k = (2 * n) as f64;
        term *= -x2 / ((k - 1.0) * k);
        let add = term / k;
        sum += add;
        if add.abs() < f64::EPSILON * 0.25 * sum.abs().max(1e-300) {
            break;
        }
    }
    (EULER_GAMMA + fmath::ln(x) + sum, si)
}

pub(crate) fn cisi_continued_fraction(x: f64) -> (f64, f64) {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 2..MAX_TERMS {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += Complex64::new(2.0, 0.0);
        d = Complex64::new(1.0, 0.0) / (d * a + b);
        c = b + Complex64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 2.0 * f64::EPSILON {
            break;
        }
    }
    let (s, co) = fmath::sincos(x);
    let e1 = Complex64::new(co, -s) * h;
    (-e1.re, FRAC_PI_2 + e1.im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain() {
        assert!(matches!(cosint(0.0), Err(Error::Domain { .. })));
        assert!(cosint(-1.0).is_err());
        assert!(cosint(f64::NAN).is_err());
        assert_eq!(sinint(0.0), 0.0);
    }

    #[test]
    fn known_values() {
        // Reference digits from tabulated values (A&S table 5.1).
        assert!((cosint(1.0).unwrap() - 0.337_403_922_900_968_1).abs() < 1e-14);
        assert!((sinint(1.0) - 0.946_083_070_367_183).abs() < 1e-14);
        assert!((cosint(10.0).unwrap() - (-0.045_456_433_004_455_37)).abs() < 1e-14);
        assert!((sinint(10.0) - 1.658_347_594_218_874).abs() < 1e-14);
    }

    #[test]
    fn branches_agree_at_switch() {
        for x in [4.0, 6.0, SERIES_SWITCH, 10.0, 12.0] {
            let (c1, s1) = cisi_series(x);
            let (c2, s2) = cisi_continued_fraction(x);
            assert!((c1 - c2).abs() < 1e-11, "Ci at {x}: {c1} vs {c2}");
            assert!((s1 - s2).abs() < 1e-11, "Si at {x}: {s1} vs {s2}");
        }
    }

    #[test]
    fn asymptotes() {
        for x in [50.0, 300.0, 1e4, 1e8] {
            let ci = cosint(x).unwrap();
            let si = sinint(x);
            // |Ci| and |Si − π/2| are bounded by ~1/x.
            assert!(ci.abs() <= 1.01 / x, "Ci({x}) = {ci}");
            assert!((si - FRAC_PI_2).abs() <= 1.01 / x);
            // Leading asymptotic terms.
            let (s, c) = (fmath::sin(x), fmath::cos(x));
            assert!((ci - (s / x - c / (x * x))).abs() < 2.0 / (x * x * x));
        }
        assert_eq!(cosint(f64::INFINITY).unwrap(), 0.0);
        assert_eq!(sinint(f64::INFINITY), FRAC_PI_2);
        assert_eq!(sinint(-2.0), -sinint(2.0));
    }

    #[test]
    fn small_argument_limit() {
        for x in [1e-3, 1e-6, 1e-10] {
            let d = cosint(x).unwrap() - fmath::ln(x);
            assert!((d - EULER_GAMMA).abs() < x);
            assert!((sinint(x) - x).abs() < x * x * x);
        }
    }
}
