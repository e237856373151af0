//! Noise correlation kernels `⟨δω_i(0) δω_i(−s)⟩` for the longitudinal
//! (`i = 0`, couples through σz) and transverse (`i = 1`, couples through σx)
//! channels.

use alloc::format;
use alloc::string::String;
use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::fmath;
use crate::special::{cosint, sinint};

/// Noise channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// δω₀, along σz.
    Longitudinal,
    /// δω₁, along σx.
    Transverse,
}

/// Temperature regime of the 1/f kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OneOverFRegime {
    ZeroT,
    HighT { kbt: f64 },
}

/// Correlation model shared by the two channels. All frequencies in units of Δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// `Φ_i(s) ∝ δ(s)`: constant coefficients `D_zz = γ₀k_BT`, `D_xx = γ₁k_BT`.
    Delta { gamma0: f64, gamma1: f64, kbt: f64 },
    /// `Φ_i(s) = γ_i exp(−α_i² s²)`.
    Gaussian {
        gamma0: f64,
        gamma1: f64,
        alpha0: f64,
        alpha1: f64,
    },
    /// 1/f kernel with infrared cutoff Λ, identical in both channels.
    OneOverF {
        gamma: f64,
        lambda: f64,
        regime: OneOverFRegime,
    },
}

impl NoiseModel {
    /// No coupling at all; evolution is unitary.
    pub fn noiseless() -> Self {
        NoiseModel::Delta {
            gamma0: 0.0,
            gamma1: 0.0,
            kbt: 0.0,
        }
    }

    pub fn gaussian(gamma0: f64, gamma1: f64, alpha0: f64, alpha1: f64) -> Self {
        NoiseModel::Gaussian {
            gamma0,
            gamma1,
            alpha0,
            alpha1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            NoiseModel::Delta { .. } => "delta",
            NoiseModel::Gaussian { .. } => "gaussian",
            NoiseModel::OneOverF { .. } => "one_over_f",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64, strict: bool| -> Result<()> {
            let ok = v.is_finite() && if strict { v > 0.0 } else { v >= 0.0 };
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be {}, got {v}",
                    if strict { "positive" } else { "non-negative" }
                )))
            }
        };
        match *self {
            NoiseModel::Delta {
                gamma0,
                gamma1,
                kbt,
            } => {
                check("gamma0", gamma0, false)?;
                check("gamma1", gamma1, false)?;
                check("kbt", kbt, false)
            }
            NoiseModel::Gaussian {
                gamma0,
                gamma1,
                alpha0,
                alpha1,
            } => {
                check("gamma0", gamma0, false)?;
                check("gamma1", gamma1, false)?;
                check("alpha0", alpha0, true)?;
                check("alpha1", alpha1, true)
            }
            NoiseModel::OneOverF {
                gamma,
                lambda,
                regime,
            } => {
                check("gamma", gamma, false)?;
                check("lambda", lambda, true)?;
                match regime {
                    OneOverFRegime::ZeroT => Ok(()),
                    OneOverFRegime::HighT { kbt } => check("kbt", kbt, false),
                }
            }
        }
    }

    /// True when every coupling constant vanishes.
    pub fn is_noiseless(&self) -> bool {
        match *self {
            NoiseModel::Delta { gamma0, gamma1, .. }
            | NoiseModel::Gaussian { gamma0, gamma1, .. } => gamma0 == 0.0 && gamma1 == 0.0,
            NoiseModel::OneOverF { gamma, .. } => gamma == 0.0,
        }
    }

    /// Correlation `Φ_i(s)` for a channel. `None` for the delta model, whose
    /// kernel is a distribution.
    pub fn correlation(&self, channel: Channel, s: f64) -> Option<Result<f64>> {
        match *self {
            NoiseModel::Delta { .. } => None,
            NoiseModel::Gaussian {
                gamma0,
                gamma1,
                alpha0,
                alpha1,
            } => Some(Ok(match channel {
                Channel::Longitudinal => kernel_gaussian(gamma0, alpha0, s),
                Channel::Transverse => kernel_gaussian(gamma1, alpha1, s),
            })),
            NoiseModel::OneOverF {
                gamma,
                lambda,
                regime,
            } => Some(kernel_oneoverf(gamma, lambda, regime, s)),
        }
    }

    /// Names accepted by [`NoiseModel::with_param`] for this variant.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            NoiseModel::Delta { .. } => &["gamma0", "gamma1", "kbt"],
            NoiseModel::Gaussian { .. } => &["gamma0", "gamma1", "alpha0", "alpha1"],
            NoiseModel::OneOverF {
                regime: OneOverFRegime::ZeroT,
                ..
            } => &["gamma", "lambda"],
            NoiseModel::OneOverF { .. } => &["gamma", "lambda", "kbt"],
        }
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        match (*self, name) {
            (NoiseModel::Delta { gamma0, .. }, "gamma0") => Some(gamma0),
            (NoiseModel::Delta { gamma1, .. }, "gamma1") => Some(gamma1),
            (NoiseModel::Delta { kbt, .. }, "kbt") => Some(kbt),
            (NoiseModel::Gaussian { gamma0, .. }, "gamma0") => Some(gamma0),
            (NoiseModel::Gaussian { gamma1, .. }, "gamma1") => Some(gamma1),
            (NoiseModel::Gaussian { alpha0, .. }, "alpha0") => Some(alpha0),
            (NoiseModel::Gaussian { alpha1, .. }, "alpha1") => Some(alpha1),
            (NoiseModel::OneOverF { gamma, .. }, "gamma") => Some(gamma),
            (NoiseModel::OneOverF { lambda, .. }, "lambda") => Some(lambda),
            (
                NoiseModel::OneOverF {
                    regime: OneOverFRegime::HighT { kbt },
                    ..
                },
                "kbt",
            ) => Some(kbt),
            _ => None,
        }
    }

    /// Returns a copy with one named parameter replaced.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        let mut m = *self;
        let slot: &mut f64 = match (&mut m, name) {
            (NoiseModel::Delta { gamma0, .. }, "gamma0") => gamma0,
            (NoiseModel::Delta { gamma1, .. }, "gamma1") => gamma1,
            (NoiseModel::Delta { kbt, .. }, "kbt") => kbt,
            (NoiseModel::Gaussian { gamma0, .. }, "gamma0") => gamma0,
            (NoiseModel::Gaussian { gamma1, .. }, "gamma1") => gamma1,
            (NoiseModel::Gaussian { alpha0, .. }, "alpha0") => alpha0,
            (NoiseModel::Gaussian { alpha1, .. }, "alpha1") => alpha1,
            (NoiseModel::OneOverF { gamma, .. }, "gamma") => gamma,
            (NoiseModel::OneOverF { lambda, .. }, "lambda") => lambda,
            (
                NoiseModel::OneOverF {
                    regime: OneOverFRegime::HighT { kbt },
                    ..
                },
                "kbt",
            ) => kbt,
            _ => {
                return Err(Error::InvalidParameter(unknown_param(self, name)));
            }
        };
        *slot = value;
        m.validate()?;
        Ok(m)
    }

    /// Bit patterns of all parameters, usable as a cache key.
    pub fn key(&self) -> [u64; 5] {
        match *self {
            NoiseModel::Delta {
                gamma0,
                gamma1,
                kbt,
            } => [0, gamma0.to_bits(), gamma1.to_bits(), kbt.to_bits(), 0],
            NoiseModel::Gaussian {
                gamma0,
                gamma1,
                alpha0,
                alpha1,
            } => [
                1,
                gamma0.to_bits(),
                gamma1.to_bits(),
                alpha0.to_bits(),
                alpha1.to_bits(),
            ],
            NoiseModel::OneOverF {
                gamma,
                lambda,
                regime,
            } => {
                let (tag, kbt) = match regime {
                    OneOverFRegime::ZeroT => (2, 0.0f64),
                    OneOverFRegime::HighT { kbt } => (3, kbt),
                };
                [tag, gamma.to_bits(), lambda.to_bits(), kbt.to_bits(), 0]
            }
        }
    }

    /// Lag beyond which a channel's kernel is negligible (`Φ < γ·e^{-49}`),
    /// or `None` when it has unbounded support.
    pub(crate) fn support(&self, channel: Channel) -> Option<f64> {
        match *self {
            NoiseModel::Gaussian { alpha0, alpha1, .. } => Some(
                7.0 / match channel {
                    Channel::Longitudinal => alpha0,
                    Channel::Transverse => alpha1,
                },
            ),
            _ => None,
        }
    }

    /// Length scale on which a channel's kernel varies.
    pub(crate) fn correlation_scale(&self, channel: Channel) -> f64 {
        match *self {
            NoiseModel::Delta { .. } => f64::INFINITY,
            NoiseModel::Gaussian { alpha0, alpha1, .. } => {
                1.0 / match channel {
                    Channel::Longitudinal => alpha0,
                    Channel::Transverse => alpha1,
                }
            }
            NoiseModel::OneOverF { lambda, .. } => 1.0 / lambda,
        }
    }
}

fn unknown_param(m: &NoiseModel, name: &str) -> String {
    format!(
        "`{name}` is not a parameter of the {} model (expected one of {:?})",
        m.kind(),
        m.param_names()
    )
}

/// Gaussian correlation `γ exp(−α² s²)`.
pub fn kernel_gaussian(gamma: f64, alpha: f64, s: f64) -> f64 {
    let a = alpha * s;
    gamma * fmath::exp(-a * a)
}

/// 1/f correlation at lag `s`.
///
/// Zero temperature: `−γΛ Ci(Λs)`, logarithmically divergent at `s = 0`.
/// High temperature: `k_BT γΛ (−π/2·s + cos(Λs)/Λ + s Si(Λs))`.
pub fn kernel_oneoverf(gamma: f64, lambda: f64, regime: OneOverFRegime, s: f64) -> Result<f64> {
    let s = s.abs();
    match regime {
        OneOverFRegime::ZeroT => {
            if s == 0.0 {
                return Err(Error::Domain {
                    function: "1/f kernel",
                    x: s,
                });
            }
            Ok(-gamma * lambda * cosint(lambda * s)?)
        }
        OneOverFRegime::HighT { kbt } => {
            let x = lambda * s;
            Ok(kbt * gamma * (fmath::cos(x) + x * (sinint(x) - FRAC_PI_2)))
        }
    }
}
