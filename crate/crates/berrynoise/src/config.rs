//! Run configuration, read from TOML.
//!
//! Frequencies are in units of the detuning Δ, which is fixed at 1. Unknown
//! keys are rejected. See `docs/config.md` for the grammar.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use berrynoise_core::evolver::{
    Integrator, Representation, DEFAULT_STEPS_PER_CYCLE, DEFAULT_TABLE_POINTS_PER_CYCLE,
};
use berrynoise_core::{
    BlochVector, DensityMatrix, EvolveConfig, NoiseModel, OneOverFRegime, QubitParams,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub qubit: QubitSection,
    pub noise: NoiseSection,
    #[serde(default)]
    pub evolve: EvolveSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernels: Option<KernelsSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitSection {
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    ZeroT,
    HighT,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseSection {
    Delta {
        gamma0: f64,
        gamma1: f64,
        kbt: f64,
    },
    Gaussian {
        gamma0: f64,
        gamma1: f64,
        alpha0: f64,
        alpha1: f64,
    },
    OneOverF {
        gamma: f64,
        lambda: f64,
        regime: Regime,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kbt: Option<f64>,
    },
}

impl NoiseSection {
    pub fn to_model(&self) -> Result<NoiseModel> {
        let model = match *self {
            NoiseSection::Delta {
                gamma0,
                gamma1,
                kbt,
            } => NoiseModel::Delta {
                gamma0,
                gamma1,
                kbt,
            },
            NoiseSection::Gaussian {
                gamma0,
                gamma1,
                alpha0,
                alpha1,
            } => NoiseModel::gaussian(gamma0, gamma1, alpha0, alpha1),
            NoiseSection::OneOverF {
                gamma,
                lambda,
                regime,
                kbt,
            } => {
                let regime = match (regime, kbt) {
                    (Regime::ZeroT, None) => OneOverFRegime::ZeroT,
                    (Regime::HighT, Some(kbt)) => OneOverFRegime::HighT { kbt },
                    (Regime::ZeroT, Some(_)) => {
                        return Err(config_error(
                            "noise.kbt is not used with regime = \"zero_t\"",
                        ))
                    }
                    (Regime::HighT, None) => {
                        return Err(config_error(
                            "noise.kbt is required with regime = \"high_t\"",
                        ))
                    }
                };
                NoiseModel::OneOverF {
                    gamma,
                    lambda,
                    regime,
                }
            }
        };
        model
            .validate()
            .map_err(|e| config_error(format!("noise: {e}")))?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorKind {
    Rk4,
    Dopri5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationKind {
    Matrix,
    Bloch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveSection {
    /// Duration in precession periods τ = 2π/√(1+Ω²).
    pub cycles: f64,
    pub steps_per_cycle: usize,
    pub sample_every: usize,
    pub use_table: bool,
    pub table_points_per_cycle: usize,
    pub integrator: IntegratorKind,
    pub rtol: f64,
    pub atol: f64,
    pub representation: RepresentationKind,
    /// Bloch vector of the initial state.
    pub initial_bloch: [f64; 3],
}

impl Default for EvolveSection {
    fn default() -> Self {
        EvolveSection {
            cycles: 1.0,
            steps_per_cycle: DEFAULT_STEPS_PER_CYCLE,
            sample_every: 1,
            use_table: true,
            table_points_per_cycle: DEFAULT_TABLE_POINTS_PER_CYCLE,
            integrator: IntegratorKind::Rk4,
            rtol: 1e-10,
            atol: 1e-12,
            representation: RepresentationKind::Matrix,
            initial_bloch: [0.0, 0.0, 1.0],
        }
    }
}

impl EvolveSection {
    pub fn to_config(&self, p: &QubitParams) -> Result<EvolveConfig> {
        if self.steps_per_cycle == 0 {
            return Err(config_error("evolve.steps_per_cycle must be positive"));
        }
        let mut cfg = EvolveConfig::for_cycles(p, self.cycles, self.steps_per_cycle);
        cfg.sample_every = self.sample_every;
        cfg.use_table = self.use_table;
        cfg.table_points_per_cycle = self.table_points_per_cycle;
        cfg.integrator = match self.integrator {
            IntegratorKind::Rk4 => Integrator::Rk4,
            IntegratorKind::Dopri5 => Integrator::Dopri5 {
                rtol: self.rtol,
                atol: self.atol,
            },
        };
        cfg.representation = match self.representation {
            RepresentationKind::Matrix => Representation::Matrix,
            RepresentationKind::Bloch => Representation::Bloch,
        };
        cfg.validate()
            .map_err(|e| config_error(format!("evolve: {e}")))?;
        Ok(cfg)
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        let [x, y, z] = self.initial_bloch;
        BlochVector::new(x, y, z)
            .to_density()
            .map_err(|e| config_error(format!("evolve.initial_bloch: {e}")))
    }
}

/// Output file names, relative to the `--out` directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub trajectory: String,
    pub phase: String,
    pub kernels: String,
    pub sweep_csv: String,
    pub sweep_json: String,
    pub manifest: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            trajectory: "trajectory.csv".into(),
            phase: "phase.json".into(),
            kernels: "kernels.csv".into(),
            sweep_csv: "sweep.csv".into(),
            sweep_json: "sweep.json".into(),
            manifest: "manifest.json".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

/// A named grid, given either as explicit `values` or as
/// `start`/`stop`/`count` with a `spacing`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<Spacing>,
}

impl AxisSpec {
    pub fn linear(name: &str, start: f64, stop: f64, count: usize) -> Self {
        AxisSpec {
            name: name.into(),
            values: None,
            start: Some(start),
            stop: Some(stop),
            count: Some(count),
            spacing: Some(Spacing::Linear),
        }
    }

    pub fn log(name: &str, start: f64, stop: f64, count: usize) -> Self {
        AxisSpec {
            spacing: Some(Spacing::Log),
            ..Self::linear(name, start, stop, count)
        }
    }

    pub fn explicit(name: &str, values: Vec<f64>) -> Self {
        AxisSpec {
            name: name.into(),
            values: Some(values),
            start: None,
            stop: None,
            count: None,
            spacing: None,
        }
    }

    /// Grid values. Shape problems are reported here; range and ordering
    /// checks happen when the sweep is assembled.
    pub fn grid(&self) -> Result<Vec<f64>> {
        let ctx = |msg: &str| config_error(format!("axis `{}`: {msg}", self.name));
        match (&self.values, self.start, self.stop, self.count) {
            (Some(v), None, None, None) if self.spacing.is_none() => Ok(v.clone()),
            (None, Some(a), Some(b), Some(n)) => {
                if n == 0 {
                    return Err(ctx("count must be positive"));
                }
                if n == 1 {
                    return if a == b {
                        Ok(vec![a])
                    } else {
                        Err(ctx("a single-point grid needs start = stop"))
                    };
                }
                let last = (n - 1) as f64;
                match self.spacing.unwrap_or(Spacing::Linear) {
                    Spacing::Linear => Ok((0..n)
                        .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / last })
                        .collect()),
                    Spacing::Log => {
                        if !(a > 0.0 && b > 0.0) {
                            return Err(ctx("log spacing needs positive end points"));
                        }
                        // Decimal exponents keep whole decades exact.
                        let (la, lb) = (a.log10(), b.log10());
                        Ok((0..n)
                            .map(|i| match i {
                                0 => a,
                                _ if i + 1 == n => b,
                                _ => 10f64.powf(la + (lb - la) * i as f64 / last),
                            })
                            .collect())
                    }
                }
            }
            _ => Err(ctx(
                "give either `values` or all of `start`, `stop` and `count` (with optional `spacing`)",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityKind {
    GpRatio,
    FinalPurity,
    FinalBloch,
}

/// A one-dimensional cut with other noise parameters pinned by `set`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    pub label: String,
    pub axis: AxisSpec,
    #[serde(default)]
    pub set: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_quantity")]
    pub quantity: QuantityKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis1: Option<AxisSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis2: Option<AxisSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub slices: Vec<SliceSpec>,
    /// Upper bound on cached coefficient tables.
    #[serde(default = "default_cache_tables")]
    pub cache_tables: usize,
}

fn default_quantity() -> QuantityKind {
    QuantityKind::GpRatio
}

fn default_cache_tables() -> usize {
    64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelsSection {
    /// Time span in precession periods.
    pub cycles: f64,
    /// Number of uniformly spaced sample times, including `t = 0`.
    pub points: usize,
}

impl Default for KernelsSection {
    fn default() -> Self {
        KernelsSection {
            cycles: 1.0,
            points: 257,
        }
    }
}

pub fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| config_error(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            CliError::Config(msg) => config_error(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Canonical TOML serialization; parsing it yields an equal config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable in TOML")
    }

    /// Check everything that can be checked before running.
    pub fn validate(&self) -> Result<()> {
        let p = self.qubit_params()?;
        self.noise_model()?;
        self.evolve.to_config(&p)?;
        self.evolve.initial_state()?;
        if let Some(sweep) = &self.sweep {
            crate::sweep::plan(self, sweep)?;
        }
        if let Some(k) = &self.kernels {
            if !(k.cycles > 0.0 && k.cycles.is_finite()) {
                return Err(config_error("kernels.cycles must be positive"));
            }
            if k.points == 0 {
                return Err(config_error("kernels.points must be positive"));
            }
        }
        Ok(())
    }

    pub fn qubit_params(&self) -> Result<QubitParams> {
        QubitParams::new(self.qubit.omega).map_err(|e| config_error(format!("qubit: {e}")))
    }

    pub fn noise_model(&self) -> Result<NoiseModel> {
        self.noise.to_model()
    }

    pub fn evolve_config(&self) -> Result<EvolveConfig> {
        self.evolve.to_config(&self.qubit_params()?)
    }
}
