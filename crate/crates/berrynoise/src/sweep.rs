//! Parameter sweeps over noise-model parameters.
//!
//! Cells are independent and run on a rayon pool; results are gathered by
//! cell index, so output does not depend on the worker count. Per-cell
//! failures are recorded and never abort the sweep.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use berrynoise_core::{
    build_coeff_table, evolve, evolve_with_table, geometric_phase, CoeffTable, DensityMatrix,
    EvolveConfig, NoiseModel, QubitParams, Trajectory,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{config_error, QuantityKind, RunConfig, SliceSpec, SweepSection};
use crate::error::Result;

/// A named parameter and its grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, values: Vec<f64>) -> Self {
        Axis {
            name: name.into(),
            values,
        }
    }

    fn check(&self, noise: &NoiseModel) -> Result<()> {
        if !noise.param_names().contains(&self.name.as_str()) {
            return Err(config_error(format!(
                "`{}` is not a parameter of the {} model (expected one of {:?})",
                self.name,
                noise.kind(),
                noise.param_names()
            )));
        }
        if self.values.is_empty() {
            return Err(config_error(format!("axis `{}` is empty", self.name)));
        }
        if !self.values.iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(config_error(format!(
                "axis `{}` values must be finite and non-negative",
                self.name
            )));
        }
        if !self.values.windows(2).all(|w| w[1] > w[0]) {
            return Err(config_error(format!(
                "axis `{}` values must be strictly increasing",
                self.name
            )));
        }
        Ok(())
    }
}

/// Everything a cell needs besides its noise model.
#[derive(Debug, Clone, PartialEq)]
pub struct Base {
    pub params: QubitParams,
    pub noise: NoiseModel,
    pub evolve: EvolveConfig,
    pub rho0: DensityMatrix,
    pub quantity: QuantityKind,
}

impl Base {
    fn check(&self) -> Result<()> {
        if self.quantity == QuantityKind::GpRatio
            && self.evolve.t_end < self.params.period() * (1.0 - 1e-12)
        {
            return Err(config_error(
                "the gp_ratio quantity needs at least one period (evolve.cycles >= 1)",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Base,
    pub axis1: Axis,
    pub axis2: Axis,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.check()?;
        self.axis1.check(&self.base.noise)?;
        self.axis2.check(&self.base.noise)?;
        if self.axis1.name == self.axis2.name {
            return Err(config_error("sweep axes must name different parameters"));
        }
        Ok(())
    }
}

/// A one-dimensional cut: `set` pins parameters before `axis` varies.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub label: String,
    pub axis: Axis,
    pub set: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Worker cap; `None` uses rayon's default.
    pub threads: Option<usize>,
    /// Largest number of coefficient tables kept for reuse.
    pub cache_tables: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            threads: None,
            cache_tables: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellError {
    pub index: Vec<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub quantity: QuantityKind,
    pub axis1: Axis,
    pub axis2: Axis,
    /// `values[i][j]` belongs to `axis1.values[i]`, `axis2.values[j]`.
    pub values: Vec<Vec<f64>>,
    pub converged: Vec<Vec<bool>>,
    pub errors: Vec<CellError>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceResult {
    pub label: String,
    pub quantity: QuantityKind,
    pub axis: Axis,
    pub set: BTreeMap<String, f64>,
    pub values: Vec<f64>,
    pub converged: Vec<bool>,
    pub errors: Vec<CellError>,
}

impl SliceResult {
    /// Largest `|value − 1|` over converged finite cells.
    pub fn max_deviation(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.converged)
            .filter(|(v, c)| **c && v.is_finite())
            .map(|(v, _)| (v - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Coefficient tables shared between cells with equal noise, drive and span.
#[derive(Debug)]
pub struct TableCache {
    tables: RwLock<HashMap<TableKey, Arc<CoeffTable>>>,
    capacity: usize,
}

type TableKey = ([u64; 5], u64, u64, usize);

impl TableCache {
    pub fn new(capacity: usize) -> Self {
        TableCache {
            tables: RwLock::new(HashMap::new()),
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.tables.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get_or_build(
        &self,
        p: &QubitParams,
        n: &NoiseModel,
        t_end: f64,
        npts: usize,
    ) -> berrynoise_core::Result<Arc<CoeffTable>> {
        let key = (n.key(), p.omega.to_bits(), t_end.to_bits(), npts);
        if let Some(t) = self.tables.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(build_coeff_table(p, n, t_end, npts)?);
        let mut map = self.tables.write().expect("cache lock");
        if map.len() < self.capacity {
            map.entry(key).or_insert_with(|| Arc::clone(&table));
        }
        Ok(table)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Outcome {
    value: f64,
    converged: bool,
}

fn trajectory(
    base: &Base,
    noise: &NoiseModel,
    cache: &TableCache,
) -> berrynoise_core::Result<Trajectory> {
    let mut cfg = base.evolve;
    if base.quantity != QuantityKind::GpRatio {
        cfg.sample_every = cfg.steps();
    }
    if cfg.use_table && !matches!(noise, NoiseModel::Delta { .. }) {
        let npts = CoeffTable::points_for(&base.params, cfg.t_end, cfg.table_points_per_cycle);
        let table = cache.get_or_build(&base.params, noise, cfg.t_end, npts)?;
        evolve_with_table(&table, &base.rho0, &cfg)
    } else {
        evolve(&base.params, noise, &base.rho0, &cfg)
    }
}

fn cell(
    base: &Base,
    noise: berrynoise_core::Result<NoiseModel>,
    cache: &TableCache,
) -> std::result::Result<Outcome, String> {
    let noise = noise.map_err(|e| e.to_string())?;
    let traj = trajectory(base, &noise, cache).map_err(|e| e.to_string())?;
    Ok(match base.quantity {
        QuantityKind::GpRatio => {
            let gp = geometric_phase(&traj).map_err(|e| e.to_string())?;
            Outcome {
                value: gp.ratio,
                converged: gp.converged && !gp.degraded,
            }
        }
        QuantityKind::FinalPurity => Outcome {
            value: traj.final_state().purity(),
            converged: true,
        },
        QuantityKind::FinalBloch => Outcome {
            value: traj.final_state().bloch().norm(),
            converged: true,
        },
    })
}

fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(job),
        None => job(),
    }
}

type CellResult = std::result::Result<Outcome, String>;

fn split(
    results: Vec<CellResult>,
    index: impl Fn(usize) -> Vec<usize>,
) -> (Vec<f64>, Vec<bool>, Vec<CellError>) {
    let mut values = Vec::with_capacity(results.len());
    let mut flags = Vec::with_capacity(results.len());
    let mut errors = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(o) => {
                values.push(o.value);
                flags.push(o.converged);
            }
            Err(message) => {
                values.push(f64::NAN);
                flags.push(false);
                errors.push(CellError {
                    index: index(k),
                    message,
                });
            }
        }
    }
    (values, flags, errors)
}

/// Evaluate the quantity on every `(axis1, axis2)` cell.
pub fn run_sweep(spec: &SweepSpec, opts: &SweepOptions) -> Result<SweepResult> {
    spec.validate()?;
    let cache = TableCache::new(opts.cache_tables);
    let (n1, n2) = (spec.axis1.values.len(), spec.axis2.values.len());
    let results: Vec<CellResult> = with_pool(opts.threads, || {
        (0..n1 * n2)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n2, k % n2);
                let noise = spec
                    .base
                    .noise
                    .with_param(&spec.axis1.name, spec.axis1.values[i])
                    .and_then(|m| m.with_param(&spec.axis2.name, spec.axis2.values[j]));
                cell(&spec.base, noise, &cache)
            })
            .collect()
    });
    let (values, flags, errors) = split(results, |k| vec![k / n2, k % n2]);
    Ok(SweepResult {
        quantity: spec.base.quantity,
        axis1: spec.axis1.clone(),
        axis2: spec.axis2.clone(),
        values: values.chunks(n2).map(<[f64]>::to_vec).collect(),
        converged: flags.chunks(n2).map(<[bool]>::to_vec).collect(),
        errors,
    })
}

fn slice_noise(base: &NoiseModel, slice: &Slice) -> Result<NoiseModel> {
    let mut m = *base;
    for (name, v) in &slice.set {
        m = m
            .with_param(name, *v)
            .map_err(|e| config_error(format!("slice `{}`: {e}", slice.label)))?;
    }
    slice.axis.check(&m)?;
    if slice.set.contains_key(&slice.axis.name) {
        return Err(config_error(format!(
            "slice `{}` both varies and pins `{}`",
            slice.label, slice.axis.name
        )));
    }
    Ok(m)
}

/// Evaluate one-dimensional cuts. All cells of all slices share one pool.
pub fn run_slices(base: &Base, slices: &[Slice], opts: &SweepOptions) -> Result<Vec<SliceResult>> {
    base.check()?;
    if slices.is_empty() {
        return Err(config_error("no slices given"));
    }
    let pinned: Vec<NoiseModel> = slices
        .iter()
        .map(|s| slice_noise(&base.noise, s))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = slices
        .iter()
        .enumerate()
        .flat_map(|(s, sl)| (0..sl.axis.values.len()).map(move |i| (s, i)))
        .collect();
    let cache = TableCache::new(opts.cache_tables);
    let mut results: Vec<CellResult> = with_pool(opts.threads, || {
        jobs.par_iter()
            .map(|&(s, i)| {
                let sl = &slices[s];
                let noise = pinned[s].with_param(&sl.axis.name, sl.axis.values[i]);
                cell(base, noise, &cache)
            })
            .collect()
    });
    let mut out = Vec::with_capacity(slices.len());
    for sl in slices {
        let rest = results.split_off(sl.axis.values.len());
        let mine = std::mem::replace(&mut results, rest);
        let (values, converged, errors) = split(mine, |k| vec![k]);
        out.push(SliceResult {
            label: sl.label.clone(),
            quantity: base.quantity,
            axis: sl.axis.clone(),
            set: sl.set.clone(),
            values,
            converged,
            errors,
        });
    }
    Ok(out)
}

/// The four canonical cuts: longitudinal (`gamma0` varies, `gamma1 = 0`) and
/// transverse (`gamma1` varies, `gamma0 = 0`), each at `alpha0 = alpha1`
/// equal to 0.03 and to 10.
pub fn fig8_slices(gammas: &[f64]) -> Vec<SliceSpec> {
    let mut out = Vec::with_capacity(4);
    for (label, vary, pin) in [
        ("longitudinal", "gamma0", "gamma1"),
        ("transverse", "gamma1", "gamma0"),
    ] {
        for (tag, alpha) in [("low", 0.03), ("high", 10.0)] {
            out.push(SliceSpec {
                label: format!("{label}_{tag}"),
                axis: crate::config::AxisSpec::explicit(vary, gammas.to_vec()),
                set: BTreeMap::from([
                    (pin.to_string(), 0.0),
                    ("alpha0".to_string(), alpha),
                    ("alpha1".to_string(), alpha),
                ]),
            });
        }
    }
    out
}

/// A validated sweep request.
#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Grid(SweepSpec),
    Slices(Base, Vec<Slice>),
}

/// Turn the `[sweep]` section into runnable specs, checking every axis.
pub fn plan(cfg: &RunConfig, sweep: &SweepSection) -> Result<Plan> {
    let base = Base {
        params: cfg.qubit_params()?,
        noise: cfg.noise_model()?,
        evolve: cfg.evolve_config()?,
        rho0: cfg.evolve.initial_state()?,
        quantity: sweep.quantity,
    };
    match (&sweep.axis1, &sweep.axis2, sweep.slices.is_empty()) {
        (Some(a1), Some(a2), true) => {
            let spec = SweepSpec {
                base,
                axis1: Axis::new(&a1.name, a1.grid()?),
                axis2: Axis::new(&a2.name, a2.grid()?),
            };
            spec.validate()?;
            Ok(Plan::Grid(spec))
        }
        (None, None, false) => {
            let slices: Vec<Slice> = sweep
                .slices
                .iter()
                .map(|s| {
                    Ok(Slice {
                        label: s.label.clone(),
                        axis: Axis::new(&s.axis.name, s.axis.grid()?),
                        set: s.set.clone(),
                    })
                })
                .collect::<Result<_>>()?;
            if let Some(bad) = slices.iter().find(|s| {
                s.label.is_empty()
                    || !s
                        .label
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
            }) {
                return Err(config_error(format!(
                    "slice label `{}` must be non-empty and use only letters, digits, `_`, `-` or `.`",
                    bad.label
                )));
            }
            let mut labels: Vec<&str> = slices.iter().map(|s| s.label.as_str()).collect();
            labels.sort_unstable();
            if labels.windows(2).any(|w| w[0] == w[1]) {
                return Err(config_error("slice labels must be unique"));
            }
            base.check()?;
            for s in &slices {
                slice_noise(&base.noise, s)?;
            }
            Ok(Plan::Slices(base, slices))
        }
        _ => Err(config_error(
            "sweep needs either both `axis1` and `axis2`, or a list of `slices`",
        )),
    }
}
