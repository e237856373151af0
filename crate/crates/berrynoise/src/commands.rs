//! Subcommand implementations. Each writes its files plus a manifest into
//! the output directory and returns the summary lines to print.

use std::path::Path;

use berrynoise_core::{
    diffusion_coefficients, evolve, gp_ratio_from, Channel, DiffusionCoeffs, Error as CoreError,
    NoiseModel,
};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::io::{self, GpJson};
use crate::manifest::Manifest;
use crate::sweep::{plan, run_slices, run_sweep, Plan, SweepOptions};

fn finish(
    command: &str,
    cfg: &RunConfig,
    out: &Path,
    outputs: Vec<String>,
    summary: Vec<String>,
) -> Result<Vec<String>> {
    let manifest = Manifest::new(command, cfg, outputs);
    io::write_file(out, &cfg.output.manifest, &io::to_json(&manifest))?;
    Ok(summary)
}

/// Evolve and write the sampled trajectory.
pub fn trajectory(cfg: &RunConfig, out: &Path) -> Result<Vec<String>> {
    let p = cfg.qubit_params()?;
    let traj = evolve(
        &p,
        &cfg.noise_model()?,
        &cfg.evolve.initial_state()?,
        &cfg.evolve_config()?,
    )?;
    io::write_file(out, &cfg.output.trajectory, &io::trajectory_csv(&traj))?;

    let tau = p.period();
    let mut summary = Vec::new();
    if traj.t_end() >= tau * (1.0 - 1e-12) {
        let (t, s) = traj.state_near(tau);
        summary.push(format!(
            "1-|R(tau)| = {} (tau = {}, sample t = {t})",
            io::fmt_f64(1.0 - s.bloch().norm()),
            io::fmt_f64(tau),
        ));
    }
    let end = traj.final_state();
    summary.push(format!(
        "1-|R(t_end)| = {} (t_end = {}), purity = {}",
        io::fmt_f64(1.0 - end.bloch().norm()),
        io::fmt_f64(traj.t_end()),
        io::fmt_f64(end.purity()),
    ));
    let files = vec![cfg.output.trajectory.clone()];
    finish("trajectory", cfg, out, files, summary)
}

/// Geometric phase over one period.
pub fn phase(cfg: &RunConfig, out: &Path) -> Result<Vec<String>> {
    let gp = gp_ratio_from(
        &cfg.qubit_params()?,
        &cfg.noise_model()?,
        &cfg.evolve.initial_state()?,
        &cfg.evolve_config()?,
    )?;
    io::write_file(out, &cfg.output.phase, &io::to_json(&GpJson::from(&gp)))?;
    let summary = vec![format!(
        "phi = {}, phi_unitary = {}, ratio = {}, min_gap = {}, converged = {}",
        io::fmt_f64(gp.phi),
        io::fmt_f64(gp.phi_unitary),
        io::fmt_f64(gp.ratio),
        io::fmt_f64(gp.min_gap),
        gp.converged
    )];
    let files = vec![cfg.output.phase.clone()];
    finish("phase", cfg, out, files, summary)
}

/// Grid sweep or slice bundle, as configured in `[sweep]`.
pub fn sweep(cfg: &RunConfig, out: &Path, threads: Option<usize>) -> Result<Vec<String>> {
    let section = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("the sweep command needs a [sweep] section".into()))?;
    let opts = SweepOptions {
        threads,
        cache_tables: section.cache_tables,
    };
    let mut files = Vec::new();
    let mut summary = Vec::new();
    match plan(cfg, section)? {
        Plan::Grid(spec) => {
            let r = run_sweep(&spec, &opts)?;
            io::write_file(out, &cfg.output.sweep_csv, &io::sweep_csv(&r))?;
            io::write_file(out, &cfg.output.sweep_json, &io::to_json(&r))?;
            files.push(cfg.output.sweep_csv.clone());
            files.push(cfg.output.sweep_json.clone());
            let cells = r.axis1.values.len() * r.axis2.values.len();
            let unconverged = r.converged.iter().flatten().filter(|c| !**c).count();
            summary.push(format!(
                "{cells} cells, {unconverged} not converged, {} failed",
                r.errors.len()
            ));
        }
        Plan::Slices(base, slices) => {
            let results = run_slices(&base, &slices, &opts)?;
            for r in &results {
                let name = format!("{}.csv", r.label);
                io::write_file(out, &name, &io::slice_csv(r))?;
                files.push(name);
                summary.push(format!(
                    "{}: max |value-1| = {}, {} failed",
                    r.label,
                    io::fmt_f64(r.max_deviation()),
                    r.errors.len()
                ));
            }
            io::write_file(out, &cfg.output.sweep_json, &io::to_json(&results))?;
            files.push(cfg.output.sweep_json.clone());
        }
    }
    finish("sweep", cfg, out, files, summary)
}

fn kernel_value(n: &NoiseModel, ch: Channel, s: f64) -> f64 {
    match n.correlation(ch, s) {
        None => f64::NAN,
        Some(Ok(v)) => v,
        // The zero-temperature 1/f kernel diverges to +∞ at the origin.
        Some(Err(CoreError::Domain { .. })) => f64::INFINITY,
        Some(Err(_)) => f64::NAN,
    }
}

/// Correlation kernels and the six coefficients on a uniform time grid.
pub fn kernels(cfg: &RunConfig, out: &Path) -> Result<Vec<String>> {
    let p = cfg.qubit_params()?;
    let n = cfg.noise_model()?;
    let k = cfg.kernels.unwrap_or_default();
    let t_end = k.cycles * p.period();
    let mut rows = Vec::with_capacity(k.points);
    for i in 0..k.points {
        let t = if k.points == 1 {
            0.0
        } else if i + 1 == k.points {
            t_end
        } else {
            t_end * i as f64 / (k.points - 1) as f64
        };
        let c: DiffusionCoeffs = diffusion_coefficients(&p, &n, t)?;
        let a = c.to_array();
        rows.push([
            t,
            kernel_value(&n, Channel::Longitudinal, t),
            kernel_value(&n, Channel::Transverse, t),
            a[0],
            a[1],
            a[2],
            a[3],
            a[4],
            a[5],
        ]);
    }
    io::write_file(out, &cfg.output.kernels, &io::kernels_csv(&rows))?;
    let last = rows.last().expect("at least one point");
    let summary = vec![format!(
        "{} rows; at t = {}: dxx = {}, dzz = {}",
        rows.len(),
        io::fmt_f64(last[0]),
        io::fmt_f64(last[3]),
        io::fmt_f64(last[8]),
    )];
    let files = vec![cfg.output.kernels.clone()];
    finish("kernels", cfg, out, files, summary)
}
