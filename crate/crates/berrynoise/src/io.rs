//! CSV and JSON writers.
//!
//! Floats are written with Rust's shortest round-trip formatting (`{:?}`),
//! so every value parses back to the identical `f64`. Lines end in `\n`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use berrynoise_core::{CoeffTable, GpResult, Trajectory};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::sweep::{SliceResult, SweepResult};

/// Shortest representation that round-trips.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub const TRAJECTORY_HEADER: &str = "t,rx,ry,rz,purity,eps1,eps2";
pub const COEFF_HEADER: &str = "t,dxx,fxy,fxz,fzx,fzy,dzz";
pub const KERNELS_HEADER: &str = "t,phi0,phi1,dxx,fxy,fxz,fzx,fzy,dzz";
pub const SWEEP_HEADER: &str = "axis1,axis2,value,converged";
pub const SLICE_HEADER: &str = "axis,value,converged";

fn row(out: &mut String, cells: &[f64]) {
    for (i, v) in cells.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_f64(*v));
    }
    out.push('\n');
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * (traj.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let r = s.bloch();
        let e = s.eigen();
        row(&mut out, &[*t, r.x, r.y, r.z, s.purity(), e.eps1, e.eps2]);
    }
    out
}

pub fn coeff_table_csv(table: &CoeffTable) -> String {
    let mut out = String::new();
    out.push_str(COEFF_HEADER);
    out.push('\n');
    for (t, c) in table.rows() {
        let a = c.to_array();
        row(&mut out, &[t, a[0], a[1], a[2], a[3], a[4], a[5]]);
    }
    out
}

/// One kernel-diagnostics row: `t`, the two correlations and six coefficients.
pub fn kernels_csv(rows: &[[f64; 9]]) -> String {
    let mut out = String::new();
    out.push_str(KERNELS_HEADER);
    out.push('\n');
    for r in rows {
        row(&mut out, r);
    }
    out
}

pub fn sweep_csv(r: &SweepResult) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for (i, a) in r.axis1.values.iter().enumerate() {
        for (j, b) in r.axis2.values.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(*a),
                fmt_f64(*b),
                fmt_f64(r.values[i][j]),
                r.converged[i][j]
            );
        }
    }
    out
}

pub fn slice_csv(r: &SliceResult) -> String {
    let mut out = String::new();
    out.push_str(SLICE_HEADER);
    out.push('\n');
    for (i, a) in r.axis.values.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(*a),
            fmt_f64(r.values[i]),
            r.converged[i]
        );
    }
    out
}

/// The published fields of a [`GpResult`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GpJson {
    pub phi: f64,
    pub phi_unitary: f64,
    pub ratio: f64,
    pub min_gap: f64,
    pub converged: bool,
}

impl From<&GpResult> for GpJson {
    fn from(g: &GpResult) -> Self {
        GpJson {
            phi: g.phi,
            phi_unitary: g.phi_unitary,
            ratio: g.ratio,
            min_gap: g.min_gap,
            converged: g.converged,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Write `contents` to `dir/name`, creating `dir` if needed.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 5e-324] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            assert!(!s.contains(','));
        }
        assert_eq!(fmt_f64(1.0), "1.0");
    }

    #[test]
    fn gp_json_has_exact_fields() {
        let g = GpJson {
            phi: -0.3,
            phi_unitary: 0.3,
            ratio: 1.0,
            min_gap: 0.9,
            converged: true,
        };
        let v: serde_json::Value = serde_json::from_str(&to_json(&g)).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            ["converged", "min_gap", "phi", "phi_unitary", "ratio"]
        );
    }
}
