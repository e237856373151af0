//! Acceptance suite. Each criterion prints one PASS/FAIL line with the
//! measured numbers; the process fails if any criterion fails.
//!
//! Criteria run one after another so their wall-clock budgets are measured
//! without competing for cores.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::TAU;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use berrynoise::config::RunConfig;
use berrynoise::sweep::{plan, run_slices, run_sweep, Plan, SweepOptions};
use berrynoise_core::evolver::Representation;
use berrynoise_core::phase::{phase_difference, phase_from_eigen};
use berrynoise_core::{
    cosint, diffusion_coefficients, evolve, sinint, unitary_berry_phase, DensityMatrix, EigenPair,
    EvolveConfig, NoiseModel, OneOverFRegime, QubitParams, Trajectory,
};
use berrynoise_validation as oracle;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const STEPS_PER_CYCLE: usize = 10_000;
const SIMPSON_PANELS: usize = 1_000_000;

const C1_PHASE_TOL: f64 = 1e-3;
const C2_TRACE_TOL: f64 = 1e-9;
const C2_HERMITICITY_TOL: f64 = 1e-12;
const C2_PURITY_TOL: f64 = 1e-8;
const C2_ORDER: (f64, f64) = (3.7, 4.3);
const C3_FINAL_NORM: f64 = 0.05;
const C4_LOW_BAND: (f64, f64) = (0.08, 0.24);
const C4_HIGH_MAX: f64 = 0.02;
const C5_BAND: (f64, f64) = (0.10, 0.30);
const C7_RATIO_TOL: f64 = 0.02;
const C8_SPECIAL_TOL: f64 = 1e-10;
const C8_COEFF_TOL: f64 = 1e-8;
const C8_REPR_TOL: f64 = 1e-9;
const C8_POINTS: usize = 20;
const C9_GAUGE_TOL: f64 = 1e-10;
const C9_HALVING_TOL: f64 = 1e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn params() -> QubitParams {
    QubitParams::new(0.5).unwrap()
}

fn protocol(name: &str) -> RunConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../protocols")
        .join(format!("{name}.toml"));
    RunConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn run_cycles(
    n: &NoiseModel,
    cycles: f64,
    repr: Representation,
) -> berrynoise_core::Result<Trajectory> {
    let p = params();
    let mut cfg = EvolveConfig::for_cycles(&p, cycles, STEPS_PER_CYCLE);
    cfg.representation = repr;
    evolve(&p, n, &DensityMatrix::ground_z(), &cfg)
}

/// `1 − |R(τ)|` from `|0⟩⟨0|`.
fn loss_after_cycle(n: &NoiseModel) -> Result<f64, String> {
    let tr = run_cycles(n, 1.0, Representation::Matrix).map_err(|e| e.to_string())?;
    Ok(1.0 - tr.final_state().bloch().norm())
}

fn fmt_loss(r: &Result<f64, String>) -> String {
    match r {
        Ok(v) => format!("{v:.4}"),
        Err(e) => format!("error ({e})"),
    }
}

/// Phase over one period together with its change when every other sample
/// is dropped.
fn phase_and_halving(n: &NoiseModel) -> Result<(f64, f64, Trajectory), String> {
    let tr = run_cycles(n, 1.0, Representation::Matrix).map_err(|e| e.to_string())?;
    let eig: Vec<EigenPair> = tr.states.iter().map(|s| s.eigen()).collect();
    let full = phase_from_eigen(&eig).map_err(|e| e.to_string())?.phi;
    let mut half: Vec<EigenPair> = eig.iter().step_by(2).copied().collect();
    if eig.len() % 2 == 0 {
        half.push(*eig.last().unwrap());
    }
    let coarse = phase_from_eigen(&half).map_err(|e| e.to_string())?.phi;
    Ok((full, phase_difference(full, coarse).abs(), tr))
}

fn ratio_of(phi: f64) -> f64 {
    phi.abs() / unitary_berry_phase(&params())
}

fn gaussian(g0: f64, g1: f64, a0: f64, a1: f64) -> NoiseModel {
    NoiseModel::gaussian(g0, g1, a0, a1)
}

fn one_over_f(lambda: f64) -> NoiseModel {
    NoiseModel::OneOverF {
        gamma: 0.03,
        lambda,
        regime: OneOverFRegime::ZeroT,
    }
}

fn c1_unitary_phase() -> Outcome {
    let want = oracle::unitary_phase(0.5, 1.0);
    match phase_and_halving(&NoiseModel::noiseless()) {
        Ok((phi, _, _)) => {
            let err = (phi.abs() - want).abs();
            Outcome::new(
                err < C1_PHASE_TOL,
                format!("|phi| = {:.9}, reference = {want:.9}, error = {err:.2e} (tol {C1_PHASE_TOL:e})", phi.abs()),
            )
        }
        Err(e) => Outcome::new(false, e),
    }
}

fn c2_conservation() -> Outcome {
    let models = [
        (
            "delta",
            NoiseModel::Delta {
                gamma0: 0.03,
                gamma1: 0.03,
                kbt: 1.0,
            },
        ),
        ("gaussian", gaussian(0.03, 0.03, 0.03, 0.03)),
        ("1/f", one_over_f(0.001)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, n) in &models {
        match run_cycles(n, 10.0, Representation::Matrix) {
            Ok(tr) => {
                let (mut tr_err, mut herm) = (0.0f64, 0.0f64);
                for s in &tr.states {
                    tr_err = tr_err.max((s.trace() - 1.0).abs());
                    herm = herm.max(s.to_matrix().hermiticity_error());
                }
                pass &= tr_err <= C2_TRACE_TOL && herm <= C2_HERMITICITY_TOL;
                parts.push(format!("{label}: trace {tr_err:.1e}, herm {herm:.1e}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{label}: error ({e})"));
            }
        }
    }

    let unitary = run_cycles(&NoiseModel::noiseless(), 10.0, Representation::Matrix).unwrap();
    let purity = unitary
        .states
        .iter()
        .map(|s| (s.purity() - 1.0).abs())
        .fold(0.0, f64::max);
    pass &= purity <= C2_PURITY_TOL;
    parts.push(format!("unitary |purity-1| {purity:.1e}"));

    // Step-doubling order estimate with coefficients evaluated directly.
    let n = gaussian(0.1, 0.1, 1.0, 1.0);
    let p = params();
    let end = |steps: usize| {
        let mut cfg = EvolveConfig::for_cycles(&p, 1.0, steps);
        cfg.use_table = false;
        cfg.sample_every = steps;
        let tr = evolve(&p, &n, &DensityMatrix::ground_z(), &cfg).unwrap();
        tr.final_state().bloch().to_array()
    };
    let dist = |a: [f64; 3], b: [f64; 3]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    };
    let (a, b, c) = (end(40), end(80), end(160));
    let order = (dist(a, b) / dist(b, c)).log2();
    pass &= (C2_ORDER.0..=C2_ORDER.1).contains(&order);
    parts.push(format!("RK4 order {order:.3}"));
    Outcome::new(pass, parts.join("; "))
}

fn c3_delta_mixing() -> Outcome {
    let n = NoiseModel::Delta {
        gamma0: 0.03,
        gamma1: 0.03,
        kbt: 1.0,
    };
    let tr = match run_cycles(&n, 10.0, Representation::Matrix) {
        Ok(tr) => tr,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let norms: Vec<f64> = tr.states.iter().map(|s| s.bloch().norm_sqr()).collect();
    let increases = norms.windows(2).filter(|w| w[1] > w[0]).count();
    let last = norms.last().unwrap().sqrt();
    Outcome::new(
        last < C3_FINAL_NORM && increases == 0,
        format!(
            "|R(10tau)| = {last:.3e} (< {C3_FINAL_NORM}), steps with growing |R|^2: {increases} of {}",
            norms.len() - 1
        ),
    )
}

fn c4_gaussian_band() -> Outcome {
    let losses: Vec<(f64, Result<f64, String>)> = [0.03, 1.0, 30.0]
        .into_iter()
        .map(|a| (a, loss_after_cycle(&gaussian(0.03, 0.03, a, a))))
        .collect();
    let detail = losses
        .iter()
        .map(|(a, l)| format!("alpha {a}: 1-|R(tau)| = {}", fmt_loss(l)))
        .collect::<Vec<_>>()
        .join(", ");
    let [low, mid, high] = [&losses[0].1, &losses[1].1, &losses[2].1];
    let pass = match (low, mid, high) {
        (Ok(l), Ok(m), Ok(h)) => {
            let band = (C4_LOW_BAND.0..=C4_LOW_BAND.1).contains(l);
            let near_unitary = *h < C4_HIGH_MAX;
            let ordered = l > m && m > h;
            band && near_unitary && ordered
        }
        _ => false,
    };
    Outcome::new(
        pass,
        format!(
            "{detail}; need low in [{}, {}], high < {C4_HIGH_MAX}, strictly decreasing",
            C4_LOW_BAND.0, C4_LOW_BAND.1
        ),
    )
}

fn c5_one_over_f() -> Outcome {
    let low = loss_after_cycle(&one_over_f(0.001));
    let high = loss_after_cycle(&one_over_f(0.1));
    let pass = match (&low, &high) {
        (Ok(l), Ok(h)) => (C5_BAND.0..=C5_BAND.1).contains(l) && l > h,
        _ => false,
    };
    Outcome::new(
        pass,
        format!(
            "Lambda 0.001: 1-|R(tau)| = {}, Lambda 0.1: {}; need first in [{}, {}] and larger",
            fmt_loss(&low),
            fmt_loss(&high),
            C5_BAND.0,
            C5_BAND.1
        ),
    )
}

fn c6_asymmetry() -> Outcome {
    let dev = |n: NoiseModel| phase_and_halving(&n).map(|(phi, _, _)| (ratio_of(phi) - 1.0).abs());
    let long = dev(gaussian(0.001, 0.0, 0.01, 0.01));
    let trans = dev(gaussian(0.0, 0.001, 0.01, 0.01));
    let pair_ok = matches!((&long, &trans), (Ok(l), Ok(t)) if l > t);
    let show = |r: &Result<f64, String>| match r {
        Ok(v) => format!("{v:.3e}"),
        Err(e) => format!("error ({e})"),
    };

    let cfg = protocol("fig8");
    let (base, slices) = match plan(&cfg, cfg.sweep.as_ref().unwrap()).unwrap() {
        Plan::Slices(b, s) => (b, s),
        Plan::Grid(_) => unreachable!("fig8 is a slice bundle"),
    };
    let results = run_slices(&base, &slices, &SweepOptions::default()).unwrap();
    let complete = results.iter().all(|r| r.errors.is_empty());
    let devs: Vec<(String, f64, usize)> = results
        .iter()
        .map(|r| (r.label.clone(), r.max_deviation(), r.errors.len()))
        .collect();
    let lead = devs.iter().find(|d| d.0 == "longitudinal_low").unwrap().1;
    let dominates = devs
        .iter()
        .filter(|d| d.0 != "longitudinal_low")
        .all(|d| lead > d.1);
    let slices_txt = devs
        .iter()
        .map(|(l, d, e)| format!("{l} {d:.3e} ({e} failed)"))
        .collect::<Vec<_>>()
        .join(", ");
    Outcome::new(
        pair_ok && complete && dominates,
        format!(
            "|ratio-1| longitudinal {} vs transverse {}; slices: {slices_txt}",
            show(&long),
            show(&trans)
        ),
    )
}

fn c7_high_frequency() -> Outcome {
    let cfg = protocol("fig7");
    let spec = match plan(&cfg, cfg.sweep.as_ref().unwrap()).unwrap() {
        Plan::Grid(s) => s,
        Plan::Slices(..) => unreachable!("fig7 is a grid"),
    };
    let opts = SweepOptions {
        threads: Some(8),
        ..SweepOptions::default()
    };
    let r = run_sweep(&spec, &opts).unwrap();
    let mut worst = (0.0f64, 0.0, 0.0);
    let mut outside = 0;
    for (i, row) in r.values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let d = (v - 1.0).abs();
            if !(d <= C7_RATIO_TOL) {
                outside += 1;
            }
            if !(d <= worst.0) {
                worst = (d, r.axis1.values[i], r.axis2.values[j]);
            }
        }
    }
    // Deviation along gamma0 (axis1) at each fixed gamma1 (axis2).
    let mut non_monotone = 0;
    for j in 0..r.axis2.values.len() {
        let col: Vec<f64> = r.values.iter().map(|row| (row[j] - 1.0).abs()).collect();
        if col.windows(2).any(|w| !(w[1] >= w[0])) {
            non_monotone += 1;
        }
    }
    let cells = r.axis1.values.len() * r.axis2.values.len();
    Outcome::new(
        outside == 0 && non_monotone == 0 && r.errors.is_empty(),
        format!(
            "{cells} cells, {outside} outside 2%, worst |ratio-1| = {:.4} at gamma0 {}, gamma1 {}; {non_monotone} gamma1 columns non-monotone in gamma0; {} failed",
            worst.0,
            worst.1,
            worst.2,
            r.errors.len()
        ),
    )
}

fn c8_oracles() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();

    let ci = (cosint(1.0).unwrap() - oracle::cosine_integral(1.0, SIMPSON_PANELS)).abs();
    let si = (sinint(1.0) - oracle::sine_integral(1.0, SIMPSON_PANELS)).abs();
    let x = 1e-10;
    let euler = (cosint(x).unwrap() - x.ln() - oracle::euler_gamma(SIMPSON_PANELS)).abs();
    pass &= ci < C8_SPECIAL_TOL && si < C8_SPECIAL_TOL && euler < C8_SPECIAL_TOL;
    parts.push(format!(
        "Ci(1) {ci:.1e}, Si(1) {si:.1e}, Ci(x)-ln x -> gamma {euler:.1e}"
    ));

    let p = params();
    let tau = p.period();
    let models = [
        gaussian(0.03, 0.02, 0.03, 0.03),
        gaussian(0.03, 0.03, 1.0, 30.0),
        one_over_f(0.001),
        one_over_f(0.1),
        NoiseModel::OneOverF {
            gamma: 0.03,
            lambda: 0.1,
            regime: OneOverFRegime::HighT { kbt: 1.0 },
        },
    ];
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    let mut coeff_err = 0.0f64;
    for _ in 0..C8_POINTS {
        let n = &models[rng.random_range(0..models.len())];
        let t = rng.random_range(0.0..3.0 * tau);
        let got = diffusion_coefficients(&p, n, t).unwrap().to_array();
        let want = oracle::coefficients(&p, n, t, SIMPSON_PANELS);
        for k in 0..6 {
            coeff_err = coeff_err.max((got[k] - want[k]).abs());
        }
    }
    pass &= coeff_err < C8_COEFF_TOL;
    parts.push(format!(
        "{C8_POINTS} coefficient points, max error {coeff_err:.1e}"
    ));

    let n = gaussian(0.03, 0.03, 1.0, 1.0);
    let m = run_cycles(&n, 1.0, Representation::Matrix).unwrap();
    let b = run_cycles(&n, 1.0, Representation::Bloch).unwrap();
    let repr = m
        .states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| {
            let (x, y) = (x.bloch().to_array(), y.bloch().to_array());
            (0..3).map(|k| (x[k] - y[k]).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    pass &= repr < C8_REPR_TOL;
    parts.push(format!("matrix vs Bloch {repr:.1e}"));
    Outcome::new(pass, parts.join("; "))
}

fn c9_gauge_and_convergence() -> Outcome {
    let points = [
        ("unitary", NoiseModel::noiseless()),
        ("longitudinal", gaussian(0.001, 0.0, 0.01, 0.01)),
        ("transverse", gaussian(0.0, 0.001, 0.01, 0.01)),
        ("fig7 (0.05, 0)", gaussian(0.05, 0.0, 10.0, 10.0)),
        ("fig7 (0, 0.05)", gaussian(0.0, 0.05, 10.0, 10.0)),
        ("fig7 (0.05, 0.05)", gaussian(0.05, 0.05, 10.0, 10.0)),
    ];
    let mut rng = StdRng::seed_from_u64(0x5eed_0009);
    let (mut gauge, mut halving) = (0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for (label, n) in &points {
        let (phi, dh, tr) = match phase_and_halving(n) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        halving = halving.max(dh);
        let eig: Vec<EigenPair> = tr.states.iter().map(|s| s.eigen()).collect();
        for _ in 0..4 {
            let rotated: Vec<EigenPair> = eig
                .iter()
                .map(|e| {
                    let a = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
                    let b = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
                    EigenPair {
                        v1: [e.v1[0] * a, e.v1[1] * a],
                        v2: [e.v2[0] * b, e.v2[1] * b],
                        ..*e
                    }
                })
                .collect();
            let shifted = phase_from_eigen(&rotated).unwrap().phi;
            gauge = gauge.max(phase_difference(shifted, phi).abs());
        }
    }
    let pass = failures.is_empty() && gauge < C9_GAUGE_TOL && halving < C9_HALVING_TOL;
    let mut detail = format!(
        "{} points: max gauge shift {gauge:.1e} (tol {C9_GAUGE_TOL:e}), max halving change {halving:.1e} (tol {C9_HALVING_TOL:e})",
        points.len()
    );
    if !failures.is_empty() {
        detail.push_str(&format!("; no phase at {}", failures.join(", ")));
    }
    Outcome::new(pass, detail)
}

/// Purity loss after one period for the two alpha values quoted for the
/// weak-coupling trajectories, against a reference loss of about 5%.
fn report_weak_coupling_loss() {
    for a in [0.03, 0.003] {
        let l = loss_after_cycle(&gaussian(0.03, 0.03, a, a));
        println!(
            "INFO  weak coupling, alpha {a}: 1-|R(tau)| = {} (reference about 0.05)",
            fmt_loss(&l)
        );
    }
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "unitary Berry phase",
            budget: Duration::from_secs(1),
            run: c1_unitary_phase,
        },
        Criterion {
            id: 2,
            name: "conservation suite",
            budget: Duration::from_secs(10),
            run: c2_conservation,
        },
        Criterion {
            id: 3,
            name: "delta-model mixing",
            budget: Duration::from_secs(5),
            run: c3_delta_mixing,
        },
        Criterion {
            id: 4,
            name: "Gaussian purity-loss band",
            budget: Duration::from_secs(10),
            run: c4_gaussian_band,
        },
        Criterion {
            id: 5,
            name: "1/f purity loss",
            budget: Duration::from_secs(10),
            run: c5_one_over_f,
        },
        Criterion {
            id: 6,
            name: "longitudinal/transverse asymmetry",
            budget: Duration::from_secs(60),
            run: c6_asymmetry,
        },
        Criterion {
            id: 7,
            name: "high-frequency robustness",
            budget: Duration::from_secs(300),
            run: c7_high_frequency,
        },
        Criterion {
            id: 8,
            name: "oracle equivalence",
            budget: Duration::from_secs(30),
            run: c8_oracles,
        },
        Criterion {
            id: 9,
            name: "gauge invariance and convergence",
            budget: Duration::from_secs(60),
            run: c9_gauge_and_convergence,
        },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let out = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let pass = out.pass && in_time;
        println!(
            "{} [{}] {}: {} [{:.2} s of {} s]",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            out.detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if !pass {
            failed.push(c.id);
        }
    }
    report_weak_coupling_loss();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!(
            "acceptance: {} of {} criteria failed: {failed:?}",
            failed.len(),
            criteria.len()
        );
        ExitCode::FAILURE
    }
}
