//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature for vector-valued
//! integrands.
//!
//! All components share one subdivision; an interval's error is the largest
//! componentwise `|K21 − G10|`. The 21 Kronrod nodes are interior, so the
//! endpoints are never evaluated and integrable endpoint singularities
//! (such as the logarithmic one of the zero-temperature 1/f kernel) are
//! handled by bisection alone.

#![allow(clippy::excessive_precision, clippy::needless_range_loop)]

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_533_233_305_637,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<const N: usize> {
    pub value: [f64; N],
    pub abs_error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, o: &Self) -> bool {
        self.error.total_cmp(&o.error) == Ordering::Equal
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// One 21-point Kronrod evaluation with its embedded 10-point Gauss estimate.
fn gk21<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Panel<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    for c in 0..N {
        kron[c] = WGK[10] * fc[c];
    }
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(10).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for c in 0..N {
            let s = f1[c] + f2[c];
            kron[c] += w * s;
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * s;
            }
        }
    }
    let mut error = 0.0f64;
    let mut value = [0.0; N];
    for c in 0..N {
        value[c] = kron[c] * half;
        let e = ((kron[c] - gauss[c]) * half).abs();
        error = error.max(e);
    }
    Panel { a, b, value, error }
}

/// Integrate `f` over `[a, b]`, starting from the partition given by the
/// sorted interior `breaks` (points outside the range are ignored).
pub fn integrate<const N: usize, F>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    if a == b {
        return Ok(QuadResult {
            value: [0.0; N],
            abs_error: 0.0,
            intervals: 0,
            evaluations: 0,
        });
    }
    if a > b {
        let mut r = integrate(f, b, a, breaks, cfg)?;
        for v in r.value.iter_mut() {
            *v = -*v;
        }
        return Ok(r);
    }

    let mut heap: BinaryHeap<Panel<N>> = BinaryHeap::new();
    // Panels that cannot be bisected further in floating point.
    let mut frozen: Vec<Panel<N>> = Vec::new();
    let mut edges: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    edges.push(a);
    edges.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    edges.push(b);
    for w in edges.windows(2) {
        heap.push(gk21(&mut f, w[0], w[1]));
    }
    let mut evaluations = 21 * heap.len();

    let sums = |heap: &BinaryHeap<Panel<N>>, frozen: &[Panel<N>]| {
        let mut total = [0.0; N];
        let mut err = 0.0;
        for p in heap.iter().chain(frozen.iter()) {
            for c in 0..N {
                total[c] += p.value[c];
            }
            err += p.error;
        }
        (total, err)
    };
    let tolerance = |total: &[f64; N]| {
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        cfg.abs_tol.max(cfg.rel_tol * scale)
    };

    let (mut total, mut err) = sums(&heap, &frozen);
    loop {
        if err <= tolerance(&total) {
            // Re-sum to shed drift from the running updates.
            (total, err) = sums(&heap, &frozen);
            if err <= tolerance(&total) {
                return Ok(QuadResult {
                    value: total,
                    abs_error: err,
                    intervals: heap.len() + frozen.len(),
                    evaluations,
                });
            }
        }
        let intervals = heap.len() + frozen.len();
        let Some(worst) = heap.pop() else {
            return Err(quad_error(a, b, &total, err, intervals));
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            frozen.push(worst);
            continue;
        }
        if intervals + 1 > cfg.max_intervals {
            return Err(quad_error(a, b, &total, err, intervals));
        }
        let left = gk21(&mut f, worst.a, mid);
        let right = gk21(&mut f, mid, worst.b);
        evaluations += 42;
        for c in 0..N {
            total[c] += left.value[c] + right.value[c] - worst.value[c];
        }
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

fn quad_error<const N: usize>(a: f64, b: f64, total: &[f64; N], err: f64, n: usize) -> Error {
    Error::Quadrature {
        a,
        b,
        estimate: total.first().copied().unwrap_or(0.0),
        abs_error: err,
        intervals: n,
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate(|x| [f(x)], a, b, &[], cfg).map(|r| r.value[0])
}
