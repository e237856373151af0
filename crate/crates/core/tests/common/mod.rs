//! Brute-force reference integrators shared by the oracle tests.

#![allow(dead_code)]

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

/// Heisenberg-picture `σ(t) = e^{iHt} σ e^{−iHt}` expanded on (σx, σy, σz),
/// computed by rotating the Bloch vector about `h = (Ω, 0, Δ)` with Rodrigues'
/// formula. `axis` is the Schrödinger operator's Bloch direction.
pub fn heisenberg_rotation(omega: f64, delta: f64, axis: [f64; 3], t: f64) -> [f64; 3] {
    let e = (omega * omega + delta * delta).sqrt();
    let n = [omega / e, 0.0, delta / e];
    // Heisenberg operators rotate opposite to Schrödinger states.
    let angle = -e * t;
    let (s, c) = angle.sin_cos();
    let dot = n[0] * axis[0] + n[1] * axis[1] + n[2] * axis[2];
    let cross = [
        n[1] * axis[2] - n[2] * axis[1],
        n[2] * axis[0] - n[0] * axis[2],
        n[0] * axis[1] - n[1] * axis[0],
    ];
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = axis[i] * c + cross[i] * s + n[i] * dot * (1.0 - c);
    }
    out
}
