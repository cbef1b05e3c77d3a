#![allow(dead_code)]

use std::f64::consts::PI;

/// `I_n(x) = (1/π) ∫_0^π e^{x cos θ} cos(nθ) dθ` by the trapezoid rule,
/// which converges exponentially for this periodic integrand.
pub fn bessel_i(n: i32, x: f64) -> f64 {
    let m = 4000;
    let h = PI / m as f64;
    let f = |t: f64| (x * t.cos()).exp() * (n as f64 * t).cos();
    let mut s = 0.5 * (f(0.0) + f(PI));
    for k in 1..m {
        s += f(k as f64 * h);
    }
    s * h / PI
}

/// `⟨cos θ⟩` for a single U(1) plaquette: `I₁(β)/I₀(β)`.
pub fn u1_plaquette(beta: f64) -> f64 {
    bessel_i(1, beta) / bessel_i(0, beta)
}

/// Exact average plaquette of 2D U(1) on a periodic lattice with `np`
/// plaquettes: `Σ_n I_n' I_n^{np−1} / Σ_n I_n^{np}`.
pub fn u1_torus_plaquette(beta: f64, np: i32) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for n in -30..=30 {
        let i = bessel_i(n, beta);
        let di = 0.5 * (bessel_i(n - 1, beta) + bessel_i(n + 1, beta));
        num += di * i.powi(np - 1);
        den += i.powi(np);
    }
    num / den
}

/// One-plaquette SU(2): class-angle density `sin²θ e^{β cos θ}` on `[0, π]`.
pub fn su2_plaquette(beta: f64) -> f64 {
    let m = 20_000;
    let h = PI / m as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..=m {
        let t = k as f64 * h;
        let w = if k == 0 || k == m { 0.5 } else { 1.0 };
        let d = w * t.sin().powi(2) * (beta * t.cos()).exp();
        num += d * t.cos();
        den += d;
    }
    num / den
}

/// One-plaquette SU(3) from the Weyl integration formula over the two
/// independent eigen-angles.
pub fn su3_plaquette(beta: f64) -> f64 {
    let m = 400;
    let h = 2.0 * PI / m as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..m {
        for j in 0..m {
            let a = i as f64 * h;
            let b = j as f64 * h;
            let c = -a - b;
            let vd = |x: f64, y: f64| 2.0 - 2.0 * (x - y).cos();
            let w = vd(a, b) * vd(a, c) * vd(b, c);
            let re_tr = (a.cos() + b.cos() + c.cos()) / 3.0;
            let d = w * (beta * re_tr).exp();
            num += d * re_tr;
            den += d;
        }
    }
    num / den
}

/// Mean and its standard error, inflated by `2 τ_int`.
pub fn mean_with_error(series: &[f64]) -> (f64, f64) {
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let tau = lattice_gauge::bench::integrated_autocorrelation(series)
        .map(|r| r.tau_int)
        .unwrap_or(0.5);
    (mean, (2.0 * tau * var / n).sqrt())
}
