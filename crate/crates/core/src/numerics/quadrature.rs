//! Composite Simpson and adaptive Gauss–Legendre quadrature.

use crate::{Error, Result};

/// Composite Simpson over uniformly spaced samples; needs an odd number of
/// samples (even number of intervals).
pub fn simpson_samples(y: &[f64], h: f64) -> Result<f64> {
    let n = y.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "Simpson needs an odd number >= 3 of samples, got {n}"
        )));
    }
    let mut s = y[0] + y[n - 1];
    for (i, v) in y.iter().enumerate().take(n - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(s * h / 3.0)
}

/// Composite Simpson of `f` on `[a, b]` with `intervals` (rounded up to even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let y: Vec<f64> = (0..=n).map(|i| f(a + i as f64 * h)).collect();
    simpson_samples(&y, h).expect("odd sample count by construction")
}

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

/// 8-point Gauss–Legendre on `[a, b]`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS.iter())
        .map(|(x, w)| w * f(c + r * x))
        .sum::<f64>()
        * r
}

/// Adaptive bisection on 8-point Gauss–Legendre panels until halves and
/// whole agree to `tol` (absolute, distributed over panels).
pub fn adaptive_gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let l = gauss_legendre(f, a, m);
        let r = gauss_legendre(f, m, b);
        if depth == 0 || (l + r - whole).abs() <= tol {
            return l + r;
        }
        rec(f, a, m, l, 0.5 * tol, depth - 1) + rec(f, m, b, r, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    rec(f, a, b, gauss_legendre(f, a, b), tol, 40)
}

/// Adaptive Gauss–Legendre split at `breaks` (points where `f` loses
/// smoothness); `breaks` outside `(a, b)` are ignored. Works for `b < a`.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    if b < a {
        return -integrate_with_breaks(f, b, a, breaks, tol);
    }
    let mut pts = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    pts.extend(inner);
    pts.push(b);
    let pieces = (pts.len() - 1) as f64;
    pts.windows(2)
        .map(|w| {
            // unit panels keep the first estimate meaningful on long intervals
            let len = w[1] - w[0];
            let panels = len.ceil().max(1.0) as usize;
            let h = len / panels as f64;
            (0..panels)
                .map(|p| {
                    let x0 = w[0] + p as f64 * h;
                    adaptive_gauss(f, x0, x0 + h, tol / (pieces * panels as f64))
                })
                .sum::<f64>()
        })
        .sum()
}
