//! Symmetric tridiagonal eigenproblems: implicit QL for the small Lanczos
//! matrices and Sturm bisection for long 1D Hamiltonians.

use crate::{Error, Result};

/// Eigen-decomposition of a symmetric tridiagonal matrix.
///
/// `diag` has length `n`, `off` has length `n - 1` (`off[i]` couples `i` and
/// `i + 1`). Returns eigenvalues ascending and eigenvectors as columns of a
/// row-major `n × n` matrix (`vecs[k * n + j]` is component `k` of vector `j`).
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    assert_eq!(off.len() + 1, n);
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::NoConvergence {
                    iterations: iter,
                    best_residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zk = &mut z[k * n..(k + 1) * n];
                    let f = zk[i + 1];
                    zk[i + 1] = s * zk[i] + c * f;
                    zk[i] = c * zk[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let vals = order.iter().map(|&j| d[j]).collect();
    let mut vecs = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vecs[k * n + new] = z[k * n + old];
        }
    }
    Ok((vals, vecs))
}

/// Number of eigenvalues strictly below `lambda` (Sturm sequence).
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        let qs = if q == 0.0 { f64::EPSILON * (diag[i].abs() + 1.0) } else { q };
        q = diag[i] - lambda - e2 / qs;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalue with index `idx` (0-based, ascending) inside `[lo, hi]`,
/// bisected to absolute width `tol`.
pub fn bisect_eigenvalue(diag: &[f64], off: &[f64], idx: usize, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if sturm_count(diag, off, mid) > idx {
            b = mid;
        } else {
            a = mid;
        }
    }
    0.5 * (a + b)
}

/// Solves `(T − shift) x = b` for tridiagonal `T` with partial pivoting, for
/// inverse iteration.
pub fn tridiagonal_solve_shifted(diag: &[f64], off: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    // Gaussian elimination with partial pivoting on a tridiagonal band
    // (upper band grows to two superdiagonals).
    let mut a: Vec<[f64; 3]> = (0..n)
        .map(|i| {
            [
                diag[i] - shift,
                if i + 1 < n { off[i] } else { 0.0 },
                0.0,
            ]
        })
        .collect();
    let mut sub: Vec<f64> = (0..n).map(|i| if i + 1 < n { off[i] } else { 0.0 }).collect();
    let mut x = b.to_vec();
    let tiny = f64::EPSILON * diag.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 0..n.saturating_sub(1) {
        if sub[i].abs() > a[i][0].abs() {
            // swap rows i and i+1
            let ri = a[i];
            let next = [sub[i], a[i + 1][0], a[i + 1][1]];
            a[i] = next;
            let bottom = ri;
            a[i + 1] = [bottom[1], bottom[2], 0.0];
            sub[i] = bottom[0];
            x.swap(i, i + 1);
        }
        if a[i][0].abs() < tiny {
            a[i][0] = tiny;
        }
        let m = sub[i] / a[i][0];
        a[i + 1][0] -= m * a[i][1];
        a[i + 1][1] -= m * a[i][2];
        x[i + 1] -= m * x[i];
    }
    if a[n - 1][0].abs() < tiny {
        a[n - 1][0] = tiny;
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        if i + 1 < n {
            s -= a[i][1] * x[i + 1];
        }
        if i + 2 < n {
            s -= a[i][2] * x[i + 2];
        }
        x[i] = s / a[i][0];
    }
    x
}
