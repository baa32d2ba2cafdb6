//! Smallest eigenpairs of sparse symmetric operators by shift-invert Lanczos.
//!
//! The shifted operator `(A − σI)⁻¹` is applied either through a banded
//! `LDLᵀ` factorization (default) or through block-Jacobi preconditioned
//! MINRES for problems whose band would not fit in memory. With the direct
//! backend the result is certified by Sylvester inertia: after the Lanczos
//! passes, the number of negative pivots of `A − xI` just above the largest
//! reported eigenvalue must not exceed the number of eigenvalues found, and a
//! further deflated pass is run otherwise (this catches missed copies of
//! degenerate eigenvalues).

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::banded::BandedLdlt;
use super::krylov::{minres, BlockJacobi};
use super::sparse::{axpy, dot, norm, scale, SparseSymmetricOperator};
use super::tridiag::tridiagonal_eigen;
use crate::{Error, Result};

pub const DEFAULT_EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit ℓ² eigenvectors when requested.
    #[serde(skip)]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    /// `‖Av − λv‖ / ‖v‖` per pair.
    pub residual_norms: Vec<f64>,
    pub grid_spacing: Option<f64>,
    pub shift: f64,
    pub krylov_steps: usize,
    /// True when inertia confirmed that no eigenvalue below the largest
    /// reported one was missed.
    pub certified: bool,
    pub warnings: Vec<String>,
}

impl SpectralResult {
    pub fn empty(grid_spacing: Option<f64>) -> Self {
        Self {
            eigenvalues: vec![],
            eigenvectors: None,
            residual_norms: vec![],
            grid_spacing,
            shift: f64::NAN,
            krylov_steps: 0,
            certified: true,
            warnings: vec![],
        }
    }

    pub fn ground(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }
}

#[derive(Debug, Clone)]
pub enum Backend {
    Direct,
    /// MINRES inner solves, block-Jacobi preconditioned over `blocks`.
    Iterative {
        blocks: Vec<Range<usize>>,
        inner_tol: f64,
        max_inner: usize,
    },
}

#[derive(Debug, Clone)]
pub struct EigenOptions {
    pub tol: f64,
    /// Shift hint; defaults to just below the Gershgorin lower bound.
    pub shift: Option<f64>,
    pub max_subspace: usize,
    pub max_restarts: usize,
    /// Start vector; defaults to all-ones plus a fixed-seed perturbation.
    pub start: Option<Vec<f64>>,
    pub seed: u64,
    pub want_vectors: bool,
    pub backend: Backend,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_EIGEN_TOL,
            shift: None,
            max_subspace: 120,
            max_restarts: 30,
            start: None,
            seed: 0x5eed,
            want_vectors: true,
            backend: Backend::Direct,
        }
    }
}

enum Inverse {
    Direct(BandedLdlt),
    Iterative {
        pre: BlockJacobi,
        inner_tol: f64,
        max_inner: usize,
    },
}

impl Inverse {
    fn apply(&self, op: &SparseSymmetricOperator, shift: f64, b: &[f64]) -> Result<Vec<f64>> {
        match self {
            Inverse::Direct(f) => Ok(f.solve(b)),
            Inverse::Iterative {
                pre,
                inner_tol,
                max_inner,
            } => minres(op, shift, b, pre, *inner_tol, *max_inner).map(|(x, _)| x),
        }
    }
}

/// The `k` smallest eigenpairs with residuals at most `tol`.
pub fn smallest_eigenpairs(op: &SparseSymmetricOperator, k: usize, tol: f64) -> Result<SpectralResult> {
    smallest_eigenpairs_with(
        op,
        k,
        &EigenOptions {
            tol,
            ..Default::default()
        },
    )
}

pub fn smallest_eigenpairs_with(
    op: &SparseSymmetricOperator,
    k: usize,
    opts: &EigenOptions,
) -> Result<SpectralResult> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("need 1 <= k <= {n}, got {k}")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let (g_lo, g_hi) = op.gershgorin_bounds();
    let spread = (g_hi - g_lo).max(1.0);

    let (shift, inverse, below_shift) = match &opts.backend {
        Backend::Direct => {
            let (mut shift, mut f) = factor_near(op, opts.shift.unwrap_or(g_lo - 1e-3 * spread), spread)?;
            if opts.shift.is_none() && n > 1 {
                // the Gershgorin bound can sit far below the spectrum
                let est = pilot_estimate(&f, shift, n, opts.seed)?;
                let better = est - 0.1 * est.abs() - 1e-6 * spread;
                if better > shift {
                    (shift, f) = factor_near(op, better, spread)?;
                }
            }
            let c = f.negative_pivots();
            (shift, Inverse::Direct(f), Some(c))
        }
        Backend::Iterative {
            blocks,
            inner_tol,
            max_inner,
        } => {
            let shift = opts.shift.unwrap_or(g_lo - 1e-3 * spread);
            let pre = BlockJacobi::new(op, blocks)?;
            (
                shift,
                Inverse::Iterative {
                    pre,
                    inner_tol: *inner_tol,
                    max_inner: *max_inner,
                },
                None,
            )
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let fresh_start = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..n).map(|_| 1.0 + 0.5 * rng.gen_range(-1.0..1.0)).collect()
    };

    let mut found: Vec<Pair> = Vec::new();
    let mut steps = 0;
    let mut certified = false;
    let mut warnings = Vec::new();
    let max_passes = 6;
    let mut start = opts.start.clone().unwrap_or_else(|| fresh_start(&mut rng));
    if start.len() != n {
        return Err(Error::InvalidInput(format!(
            "start vector has length {}, operator {n}",
            start.len()
        )));
    }
    for pass in 0..max_passes {
        let locked: Vec<Vec<f64>> = found.iter().map(|p| p.vector.clone()).collect();
        let want = k.saturating_sub(found.len()).max(1).min(n - locked.len());
        let need_below = below_shift.map(|c| c.saturating_sub(count_below(&found, shift)));
        let (pairs, used) = lanczos(op, &inverse, shift, want, need_below, &locked, start, opts)?;
        steps += used;
        found.extend(pairs);
        found.sort_by(|a, b| a.value.total_cmp(&b.value));

        if found.len() < k {
            if found.len() >= n {
                break;
            }
            start = fresh_start(&mut rng);
            continue;
        }
        match &inverse {
            Inverse::Direct(_) => {
                let lk = found[k - 1].value;
                let margin = (1e-7 * lk.abs().max(1.0)).max(100.0 * opts.tol);
                let (x, count) = inertia_above(op, lk + margin, spread)?;
                let have = found.iter().filter(|p| p.value < x).count();
                if count <= have {
                    certified = true;
                    break;
                }
                if pass + 1 == max_passes {
                    warnings.push(format!(
                        "inertia reports {count} eigenvalues below {x}, found {have}"
                    ));
                }
                start = fresh_start(&mut rng);
            }
            Inverse::Iterative { .. } => {
                warnings.push("iterative backend: result not certified by inertia".into());
                break;
            }
        }
    }
    if found.len() < k {
        return Err(Error::NoConvergence {
            iterations: steps,
            best_residual: f64::INFINITY,
        });
    }
    found.truncate(k);
    Ok(SpectralResult {
        eigenvalues: found.iter().map(|p| p.value).collect(),
        residual_norms: found.iter().map(|p| p.residual).collect(),
        eigenvectors: opts
            .want_vectors
            .then(|| found.into_iter().map(|p| p.vector).collect()),
        grid_spacing: None,
        shift,
        krylov_steps: steps,
        certified,
        warnings,
    })
}

/// Factors `A − σI`, nudging `σ` downwards if a pivot is singular.
fn factor_near(op: &SparseSymmetricOperator, shift: f64, spread: f64) -> Result<(f64, BandedLdlt)> {
    let mut shift = shift;
    let mut attempt = 0;
    loop {
        match BandedLdlt::factor(op, shift) {
            Ok(f) => return Ok((shift, f)),
            Err(Error::SingularPivot { .. }) if attempt < 8 => {
                attempt += 1;
                shift -= 1e-7 * spread * (1 << attempt) as f64;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Upper estimate of the smallest eigenvalue from a short shift-invert
/// Lanczos run; `σ` must lie below the spectrum.
fn pilot_estimate(f: &BandedLdlt, shift: f64, n: usize, seed: u64) -> Result<f64> {
    const PILOT_STEPS: usize = 40;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut v: Vec<f64> = (0..n).map(|_| 1.0 + 0.5 * rng.gen_range(-1.0..1.0)).collect();
    scale(1.0 / norm(&v), &mut v);
    let mut basis = vec![v];
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    for j in 0..PILOT_STEPS.min(n) {
        let mut w = f.solve(&basis[j]);
        let a = dot(&w, &basis[j]);
        orthogonalize(&mut w, &basis);
        alphas.push(a);
        let b = norm(&w);
        if b <= 1e-13 * a.abs() || j + 1 == PILOT_STEPS.min(n) {
            break;
        }
        betas.push(b);
        scale(1.0 / b, &mut w);
        basis.push(w);
    }
    let (theta, _) = tridiagonal_eigen(&alphas, &betas)?;
    let top = theta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(if top > 0.0 { shift + 1.0 / top } else { shift })
}

fn count_below(found: &[Pair], x: f64) -> usize {
    found.iter().filter(|p| p.value < x).count()
}

/// Inertia of `A − xI`, nudging `x` upwards if the pivot is singular.
fn inertia_above(op: &SparseSymmetricOperator, x: f64, spread: f64) -> Result<(f64, usize)> {
    let mut x = x;
    for attempt in 0..8 {
        match BandedLdlt::factor(op, x) {
            Ok(f) => return Ok((x, f.negative_pivots())),
            Err(Error::SingularPivot { .. }) => x += 1e-9 * spread * (1 << attempt) as f64,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoConvergence {
        iterations: 8,
        best_residual: f64::NAN,
    })
}

#[derive(Debug, Clone)]
struct Pair {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
}

fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(w, b);
            axpy(-c, b, w);
        }
    }
}

/// Shift-invert Lanczos with full reorthogonalization and explicit restarts.
///
/// Returns `want` converged pairs (smallest eigenvalues of `A` restricted
/// to the complement of `locked`), or fewer when the Krylov space becomes
/// invariant first.
#[allow(clippy::too_many_arguments)]
fn lanczos(
    op: &SparseSymmetricOperator,
    inverse: &Inverse,
    shift: f64,
    want: usize,
    need_below: Option<usize>,
    locked: &[Vec<f64>],
    mut start: Vec<f64>,
    opts: &EigenOptions,
) -> Result<(Vec<Pair>, usize)> {
    let n = op.dim();
    let free = n - locked.len();
    let memory_limit = (2.0e8 / n as f64) as usize;
    let m_max = opts.max_subspace.min(free).min(memory_limit.max(want + 8)).max(1);
    let mut total = 0;
    let mut best_residual = f64::INFINITY;
    let (g_lo, _) = op.gershgorin_bounds();
    for _restart in 0..=opts.max_restarts {
        orthogonalize(&mut start, locked);
        let nv = norm(&start);
        if nv == 0.0 || !nv.is_finite() {
            return Err(Error::InvalidInput("start vector lies in the locked subspace".into()));
        }
        scale(1.0 / nv, &mut start);
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut candidates: Vec<Pair> = Vec::new();
        let check_every = 5;
        for j in 0..m_max {
            let mut w = inverse.apply(op, shift, &basis[j])?;
            total += 1;
            let alpha = dot(&w, &basis[j]);
            axpy(-alpha, &basis[j], &mut w);
            if j > 0 {
                axpy(-betas[j - 1], &basis[j - 1], &mut w);
            }
            orthogonalize(&mut w, locked);
            orthogonalize(&mut w, &basis);
            let beta = norm(&w);
            alphas.push(alpha);
            let m = j + 1;
            let scale_t = alphas.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let invariant = beta <= 1e-13 * scale_t || m == free;
            let due = m >= want && (m % check_every == 0 || invariant || m == m_max);
            if due {
                let (theta, y) = tridiagonal_eigen(&alphas, &betas)?;
                // λ = σ + 1/θ; drop Ritz values that map outside the spectrum
                let mut order: Vec<usize> = (0..m)
                    .filter(|&i| theta[i] != 0.0 && shift + 1.0 / theta[i] >= g_lo - 1e-9 * g_lo.abs().max(1.0))
                    .collect();
                order.sort_by(|&a, &b| (1.0 / theta[a]).total_cmp(&(1.0 / theta[b])));
                candidates.clear();
                let mut all_ok = true;
                let mut below_ok = 0;
                for &i in &order {
                    if candidates.len() >= want && need_below.is_none_or(|c| below_ok >= c) {
                        break;
                    }
                    let est = (beta * y[(m - 1) * m + i]).abs() / theta[i].abs();
                    let mut x = vec![0.0; n];
                    for (q, v) in basis.iter().enumerate() {
                        axpy(y[q * m + i], v, &mut x);
                    }
                    let nx = norm(&x);
                    scale(1.0 / nx, &mut x);
                    let value = op.rayleigh_quotient(&x);
                    let residual = op.residual_norm(value, &x);
                    best_residual = best_residual.min(residual);
                    let ok = residual <= opts.tol;
                    if !ok && est > 1e3 * opts.tol * (1.0 + value.abs()) && !invariant {
                        all_ok = false;
                        break;
                    }
                    if !ok {
                        all_ok = false;
                    }
                    if value < shift {
                        below_ok += 1;
                    }
                    candidates.push(Pair {
                        value,
                        vector: x,
                        residual,
                    });
                }
                let enough_below = need_below.is_none_or(|c| below_ok >= c);
                if all_ok && candidates.len() >= want.min(order.len()) && enough_below {
                    candidates.truncate(want.max(need_below.unwrap_or(0)));
                    return Ok((candidates, total));
                }
                if invariant {
                    // nothing more to learn from this Krylov space
                    if all_ok {
                        return Ok((candidates, total));
                    }
                    break;
                }
            }
            if j + 1 == m_max {
                break;
            }
            betas.push(beta);
            scale(1.0 / beta, &mut w);
            basis.push(w);
        }
        // explicit restart from the current best candidates
        if candidates.is_empty() {
            let (theta, y) = tridiagonal_eigen(&alphas, &betas[..alphas.len() - 1])?;
            let m = alphas.len();
            let top = (0..m).max_by(|&a, &b| theta[a].total_cmp(&theta[b])).unwrap();
            let mut x = vec![0.0; n];
            for (q, v) in basis.iter().enumerate().take(m) {
                axpy(y[q * m + top], v, &mut x);
            }
            start = x;
        } else {
            start = vec![0.0; n];
            for c in &candidates {
                axpy(1.0, &c.vector, &mut start);
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: total,
        best_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::stencil::{laplacian_1d, laplacian_2d_rect};
    use std::f64::consts::PI;

    #[test]
    fn diagonal_two_by_two() {
        let op = SparseSymmetricOperator::from_diagonal(&[1.0, 3.0]).unwrap();
        let r = smallest_eigenpairs(&op, 1, 1e-9).unwrap();
        assert!((r.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!(r.certified);
        let r = smallest_eigenpairs(&op, 2, 1e-9).unwrap();
        assert!((r.eigenvalues[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_laplacian_on_zero_pi() {
        let n = 2000;
        let h = PI / (n as f64 + 1.0);
        let op = laplacian_1d(n, h).unwrap();
        let r = smallest_eigenpairs(&op, 1, 1e-9).unwrap();
        // discrete: (4/h²) sin²(h/2)
        let discrete = 4.0 / (h * h) * (h / 2.0).sin().powi(2);
        assert!((r.eigenvalues[0] - discrete).abs() < 1e-9);
        assert!((r.eigenvalues[0] - 1.0).abs() < h * h);
        assert!(r.residual_norms[0] <= 1e-9);
    }

    #[test]
    fn unit_square_degenerate_pair_found() {
        let m = 30;
        let h = 1.0 / (m as f64 + 1.0);
        let op = laplacian_2d_rect(m, m, h).unwrap();
        let r = smallest_eigenpairs(&op, 3, 1e-9).unwrap();
        let e = |p: f64, q: f64| 4.0 / (h * h) * ((p * PI * h / 2.0).sin().powi(2) + (q * PI * h / 2.0).sin().powi(2));
        assert!((r.eigenvalues[0] - e(1.0, 1.0)).abs() < 1e-8);
        assert!((r.eigenvalues[1] - e(1.0, 2.0)).abs() < 1e-8);
        assert!((r.eigenvalues[2] - e(2.0, 1.0)).abs() < 1e-8);
        assert!(r.certified);
        assert!((r.eigenvalues[0] - 2.0 * PI * PI).abs() < 0.02);
    }

    #[test]
    fn shift_hint_inside_spectrum() {
        let n = 200;
        let h = PI / (n as f64 + 1.0);
        let op = laplacian_1d(n, h).unwrap();
        let opts = EigenOptions {
            shift: Some(5.0),
            ..Default::default()
        };
        let r = smallest_eigenpairs_with(&op, 3, &opts).unwrap();
        for (i, v) in r.eigenvalues.iter().enumerate() {
            let p = (i + 1) as f64;
            assert!((v - 4.0 / (h * h) * (p * h / 2.0).sin().powi(2)).abs() < 1e-8);
        }
    }

    #[test]
    fn iterative_backend_agrees() {
        let m = 20;
        let h = 1.0 / (m as f64 + 1.0);
        let op = laplacian_2d_rect(m, m, h).unwrap();
        let opts = EigenOptions {
            shift: Some(15.0),
            backend: Backend::Iterative {
                blocks: (0..m).map(|i| i * m..(i + 1) * m).collect(),
                inner_tol: 1e-13,
                max_inner: 2000,
            },
            ..Default::default()
        };
        let r = smallest_eigenpairs_with(&op, 1, &opts).unwrap();
        let direct = smallest_eigenpairs(&op, 1, 1e-9).unwrap();
        assert!((r.eigenvalues[0] - direct.eigenvalues[0]).abs() < 1e-8);
        assert!(!r.certified);
    }

    #[test]
    fn rejects_bad_arguments() {
        let op = SparseSymmetricOperator::from_diagonal(&[1.0, 3.0]).unwrap();
        assert!(smallest_eigenpairs(&op, 0, 1e-9).is_err());
        assert!(smallest_eigenpairs(&op, 3, 1e-9).is_err());
        assert!(smallest_eigenpairs(&op, 1, 0.0).is_err());
    }
}
