//! Preconditioned MINRES for symmetric (possibly indefinite) shifted systems.

use std::ops::Range;

use super::banded::BandedLdlt;
use super::sparse::{axpy, dot, SparseSymmetricOperator};
use crate::{Error, Result};

/// Block-Jacobi preconditioner: each diagonal block factored with banded
/// `LDLᵀ`. Blocks must be SPD.
#[derive(Debug, Clone)]
pub struct BlockJacobi {
    blocks: Vec<(Range<usize>, BandedLdlt)>,
    dim: usize,
}

impl BlockJacobi {
    pub fn new(op: &SparseSymmetricOperator, ranges: &[Range<usize>]) -> Result<Self> {
        let mut covered = 0;
        let mut blocks = Vec::with_capacity(ranges.len());
        for r in ranges {
            if r.start != covered {
                return Err(Error::InvalidInput(format!(
                    "block ranges must tile 0..{} contiguously, gap at {covered}",
                    op.dim()
                )));
            }
            let sub = op.principal_block(r.clone())?;
            let f = BandedLdlt::factor(&sub, 0.0)?;
            if f.negative_pivots() > 0 {
                return Err(Error::InvalidInput(format!(
                    "diagonal block {r:?} is not positive definite"
                )));
            }
            covered = r.end;
            blocks.push((r.clone(), f));
        }
        if covered != op.dim() {
            return Err(Error::InvalidInput(format!(
                "block ranges cover {covered} of {} unknowns",
                op.dim()
            )));
        }
        Ok(Self {
            blocks,
            dim: op.dim(),
        })
    }

    pub fn apply(&self, r: &[f64]) -> Vec<f64> {
        let mut z = r.to_vec();
        for (range, f) in &self.blocks {
            f.solve_in_place(&mut z[range.clone()]);
        }
        z
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MinresReport {
    pub iterations: usize,
    /// Preconditioned residual norm relative to the initial one.
    pub relative_residual: f64,
}

/// Solves `(A − shift·I) x = b` by preconditioned MINRES, started from zero.
pub fn minres(
    op: &SparseSymmetricOperator,
    shift: f64,
    b: &[f64],
    precond: &BlockJacobi,
    rtol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, MinresReport)> {
    let n = op.dim();
    let mut x = vec![0.0; n];
    let mut r1 = b.to_vec();
    let mut y = precond.apply(&r1);
    let beta1_sq = dot(&r1, &y);
    if beta1_sq < 0.0 {
        return Err(Error::InvalidInput("preconditioner is not positive definite".into()));
    }
    let beta1 = beta1_sq.sqrt();
    if beta1 == 0.0 {
        return Ok((
            x,
            MinresReport {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let mut r2 = r1.clone();
    let (mut oldb, mut beta) = (0.0, beta1);
    let (mut dbar, mut epsln, mut phibar) = (0.0, 0.0, beta1);
    let (mut cs, mut sn) = (-1.0f64, 0.0f64);
    let mut w = vec![0.0; n];
    let mut w2 = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut av = vec![0.0; n];
    for itn in 1..=max_iter {
        let s = 1.0 / beta;
        for (vi, yi) in v.iter_mut().zip(&y) {
            *vi = s * yi;
        }
        op.apply_into(&v, &mut av);
        let mut ynew = av.clone();
        axpy(-shift, &v, &mut ynew);
        if itn >= 2 {
            axpy(-beta / oldb, &r1, &mut ynew);
        }
        let alfa = dot(&v, &ynew);
        axpy(-alfa / beta, &r2, &mut ynew);
        r1 = std::mem::replace(&mut r2, ynew);
        y = precond.apply(&r2);
        oldb = beta;
        let bsq = dot(&r2, &y);
        if bsq < 0.0 {
            return Err(Error::InvalidInput("preconditioner is not positive definite".into()));
        }
        beta = bsq.sqrt();
        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = gbar.hypot(beta).max(f64::MIN_POSITIVE);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;
        let denom = 1.0 / gamma;
        let w1 = std::mem::replace(&mut w2, std::mem::take(&mut w));
        w = v
            .iter()
            .zip(&w1)
            .zip(&w2)
            .map(|((vi, a), b)| (vi - oldeps * a - delta * b) * denom)
            .collect();
        axpy(phi, &w, &mut x);
        let rel = phibar / beta1;
        if rel <= rtol || beta == 0.0 {
            return Ok((
                x,
                MinresReport {
                    iterations: itn,
                    relative_residual: rel,
                },
            ));
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        best_residual: phibar / beta1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::sparse::TripletBuilder;

    fn lap2d(m: usize) -> SparseSymmetricOperator {
        let n = m * m;
        let mut b = TripletBuilder::new(n);
        for i in 0..m {
            for j in 0..m {
                let p = i * m + j;
                b.add(p, p, 4.0);
                if j + 1 < m {
                    b.add_symmetric(p, p + 1, -1.0);
                }
                if i + 1 < m {
                    b.add_symmetric(p, p + m, -1.0);
                }
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn solves_indefinite_shifted_system() {
        let m = 12;
        let op = lap2d(m);
        let ranges: Vec<_> = (0..m).map(|i| i * m..(i + 1) * m).collect();
        let pre = BlockJacobi::new(&op, &ranges).unwrap();
        let b: Vec<f64> = (0..m * m).map(|i| ((i * 7) % 5) as f64 - 2.0).collect();
        // shift inside the spectrum: indefinite
        let shift = 1.234;
        let (x, rep) = minres(&op, shift, &b, &pre, 1e-12, 2000).unwrap();
        let mut r = op.apply(&x);
        axpy(-shift, &x, &mut r);
        let err: f64 = r.iter().zip(&b).map(|(a, c)| (a - c).powi(2)).sum::<f64>().sqrt();
        assert!(err < 1e-8, "residual {err}, {rep:?}");
    }

    #[test]
    fn bad_block_tiling_rejected() {
        let op = lap2d(3);
        assert!(BlockJacobi::new(&op, &[0..4, 5..9]).is_err());
        assert!(BlockJacobi::new(&op, &[0..4]).is_err());
    }
}
