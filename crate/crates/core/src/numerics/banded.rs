//! Banded `LDLᵀ` factorization without pivoting.
//!
//! Used for shift-invert solves on grid operators whose natural ordering is
//! already banded; the sign pattern of `D` gives the inertia of `A − σI`
//! (Sylvester), i.e. the number of eigenvalues below `σ`.

use super::sparse::SparseSymmetricOperator;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandedLdlt {
    n: usize,
    bw: usize,
    /// Row `i` stores `L[i][i-bw..i]` at `band[i*bw..(i+1)*bw]`; column
    /// `k` of the row sits at offset `k + bw - i`.
    band: Vec<f64>,
    d: Vec<f64>,
    negative: usize,
}

impl BandedLdlt {
    /// Bytes needed to factor `op`.
    pub fn memory_estimate(op: &SparseSymmetricOperator) -> usize {
        (op.bandwidth() + 1) * op.dim() * std::mem::size_of::<f64>()
    }

    /// Factors `A − shift·I`.
    pub fn factor(op: &SparseSymmetricOperator, shift: f64) -> Result<Self> {
        let n = op.dim();
        let bw = op.bandwidth();
        let mut band = vec![0.0; n * bw];
        let mut d = vec![0.0; n];
        for i in 0..n {
            for (j, v) in op.row(i) {
                if j < i {
                    band[i * bw + j + bw - i] = v;
                } else if j == i {
                    d[i] = v - shift;
                }
            }
        }
        let scale = d.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let mut negative = 0;
        // w[k] = L[j][k] d[k] for the current row j
        let mut w = vec![0.0; bw];
        for j in 0..n {
            let k0 = j.saturating_sub(bw);
            let rj = j * bw;
            let mut dj = d[j];
            for k in k0..j {
                let l = band[rj + k + bw - j];
                w[k + bw - j] = l * d[k];
                dj -= l * l * d[k];
            }
            if !dj.is_finite() || dj.abs() <= 1e-14 * scale {
                return Err(Error::SingularPivot { index: j, pivot: dj });
            }
            if dj < 0.0 {
                negative += 1;
            }
            d[j] = dj;
            for i in (j + 1)..n.min(j + bw + 1) {
                let ri = i * bw;
                let ki0 = i.saturating_sub(bw).max(k0);
                let mut acc = band[ri + j + bw - i];
                let li = &band[ri + ki0 + bw - i..ri + j + bw - i];
                let wj = &w[ki0 + bw - j..bw];
                for (a, b) in li.iter().zip(wj) {
                    acc -= a * b;
                }
                band[ri + j + bw - i] = acc / dj;
            }
        }
        Ok(Self {
            n,
            bw,
            band,
            d,
            negative,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of negative pivots = number of eigenvalues of `A` below the shift.
    pub fn negative_pivots(&self) -> usize {
        self.negative
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, bw) = (self.n, self.bw);
        assert_eq!(x.len(), n);
        for i in 0..n {
            let k0 = i.saturating_sub(bw);
            let row = &self.band[i * bw + k0 + bw - i..i * bw + bw];
            let s: f64 = row.iter().zip(&x[k0..i]).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in 0..n {
            x[i] /= self.d[i];
        }
        for i in (0..n).rev() {
            let k0 = i.saturating_sub(bw);
            let xi = x[i];
            let row = &self.band[i * bw + k0 + bw - i..i * bw + bw];
            for (l, v) in row.iter().zip(&mut x[k0..i]) {
                *v -= l * xi;
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
