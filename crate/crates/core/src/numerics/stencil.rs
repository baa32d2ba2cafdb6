//! Second-order central-difference Dirichlet Laplacians on uniform grids.

use super::sparse::{SparseSymmetricOperator, TripletBuilder};
use crate::{Error, Result};

/// `−d²/dx²` on `n` interior nodes with spacing `h`.
pub fn laplacian_1d(n: usize, h: f64) -> Result<SparseSymmetricOperator> {
    if n == 0 || !(h > 0.0) {
        return Err(Error::InvalidInput(format!("need n > 0 and h > 0 (n = {n}, h = {h})")));
    }
    let c = 1.0 / (h * h);
    let mut b = TripletBuilder::with_capacity(n, 3 * n);
    for i in 0..n {
        b.add(i, i, 2.0 * c);
        if i + 1 < n {
            b.add_symmetric(i, i + 1, -c);
        }
    }
    b.build()
}

/// 5-point `−Δ` on an `nx × ny` interior grid, row-major in `x`.
pub fn laplacian_2d_rect(nx: usize, ny: usize, h: f64) -> Result<SparseSymmetricOperator> {
    if nx == 0 || ny == 0 || !(h > 0.0) {
        return Err(Error::InvalidInput("empty grid or non-positive spacing".into()));
    }
    let n = nx * ny;
    let c = 1.0 / (h * h);
    let mut b = TripletBuilder::with_capacity(n, 5 * n);
    for j in 0..ny {
        for i in 0..nx {
            let p = j * nx + i;
            b.add(p, p, 4.0 * c);
            if i + 1 < nx {
                b.add_symmetric(p, p + 1, -c);
            }
            if j + 1 < ny {
                b.add_symmetric(p, p + nx, -c);
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_grids() {
        assert!(laplacian_1d(0, 0.1).is_err());
        assert!(laplacian_1d(3, 0.0).is_err());
        assert!(laplacian_2d_rect(3, 0, 0.1).is_err());
    }

    #[test]
    fn row_sums_vanish_in_interior() {
        let op = laplacian_2d_rect(5, 5, 1.0).unwrap();
        let s: f64 = op.row(12).map(|(_, v)| v).sum();
        assert_eq!(s, 0.0);
    }
}
