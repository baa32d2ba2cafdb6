use crate::{Error, Result};

/// Absolute tolerance used when checking `A[i][j] == A[j][i]`.
pub const SYMMETRY_TOL: f64 = 1e-14;

/// Accumulates `(row, col, value)` contributions; duplicates are summed.
#[derive(Debug, Clone)]
pub struct TripletBuilder {
    dim: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(dim: usize, cap: usize) -> Self {
        Self {
            dim,
            entries: Vec::with_capacity(cap),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.dim && col < self.dim);
        self.entries.push((row, col, value));
    }

    /// Adds `value` at `(i, j)` and `(j, i)` (once on the diagonal).
    #[inline]
    pub fn add_symmetric(&mut self, i: usize, j: usize, value: f64) {
        self.add(i, j, value);
        if i != j {
            self.add(j, i, value);
        }
    }

    /// Adds `wᵀw · weight` for a sparse row `w` given as `(col, coeff)` pairs.
    ///
    /// This is how every squared first-order term `|D ψ|²` of a quadratic
    /// form lands in the matrix: the result is symmetric by construction.
    pub fn add_outer(&mut self, row: &[(usize, f64)], weight: f64) {
        for (i, &(a, va)) in row.iter().enumerate() {
            self.add(a, a, weight * va * va);
            for &(b, vb) in &row[i + 1..] {
                let v = weight * va * vb;
                self.add(a, b, v);
                self.add(b, a, v);
            }
        }
    }

    /// Moves all entries of `other` into `self`.
    pub fn append(&mut self, mut other: TripletBuilder) {
        debug_assert_eq!(self.dim, other.dim);
        self.entries.append(&mut other.entries);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn build(self) -> Result<SparseSymmetricOperator> {
        SparseSymmetricOperator::from_triplets(self.dim, self.entries)
    }
}

/// Symmetric sparse matrix in CSR layout, the discrete stand-in for a
/// quadratic form.
#[derive(Debug, Clone)]
pub struct SparseSymmetricOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymmetricOperator {
    /// Builds the operator, summing duplicates, and rejects asymmetric or
    /// non-finite input.
    pub fn from_triplets(dim: usize, mut entries: Vec<(usize, usize, f64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("operator dimension must be positive".into()));
        }
        if let Some(&(r, c, _)) = entries.iter().find(|&&(r, c, _)| r >= dim || c >= dim) {
            return Err(Error::InvalidInput(format!(
                "entry ({r}, {c}) outside dimension {dim}"
            )));
        }
        // stable: mirrored duplicates are summed in the same order
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let op = Self {
            dim,
            row_ptr,
            col_idx,
            values,
        };
        op.check()?;
        Ok(op)
    }

    /// Diagonal matrix, mostly for tests.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let entries = diag.iter().enumerate().map(|(i, &d)| (i, i, d)).collect();
        Self::from_triplets(diag.len(), entries)
    }

    /// Symmetry within [`SYMMETRY_TOL`] and finite entries.
    fn check(&self) -> Result<()> {
        for i in 0..self.dim {
            if !self.get(i, i).is_finite() {
                return Err(Error::InvalidInput(format!("diagonal entry {i} is not finite")));
            }
            for (j, v) in self.row(i) {
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!("entry ({i}, {j}) is not finite")));
                }
                if j > i {
                    let t = self.get(j, i);
                    if (v - t).abs() > SYMMETRY_TOL {
                        return Err(Error::Asymmetric {
                            row: i,
                            col: j,
                            value: v,
                            transpose: t,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterator over `(col, value)` of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[a..b].iter().copied().zip(self.values[a..b].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        match self.col_idx[a..b].binary_search(&j) {
            Ok(k) => self.values[a + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for i in 0..self.dim {
            let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut acc = 0.0;
            for k in a..b {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[i] = acc;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.apply_into(x, &mut y);
        y
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| x[i] * self.row(i).map(|(j, v)| v * x[j]).sum::<f64>())
            .sum()
    }

    /// `xᵀAx / xᵀx`.
    pub fn rayleigh_quotient(&self, x: &[f64]) -> f64 {
        self.quadratic_form(x) / dot(x, x)
    }

    /// Lower and upper Gershgorin bounds of the spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let mut d = 0.0;
            let mut r = 0.0;
            for (j, v) in self.row(i) {
                if j == i {
                    d = v;
                } else {
                    r += v.abs();
                }
            }
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }

    /// Half bandwidth `max |i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.dim)
            .flat_map(|i| self.row(i).map(move |(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }

    /// Principal submatrix on the contiguous index range `range`.
    pub fn principal_block(&self, range: std::ops::Range<usize>) -> Result<Self> {
        let off = range.start;
        let mut entries = Vec::new();
        for i in range.clone() {
            for (j, v) in self.row(i) {
                if range.contains(&j) {
                    entries.push((i - off, j - off, v));
                }
            }
        }
        Self::from_triplets(range.len(), entries)
    }

    /// Dense row-major copy; only sensible for small dimensions.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.dim]; self.dim];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        m
    }

    /// `‖A x − λ x‖ / ‖x‖`.
    pub fn residual_norm(&self, lambda: f64, x: &[f64]) -> f64 {
        let ax = self.apply(x);
        let r: f64 = ax
            .iter()
            .zip(x)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        r / norm(x)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += a x`.
#[inline]
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn scale(a: f64, x: &mut [f64]) {
    x.iter_mut().for_each(|v| *v *= a);
}
