//! Richardson extrapolation of difference quotients, used to read off the
//! first-order coefficient of a quantity depending on a small parameter.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Geometric ladder `base, base/ratio, …` of `rungs` points.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Ladder {
    pub base: f64,
    pub ratio: f64,
    pub rungs: usize,
}

impl Default for Ladder {
    fn default() -> Self {
        Self {
            base: 1e-2,
            ratio: 2.0,
            rungs: 4,
        }
    }
}

impl Ladder {
    pub fn points(&self) -> Vec<f64> {
        (0..self.rungs)
            .map(|i| self.base / self.ratio.powi(i as i32))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Extrapolation {
    pub value: f64,
    /// `|last extrapolant − second to last|`.
    pub error_estimate: f64,
    /// Set when `error_estimate` exceeds the requested tolerance.
    pub flagged: bool,
}

/// Polynomial (Neville) extrapolation to `x = 0` of samples `(x_i, y_i)`.
///
/// Returns the full-order extrapolant and the best one of the order below
/// (built from the samples closest to zero).
pub fn extrapolate_to_zero(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len();
    assert!(n >= 1 && y.len() == n);
    let mut t = y.to_vec();
    let mut prev_best = y[n - 1];
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (x[i], x[i + level]);
            t[i] = (xj * t[i] - xi * t[i + 1]) / (xj - xi);
        }
        if level == n - 2 {
            prev_best = t[1];
        }
    }
    if n == 2 {
        prev_best = y[1];
    }
    (t[0], prev_best)
}

/// `df/dε` at `ε = 0` from forward quotients `(f(ε) − f(0))/ε` on a
/// strictly decreasing positive ladder.
pub fn extract_linear_coefficient<F>(f: F, ladder: &[f64], tol: Option<f64>) -> Result<Extrapolation>
where
    F: Fn(f64) -> Result<f64>,
{
    if ladder.len() < 2 {
        return Err(Error::InvalidInput("ladder needs at least two rungs".into()));
    }
    if ladder.iter().any(|&e| !(e > 0.0)) || ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput(format!(
            "ladder must be positive and strictly decreasing: {ladder:?}"
        )));
    }
    let f0 = f(0.0)?;
    let q: Vec<f64> = ladder
        .iter()
        .map(|&e| f(e).map(|v| (v - f0) / e))
        .collect::<Result<_>>()?;
    let (value, prev) = extrapolate_to_zero(ladder, &q);
    let error_estimate = (value - prev).abs();
    Ok(Extrapolation {
        value,
        error_estimate,
        flagged: tol.is_some_and(|t| error_estimate > t),
    })
}
