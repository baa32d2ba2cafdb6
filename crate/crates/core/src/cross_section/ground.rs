use std::io::Write;

use serde::Serialize;

use super::grid::Grid;
use super::operator::assemble_scaled_operator;
use super::shape::CrossSection;
use crate::numerics::eigen::{smallest_eigenpairs, DEFAULT_EIGEN_TOL};
use crate::numerics::richardson::{extract_linear_coefficient, Extrapolation, Ladder};
use crate::{Error, Result};

/// Lowest eigenpair of `h(α)` on the master grid of `ω`.
///
/// The eigenfunction is the unitary image `f̃_α` on the unscaled `ω`,
/// normalized by the node rule `h² Σ f² = 1` and made positive.
#[derive(Debug, Clone, Serialize)]
pub struct TransverseGroundState {
    pub alpha: f64,
    pub beta0: f64,
    /// Energy on the grid of spacing `grid_spacing`.
    pub energy: f64,
    /// Energy on the grid of half the spacing.
    pub energy_fine: f64,
    /// Two-grid extrapolant `2E(h/2) − E(h)` (first-order boundary error).
    pub energy_extrapolated: f64,
    #[serde(skip)]
    pub eigenfunction: Vec<f64>,
    #[serde(skip)]
    pub grid: Grid,
    pub grid_spacing: f64,
    pub residual: f64,
    pub min_interior_value: f64,
}

impl TransverseGroundState {
    pub fn is_positive(&self) -> bool {
        self.min_interior_value > 0.0
    }
}

/// Smallest eigenpair of `h(α)` on one grid, normalized and made positive.
pub fn ground_state_single(cs: &CrossSection, alpha: f64, beta0: f64) -> Result<(Grid, f64, Vec<f64>, f64)> {
    let (grid, op) = assemble_scaled_operator(cs, alpha, beta0)?;
    let r = smallest_eigenpairs(&op, 1, DEFAULT_EIGEN_TOL)?;
    let mut v = r.eigenvectors.expect("vectors requested").swap_remove(0);
    let sum: f64 = v.iter().sum();
    let norm = grid.inner(&v, &v).sqrt();
    let s = sum.signum() / norm;
    v.iter_mut().for_each(|x| *x *= s);
    Ok((grid, r.eigenvalues[0], v, r.residual_norms[0]))
}

pub fn ground_state(cs: &CrossSection, alpha: f64, beta0: f64) -> Result<TransverseGroundState> {
    let (grid, e, f, res) = ground_state_single(cs, alpha, beta0)?;
    let fine = cs.with_spacing(0.5 * cs.grid_spacing);
    let (_, e_fine, _, _) = ground_state_single(&fine, alpha, beta0)?;
    let min_interior_value = f.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TransverseGroundState {
        alpha,
        beta0,
        energy: e,
        energy_fine: e_fine,
        energy_extrapolated: 2.0 * e_fine - e,
        eigenfunction: f,
        grid,
        grid_spacing: cs.grid_spacing,
        residual: res,
        min_interior_value,
    })
}

/// Extrapolated `E(α)`.
pub fn ground_energy(cs: &CrossSection, alpha: f64, beta0: f64) -> Result<f64> {
    let (_, e, _, _) = ground_state_single(cs, alpha, beta0)?;
    let (_, e_fine, _, _) = ground_state_single(&cs.with_spacing(0.5 * cs.grid_spacing), alpha, beta0)?;
    Ok(2.0 * e_fine - e)
}

/// `E⁽¹⁾ = dE/dα` at `α = 1` from the extrapolated energies on the default
/// ladder.
pub fn energy_slope(cs: &CrossSection, beta0: f64) -> Result<Extrapolation> {
    energy_slope_with(cs, beta0, &Ladder::default().points(), None)
}

pub fn energy_slope_with(cs: &CrossSection, beta0: f64, ladder: &[f64], tol: Option<f64>) -> Result<Extrapolation> {
    let r = extract_linear_coefficient(|e| ground_energy(cs, 1.0 + e, beta0), ladder, tol)?;
    if r.value >= 0.0 {
        return Err(Error::InvariantViolation(format!(
            "energy slope E1 = {} is not negative for a nested family",
            r.value
        )));
    }
    Ok(r)
}

/// Writes `alpha,energy` rows.
pub fn write_energy_curve_csv<W: Write>(rows: &[(f64, f64)], header: &[String], out: &mut W) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "# alpha: dimensionless scaling factor; energy: transverse ground energy E(alpha)")?;
    writeln!(out, "alpha,energy")?;
    for (a, e) in rows {
        writeln!(out, "{a:.12e},{e:.12e}")?;
    }
    Ok(())
}
