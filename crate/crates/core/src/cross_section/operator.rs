use super::grid::Grid;
use super::shape::{scale_cross_section, scale_point, CrossSection};
use crate::numerics::sparse::{SparseSymmetricOperator, TripletBuilder};
use crate::{Error, Result};

/// Coefficients of `(t₂∂₃ − t₃∂₂)` at a node: the point whose coordinates
/// multiply the two partial derivatives.
pub(crate) type TwistCoeff<'a> = &'a dyn Fn([f64; 2]) -> [f64; 2];

/// Central-difference row of `a₂∂₃ − a₃∂₂` at node `k`; exterior
/// neighbours are Dirichlet zeros and drop out.
pub(crate) fn twist_row(grid: &Grid, k: usize, a: [f64; 2]) -> Vec<(usize, f64)> {
    let c = 0.5 / grid.h;
    let mut row = Vec::with_capacity(4);
    for (di, dj, v) in [(0, 1, a[0] * c), (0, -1, -a[0] * c), (1, 0, -a[1] * c), (-1, 0, a[1] * c)] {
        if let Some(q) = grid.neighbor(k, di, dj) {
            row.push((q, v));
        }
    }
    row
}

/// Adds `grad_w·|∇u|² + twist_w·|a₂∂₃u − a₃∂₂u|²` (integrated with the node
/// rule and divided by the cell area) to `b`, offsetting indices by `off`.
///
/// The gradient uses forward differences on every lattice edge touching an
/// interior node, which reproduces the 5-point Laplacian.
pub(crate) fn add_transverse_form(
    b: &mut TripletBuilder,
    grid: &Grid,
    off: usize,
    grad_w: f64,
    twist_w: f64,
    coeff: TwistCoeff,
) {
    let inv_h = 1.0 / grid.h;
    for k in 0..grid.len() {
        for (di, dj) in [(1, 0), (0, 1)] {
            match grid.neighbor(k, di, dj) {
                Some(q) => b.add_outer(&[(off + k, inv_h), (off + q, -inv_h)], grad_w),
                None => b.add_outer(&[(off + k, inv_h)], grad_w),
            }
            if grid.neighbor(k, -di, -dj).is_none() {
                b.add_outer(&[(off + k, inv_h)], grad_w);
            }
        }
        if twist_w != 0.0 {
            let row: Vec<(usize, f64)> = twist_row(grid, k, coeff(grid.point(k)))
                .into_iter()
                .map(|(q, v)| (off + q, v))
                .collect();
            b.add_outer(&row, twist_w);
        }
    }
}

fn build(grid: &Grid, grad_w: f64, twist_w: f64, coeff: TwistCoeff) -> Result<SparseSymmetricOperator> {
    let mut b = TripletBuilder::with_capacity(grid.len(), grid.len() * 24);
    add_transverse_form(&mut b, grid, 0, grad_w, twist_w, coeff);
    b.build()
}

/// Master grid of `ω`, anchored at the scaling center.
pub fn master_grid(cs: &CrossSection) -> Result<Grid> {
    let g = Grid::rasterize(&cs.shape, cs.scaling_center, cs.grid_spacing)?;
    g.check_resolution()?;
    Ok(g)
}

/// `h̃(α) = −Δ_D − β₀²(t₂∂₃ − t₃∂₂)²` assembled directly on `ω(α)`, with the
/// spacing of `cs` and nodes anchored at `t⁰`.
pub fn assemble_transverse_operator(cs: &CrossSection, alpha: f64, beta0: f64) -> Result<(Grid, SparseSymmetricOperator)> {
    let scaled = scale_cross_section(cs, alpha)?;
    let grid = master_grid(&scaled)?;
    let op = build(&grid, 1.0, beta0 * beta0, &|p| p)?;
    Ok((grid, op))
}

/// The unitarily equivalent operator on the unscaled `ω`:
/// `α⁻²[−Δ + β₀²|L_α u|²]` with `L_α = l_α(t)₂∂₃ − l_α(t)₃∂₂`.
///
/// On the master grid this is the same matrix one gets on `ω(α)` with
/// spacing `αh`, so its spectrum is an analytic function of `α`.
pub fn assemble_scaled_operator(cs: &CrossSection, alpha: f64, beta0: f64) -> Result<(Grid, SparseSymmetricOperator)> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!("scaling factor must be > 0, got {alpha}")));
    }
    let grid = master_grid(cs)?;
    let t0 = cs.scaling_center;
    let w = 1.0 / (alpha * alpha);
    let op = build(&grid, w, beta0 * beta0 * w, &|p| scale_point(p, t0, alpha))?;
    Ok((grid, op))
}

/// Samples `psi` on the interior nodes, rejecting functions that do not
/// vanish on the exterior ring of the grid.
pub fn sample_supported(grid: &Grid, psi: &dyn Fn([f64; 2]) -> f64) -> Result<Vec<f64>> {
    for p in grid.exterior_ring() {
        let v = psi(p);
        if v.abs() > 1e-12 {
            return Err(Error::SupportViolation(format!("psi({p:?}) = {v:e} outside the cross section")));
        }
    }
    Ok(grid.points().map(psi).collect())
}

/// `(ψ, h(α)ψ)` on the unscaled `ω` for a grid function on the master grid.
pub fn transverse_form_value(cs: &CrossSection, alpha: f64, beta0: f64, psi: &[f64]) -> Result<f64> {
    let (grid, op) = assemble_scaled_operator(cs, alpha, beta0)?;
    if psi.len() != grid.len() {
        return Err(Error::SupportViolation(format!(
            "grid function has {} values, the cross section has {} interior nodes",
            psi.len(),
            grid.len()
        )));
    }
    Ok(grid.h * grid.h * op.quadratic_form(psi))
}

/// Direct form on `ω(α)` applied to the unitary image `α⁻¹ψ∘l_α⁻¹`.
pub fn direct_form_value(cs: &CrossSection, alpha: f64, beta0: f64, psi: &dyn Fn([f64; 2]) -> f64) -> Result<f64> {
    let (grid, op) = assemble_transverse_operator(cs, alpha, beta0)?;
    let t0 = cs.scaling_center;
    let image = |p: [f64; 2]| psi(scale_point(p, t0, 1.0 / alpha)) / alpha;
    let u = sample_supported(&grid, &image)?;
    Ok(grid.h * grid.h * op.quadratic_form(&u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cross_section::shape::Shape;

    #[test]
    fn laplacian_rows_on_unit_square() {
        let sq = Shape::Polygon {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        };
        let cs = CrossSection::new(sq, [0.0, 0.0], 1.0 / 24.0).unwrap();
        let (g, op) = assemble_transverse_operator(&cs, 1.0, 0.0).unwrap();
        assert_eq!(g.len(), 23 * 23);
        let h2 = cs.grid_spacing.powi(2);
        for k in 0..g.len() {
            assert!((op.get(k, k) * h2 - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn twist_block_is_semidefinite_and_symmetric() {
        let cs = CrossSection::disc([0.3, 0.1], 1.0, [0.3, 0.1], 0.08).unwrap();
        let (_, op) = assemble_transverse_operator(&cs, 1.0, 2.0).unwrap();
        let (_, lap) = assemble_transverse_operator(&cs, 1.0, 0.0).unwrap();
        for k in 0..30 {
            let x: Vec<f64> = (0..op.dim()).map(|i| ((i * (k + 3)) as f64 * 0.37).sin()).collect();
            assert!(op.quadratic_form(&x) >= lap.quadratic_form(&x) - 1e-9);
        }
    }

    #[test]
    fn scaled_path_at_unit_alpha_is_direct_path() {
        let cs = CrossSection::disc([0.5, 0.0], 1.0, [0.5, 0.0], 0.05).unwrap();
        let (_, a) = assemble_transverse_operator(&cs, 1.0, 1.0).unwrap();
        let (_, b) = assemble_scaled_operator(&cs, 1.0, 1.0).unwrap();
        let x: Vec<f64> = (0..a.dim()).map(|i| (i as f64 * 0.1).cos()).collect();
        assert!((a.quadratic_form(&x) - b.quadratic_form(&x)).abs() < 1e-10 * a.quadratic_form(&x));
    }

    #[test]
    fn support_violation_rejected() {
        let cs = CrossSection::disc([0.0, 0.0], 1.0, [0.0, 0.0], 0.05).unwrap();
        let g = master_grid(&cs).unwrap();
        assert!(sample_supported(&g, &|_| 1.0).is_err());
        assert!(transverse_form_value(&cs, 1.0, 0.0, &[1.0, 2.0]).is_err());
    }
}
