use serde::Serialize;

use super::config::TubeConfig;
use super::form::{assemble_tube_form, TubeOperator};
use crate::cross_section::{ground_state_single, Grid};
use crate::numerics::banded::BandedLdlt;
use crate::numerics::eigen::{smallest_eigenpairs_with, Backend, EigenOptions, SpectralResult, DEFAULT_EIGEN_TOL};
use crate::Result;

/// Largest banded factorization attempted before switching to the
/// iterative backend.
pub const DIRECT_MEMORY_BUDGET: usize = 1 << 30;

/// Discrete threshold `E(1)`: ground energy of `h(1)` on the same
/// cross-section grid as the tube.
pub fn discrete_threshold(config: &TubeConfig) -> Result<f64> {
    Ok(ground_state_single(&config.cross_section, 1.0, config.theta_rate)?.1)
}

#[derive(Debug, Clone, Default)]
pub struct TubeSolveOptions {
    pub start: Option<Vec<f64>>,
    pub shift: Option<f64>,
    pub tol: Option<f64>,
    /// Forces the iterative backend even when a banded factor would fit.
    pub force_iterative: bool,
}

/// Smallest `k` eigenpairs of an assembled tube form. The default shift is
/// just below the threshold, where the wanted eigenvalues are.
pub fn solve_tube(t: &TubeOperator, threshold: f64, k: usize, opts: &TubeSolveOptions) -> Result<SpectralResult> {
    let direct = !opts.force_iterative && BandedLdlt::memory_estimate(&t.op) <= DIRECT_MEMORY_BUDGET;
    let backend = if direct {
        Backend::Direct
    } else {
        Backend::Iterative {
            blocks: t.slice_ranges(),
            inner_tol: 1e-11,
            max_inner: 4000,
        }
    };
    let eo = EigenOptions {
        tol: opts.tol.unwrap_or(DEFAULT_EIGEN_TOL),
        shift: Some(opts.shift.unwrap_or(0.9 * threshold)),
        start: opts.start.clone(),
        backend,
        ..Default::default()
    };
    let mut r = smallest_eigenpairs_with(&t.op, k, &eo)?;
    r.grid_spacing = Some(t.grid.h);
    Ok(r)
}

/// Outcome of the bound-state search with its box-size check.
#[derive(Debug, Clone, Serialize)]
pub struct BoundStateReport {
    pub threshold: f64,
    /// Eigenvalues below this count as candidates.
    pub cutoff: f64,
    pub box_half_lengths: [f64; 2],
    /// Lowest eigenvalues for the two boxes.
    pub eigenvalues: [Vec<f64>; 2],
    pub residuals: [Vec<f64>; 2],
    /// Candidates that persist in the larger box.
    pub bound_states: Vec<f64>,
    pub certified: bool,
    pub unknowns: [usize; 2],
}

/// Fraction of the candidate depth by which it may move between boxes.
pub const PERSISTENCE_TOL: f64 = 0.1;

/// Fraction of `(π/2L)²` subtracted from the threshold for the cutoff.
pub const CUTOFF_SAFETY: f64 = 0.1;

/// Eigenvalues strictly below the threshold (less a fraction of the
/// lowest box mode energy `(π/2L)²`), kept if they persist when the box is
/// enlarged by half.
pub fn bound_states_below_threshold(config: &TubeConfig, k: usize) -> Result<BoundStateReport> {
    let threshold = discrete_threshold(config)?;
    let cutoff = threshold - CUTOFF_SAFETY * (std::f64::consts::PI / (2.0 * config.s_box)).powi(2);
    let big = TubeConfig {
        s_box: 1.5 * config.s_box,
        ..config.clone()
    };
    let mut runs = Vec::with_capacity(2);
    for c in [config, &big] {
        let t = assemble_tube_form(c)?;
        let r = solve_tube(&t, threshold, k, &TubeSolveOptions::default())?;
        runs.push((t.op.dim(), r));
    }
    let (small, large) = (&runs[0].1, &runs[1].1);
    let bound_states = small
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l < cutoff)
        .filter(|&(j, &l)| {
            large
                .eigenvalues
                .get(j)
                .is_some_and(|&m| m < cutoff && (m - l).abs() <= PERSISTENCE_TOL * (threshold - l))
        })
        .map(|(_, &l)| l)
        .collect();
    Ok(BoundStateReport {
        threshold,
        cutoff,
        box_half_lengths: [config.s_box, big.s_box],
        eigenvalues: [small.eigenvalues.clone(), large.eigenvalues.clone()],
        residuals: [small.residual_norms.clone(), large.residual_norms.clone()],
        bound_states,
        certified: small.certified && large.certified,
        unknowns: [runs[0].0, runs[1].0],
    })
}

/// Bilinear value of a grid function at `p`, with Dirichlet zeros off the
/// grid.
pub fn interpolate_on_grid(grid: &Grid, u: &[f64], p: [f64; 2]) -> f64 {
    let x = (p[0] - grid.origin[0]) / grid.h;
    let y = (p[1] - grid.origin[1]) / grid.h;
    let (i, j) = (x.floor(), y.floor());
    let (fx, fy) = (x - i, y - j);
    let (i, j) = (i as i64, j as i64);
    let at = |a: i64, b: i64| grid.node_at(a, b).map_or(0.0, |k| u[k]);
    (1.0 - fx) * (1.0 - fy) * at(i, j) + fx * (1.0 - fy) * at(i + 1, j) + (1.0 - fx) * fy * at(i, j + 1) + fx * fy * at(i + 1, j + 1)
}

/// Interpolates an eigenvector of `coarse` onto the unknowns of `fine`
/// (linear in `s`, bilinear in `t`, zero outside the coarse box).
pub fn interpolate_tube_vector(coarse: &TubeOperator, x: &[f64], fine: &TubeOperator) -> Vec<f64> {
    let field = coarse.to_field(x);
    let (s0, ds) = (coarse.s_nodes[0], coarse.ds);
    let last = coarse.s_nodes.len() - 1;
    let mut out = Vec::with_capacity(fine.op.dim());
    for &s in &fine.s_nodes[1..fine.s_nodes.len() - 1] {
        let r = (s - s0) / ds;
        let (slab, w) = if r <= 0.0 || r >= last as f64 {
            (None, 0.0)
        } else {
            let i = (r.floor() as usize).min(last - 1);
            (Some(i), r - i as f64)
        };
        for k in 0..fine.grid.len() {
            let p = fine.grid.point(k);
            out.push(match slab {
                None => 0.0,
                Some(i) => {
                    (1.0 - w) * interpolate_on_grid(&coarse.grid, &field[i], p)
                        + w * interpolate_on_grid(&coarse.grid, &field[i + 1], p)
                }
            });
        }
    }
    out
}

/// Result of re-solving on a larger, finer grid.
#[derive(Debug, Clone, Serialize)]
pub struct RefinementCheck {
    pub coarse_threshold: f64,
    pub coarse_eigenvalue: f64,
    pub fine_threshold: f64,
    pub fine_eigenvalue: f64,
    pub fine_residual: f64,
    pub coarse_unknowns: usize,
    pub fine_unknowns: usize,
    /// `|depth_fine − depth_coarse| / depth_coarse` with depth `E(1) − λ`.
    pub relative_depth_shift: f64,
    pub fine_certified: bool,
}

/// Ground-state depth below the threshold on `config` and on a copy with
/// the box scaled by `box_factor` and both spacings by `spacing_factor`.
/// The fine solve starts from the interpolated coarse eigenvector.
pub fn refinement_check(config: &TubeConfig, box_factor: f64, spacing_factor: f64) -> Result<RefinementCheck> {
    let ct = discrete_threshold(config)?;
    let coarse = assemble_tube_form(config)?;
    let cr = solve_tube(&coarse, ct, 1, &TubeSolveOptions::default())?;
    let fine_cfg = TubeConfig {
        s_box: box_factor * config.s_box,
        s_spacing: spacing_factor * config.s_spacing,
        cross_section: config
            .cross_section
            .with_spacing(spacing_factor * config.cross_section.grid_spacing),
        ..config.clone()
    };
    let ft = discrete_threshold(&fine_cfg)?;
    let fine = assemble_tube_form(&fine_cfg)?;
    let coarse_vec = &cr.eigenvectors.as_ref().expect("vectors requested")[0];
    let start = interpolate_tube_vector(&coarse, coarse_vec, &fine);
    let depth = ct - cr.eigenvalues[0];
    let opts = TubeSolveOptions {
        start: Some(start),
        shift: Some(ft - 1.5 * depth.max(0.0) - 1e-3),
        tol: Some(1e-7),
        force_iterative: false,
    };
    let fr = solve_tube(&fine, ft, 1, &opts)?;
    let fdepth = ft - fr.eigenvalues[0];
    Ok(RefinementCheck {
        coarse_threshold: ct,
        coarse_eigenvalue: cr.eigenvalues[0],
        fine_threshold: ft,
        fine_eigenvalue: fr.eigenvalues[0],
        fine_residual: fr.residual_norms[0],
        coarse_unknowns: coarse.op.dim(),
        fine_unknowns: fine.op.dim(),
        relative_depth_shift: (fdepth - depth).abs() / depth.abs(),
        fine_certified: fr.certified,
    })
}
