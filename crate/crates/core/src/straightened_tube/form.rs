use rayon::prelude::*;

use super::config::{shear, TubeConfig};
use crate::cross_section::{add_transverse_form, master_grid, twist_row, Grid};
use crate::numerics::sparse::{SparseSymmetricOperator, TripletBuilder};
use crate::{Error, Result};

/// Assembled tube form on the interior slices `s_1 … s_{N−1}`; unknown
/// `(i − 1)·n_ω + k` is node `k` of the cross-section grid on slice `i`.
#[derive(Debug, Clone)]
pub struct TubeOperator {
    pub op: SparseSymmetricOperator,
    pub grid: Grid,
    pub s_nodes: Vec<f64>,
    pub ds: f64,
}

impl TubeOperator {
    pub fn n_omega(&self) -> usize {
        self.grid.len()
    }

    pub fn interior_slices(&self) -> usize {
        self.s_nodes.len() - 2
    }

    /// Unknown ranges of the interior slices.
    pub fn slice_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let n = self.n_omega();
        (0..self.interior_slices()).map(|i| i * n..(i + 1) * n).collect()
    }

    /// Full field on all slices, Dirichlet zeros at `±L`.
    pub fn to_field(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = self.n_omega();
        let mut out = vec![vec![0.0; n]];
        out.extend(x.chunks(n).map(|c| c.to_vec()));
        out.push(vec![0.0; n]);
        out
    }

    /// Interior unknowns of a full field.
    pub fn from_field(&self, field: &[Vec<f64>]) -> Vec<f64> {
        field[1..field.len() - 1].concat()
    }

    /// Cell volume `Δs·h²` relating `xᵀAx` to the form value.
    pub fn cell_volume(&self) -> f64 {
        self.ds * self.grid.h * self.grid.h
    }
}

/// Central-difference row of `h₂∂₂ + h₃∂₃` at node `k`.
fn shear_row(grid: &Grid, k: usize, h2: f64, h3: f64) -> Vec<(usize, f64)> {
    // a₂∂₃ − a₃∂₂ with a = (h₃, −h₂) is h₂∂₂ + h₃∂₃
    twist_row(grid, k, [h3, -h2])
}

/// Rows of the midpoint residual
/// `W = α(ψ_{i+1} − ψ_i)/Δs − (h₂∂₂ + h₃∂₃ + α̇)(ψ_i + ψ_{i+1})/2`
/// between slices `i` and `i + 1`, as `(slice, node, coeff)` triples.
fn midpoint_rows(config: &TubeConfig, grid: &Grid, s_mid: f64, ds: f64) -> (f64, Vec<Vec<(usize, usize, f64)>>) {
    let (a, ad) = config.alpha_profile.eval(s_mid);
    let t0 = config.cross_section.scaling_center;
    let rows = (0..grid.len())
        .map(|k| {
            let (h2, h3) = shear(grid.point(k), t0, a, ad, config.theta_rate);
            let mut r = vec![(1, k, a / ds - 0.5 * ad), (0, k, -a / ds - 0.5 * ad)];
            for (q, v) in shear_row(grid, k, h2, h3) {
                r.push((0, q, -0.5 * v));
                r.push((1, q, -0.5 * v));
            }
            r
        })
        .collect();
    (a, rows)
}

/// Assembles `q[ψ] = ∫ α⁻²(|α∂_sψ − h₂∂₂ψ − h₃∂₃ψ − α̇ψ|² + |∇_tψ|²)`
/// with Dirichlet conditions on `∂ω` and at `s = ±L`.
///
/// The longitudinal derivative lives on the staggered midpoints
/// `s_{i+1/2}`, where the zeroth-order and transverse terms are averaged
/// from the two neighbouring slices. The matrix is the form divided by the
/// cell volume, so its eigenvalues approximate those of the operator.
pub fn assemble_tube_form(config: &TubeConfig) -> Result<TubeOperator> {
    config.validate()?;
    let grid = master_grid(&config.cross_section)?;
    let s_nodes = config.s_nodes();
    let ns = s_nodes.len() - 1;
    let n_omega = grid.len();
    let unknowns = (ns - 1) * n_omega;
    if unknowns > config.memory_cap {
        let factor = (unknowns as f64 / config.memory_cap as f64).cbrt();
        return Err(Error::MemoryCap {
            unknowns,
            cap: config.memory_cap,
            suggested_spacing: config.cross_section.grid_spacing * factor,
        });
    }
    let ds = config.ds();
    let index = |slice: usize, k: usize| -> Option<usize> { (1..ns).contains(&slice).then(|| (slice - 1) * n_omega + k) };

    let parts: Vec<TripletBuilder> = (0..ns)
        .into_par_iter()
        .map(|i| {
            let mut b = TripletBuilder::with_capacity(unknowns, n_omega * 110);
            let (a, rows) = midpoint_rows(config, &grid, 0.5 * (s_nodes[i] + s_nodes[i + 1]), ds);
            let w = 1.0 / (a * a);
            for r in rows {
                let row: Vec<(usize, f64)> = r
                    .into_iter()
                    .filter_map(|(side, q, v)| index(i + side, q).map(|g| (g, v)))
                    .collect();
                if !row.is_empty() {
                    b.add_outer(&row, w);
                }
            }
            if let Some(off) = index(i, 0) {
                let a = config.alpha_profile.alpha(s_nodes[i]);
                add_transverse_form(&mut b, &grid, off, 1.0 / (a * a), 0.0, &|p| p);
            }
            b
        })
        .collect();
    let mut all = TripletBuilder::with_capacity(unknowns, parts.iter().map(|p| p.len()).sum());
    for p in parts {
        all.append(p);
    }
    let op = all.build()?;
    Ok(TubeOperator { op, grid, s_nodes, ds })
}

/// Transverse Dirichlet energy `Σ_edges |Δu/h|²` of one slice (node rule,
/// without the `h²` area factor).
fn slice_gradient_sum(grid: &Grid, u: &[f64]) -> f64 {
    let h = grid.h;
    let mut sum = 0.0;
    for k in 0..grid.len() {
        for (di, dj) in [(1, 0), (0, 1)] {
            let fwd = grid.neighbor(k, di, dj).map_or(0.0, |q| u[q]);
            sum += ((fwd - u[k]) / h).powi(2);
            if grid.neighbor(k, -di, -dj).is_none() {
                sum += (u[k] / h).powi(2);
            }
        }
    }
    sum
}

/// `∂₂u, ∂₃u` at node `k` by central differences with Dirichlet zeros.
fn central_gradient(grid: &Grid, u: &[f64], k: usize) -> (f64, f64) {
    let at = |di, dj| grid.neighbor(k, di, dj).map_or(0.0, |q| u[q]);
    let c = 0.5 / grid.h;
    ((at(1, 0) - at(-1, 0)) * c, (at(0, 1) - at(0, -1)) * c)
}

/// Form value and squared norm of a field given on all slices `0..=N`
/// (end slices need not vanish), by direct quadrature of the tube form:
/// midpoint rule in `s` for the longitudinal residual, trapezoidal rule in
/// `s` for the transverse energy and the norm, node rule in `t`.
pub fn tube_form_value(config: &TubeConfig, grid: &Grid, field: &[Vec<f64>]) -> Result<(f64, f64)> {
    let s_nodes = config.s_nodes();
    if field.len() != s_nodes.len() || field.iter().any(|f| f.len() != grid.len()) {
        return Err(Error::InvalidInput("field does not match the tube grid".into()));
    }
    let ds = config.ds();
    let h2a = grid.h * grid.h;
    let t0 = config.cross_section.scaling_center;
    let ns = s_nodes.len() - 1;
    let mut q = 0.0;
    for i in 0..ns {
        let sm = 0.5 * (s_nodes[i] + s_nodes[i + 1]);
        let (a, ad) = config.alpha_profile.eval(sm);
        let (u, v) = (&field[i], &field[i + 1]);
        let avg: Vec<f64> = u.iter().zip(v).map(|(x, y)| 0.5 * (x + y)).collect();
        let mut acc = 0.0;
        for k in 0..grid.len() {
            let (h2, h3) = shear(grid.point(k), t0, a, ad, config.theta_rate);
            let (d2, d3) = central_gradient(grid, &avg, k);
            let w = a * (v[k] - u[k]) / ds - h2 * d2 - h3 * d3 - ad * avg[k];
            acc += w * w;
        }
        q += ds * h2a * acc / (a * a);
    }
    let mut norm = 0.0;
    for (i, u) in field.iter().enumerate() {
        let wt = if i == 0 || i == ns { 0.5 * ds } else { ds };
        let a = config.alpha_profile.alpha(s_nodes[i]);
        q += wt * h2a * slice_gradient_sum(grid, u) / (a * a);
        norm += wt * h2a * u.iter().map(|x| x * x).sum::<f64>();
    }
    Ok((q, norm))
}

/// The untransformed helical form `∫ |∇_tψ|² + |∂_sψ + β₀(t₂∂₃ − t₃∂₂)ψ|²`
/// for `α ≡ 1`, with centred differences in `s` at the slices; an
/// independent discretization of the same quadratic form.
pub fn helical_form_value(config: &TubeConfig, grid: &Grid, field: &[Vec<f64>]) -> Result<f64> {
    let s_nodes = config.s_nodes();
    let ns = s_nodes.len() - 1;
    if field.len() != s_nodes.len() {
        return Err(Error::InvalidInput("field does not match the tube grid".into()));
    }
    if field[0].iter().chain(&field[ns]).any(|v| *v != 0.0) {
        return Err(Error::SupportViolation("field must vanish at s = ±L".into()));
    }
    let ds = config.ds();
    let b = config.theta_rate;
    let mut q = 0.0;
    for i in 1..ns {
        let u = &field[i];
        let mut acc = slice_gradient_sum(grid, u);
        for k in 0..grid.len() {
            let t = grid.point(k);
            let (d2, d3) = central_gradient(grid, u, k);
            let w = (field[i + 1][k] - field[i - 1][k]) / (2.0 * ds) + b * (t[0] * d3 - t[1] * d2);
            acc += w * w;
        }
        q += ds * grid.h * grid.h * acc;
    }
    Ok(q)
}
