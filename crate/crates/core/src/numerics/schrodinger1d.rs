//! Bound states of `−d²/ds² + V` on `[−L, L]` with Dirichlet ends.
//!
//! Nodes may be graded: with `h±` the neighbouring gaps and lumped mass
//! `m_i = (h₋ + h₊)/2`, the symmetrised matrix is
//! `M^{−1/2} K M^{−1/2} + V`, which is the usual three-point stencil on a
//! uniform grid.

use super::eigen::SpectralResult;
use super::sparse::norm;
use super::tridiag::tridiagonal_solve_shifted;
use crate::{Error, Result};

/// Potential sampled on increasing nodes from `−L` to `L`, endpoints
/// included.
#[derive(Debug, Clone)]
pub struct SampledPotential {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledPotential {
    /// Uniform nodes `s_i = −L + i·h`.
    pub fn from_fn<F: Fn(f64) -> f64>(f: F, half_length: f64, spacing: f64) -> Result<Self> {
        if !(half_length > 0.0) || !(spacing > 0.0) {
            return Err(Error::InvalidInput("box half-length and spacing must be positive".into()));
        }
        let n = (2.0 * half_length / spacing).round().max(2.0) as usize;
        let h = 2.0 * half_length / n as f64;
        let nodes: Vec<f64> = (0..=n).map(|i| -half_length + i as f64 * h).collect();
        Self::from_nodes(f, nodes)
    }

    /// Uniform spacing `core_spacing` on `[−a, a]`, then gaps growing by
    /// `growth` per node (capped at `max_spacing`) out to `±L`.
    pub fn graded<F: Fn(f64) -> f64>(
        f: F,
        core_half_length: f64,
        core_spacing: f64,
        half_length: f64,
        growth: f64,
        max_spacing: f64,
    ) -> Result<Self> {
        if !(core_spacing > 0.0)
            || !(core_half_length > 0.0)
            || !(half_length > core_half_length)
            || !(growth >= 1.0)
            || !(max_spacing >= core_spacing)
        {
            return Err(Error::InvalidInput(format!(
                "bad graded grid: a = {core_half_length}, h = {core_spacing}, L = {half_length}, growth = {growth}, max = {max_spacing}"
            )));
        }
        let n = (core_half_length / core_spacing).ceil() as usize;
        let h = core_half_length / n as f64;
        let mut right: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let mut gap = h;
        while *right.last().unwrap() < half_length {
            gap = (gap * growth).min(max_spacing);
            let next = right.last().unwrap() + gap;
            right.push(if half_length - next < 0.5 * gap { half_length } else { next });
        }
        let last = right.len() - 1;
        right[last] = half_length;
        let mut nodes: Vec<f64> = right[1..].iter().rev().map(|x| -x).collect();
        nodes.extend_from_slice(&right);
        Self::from_nodes(f, nodes)
    }

    pub fn from_nodes<F: Fn(f64) -> f64>(f: F, nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("nodes must be strictly increasing, at least three".into()));
        }
        let values = nodes.iter().map(|&s| f(s)).collect();
        Ok(Self { nodes, values })
    }

    pub fn half_length(&self) -> f64 {
        0.5 * (self.nodes[self.nodes.len() - 1] - self.nodes[0])
    }

    pub fn min_spacing(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    /// Node gaps `s_{i+1} − s_i`.
    fn gaps(&self) -> Vec<f64> {
        self.nodes.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Lumped masses of the interior nodes.
    pub fn masses(&self) -> Vec<f64> {
        self.gaps().windows(2).map(|g| 0.5 * (g[0] + g[1])).collect()
    }
}

/// Number of eigenvalues below `lambda`, from the sign changes of the
/// Dirichlet solution `ψ₀ = 0`, `ψ₁ = 1` advanced in flux form
/// `F_i = F_{i−1} + m_i(V_i − λ)ψ_i`, `ψ_{i+1} = ψ_i + g_i F_i`. This is the
/// Sturm sequence of the same matrix, but it never forms `2/h² − λ`, so
/// eigenvalues much smaller than `1/h²` keep their relative accuracy.
fn count_below(gaps: &[f64], mass: &[f64], v: &[f64], lambda: f64) -> usize {
    let mut psi = 1.0f64;
    let mut flux = 1.0 / gaps[0];
    let mut changes = 0;
    for i in 0..v.len() {
        flux += mass[i] * (v[i] - lambda) * psi;
        let next = psi + gaps[i + 1] * flux;
        if next == 0.0 || next.signum() != psi.signum() {
            changes += 1;
        }
        psi = if next == 0.0 { -psi * f64::EPSILON } else { next };
        let a = psi.abs().max((flux * gaps[i + 1]).abs());
        if a > 1e150 {
            psi /= a;
            flux /= a;
        }
    }
    changes
}

/// Eigenvalue `idx` in `[lo, hi]` by bisection on [`count_below`], to
/// relative precision.
fn bisect_flux(gaps: &[f64], mass: &[f64], v: &[f64], idx: usize, lo: f64, hi: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b || b - a <= 1e-14 * a.abs().max(b.abs()) {
            break;
        }
        if count_below(gaps, mass, v, mid) > idx {
            b = mid;
        } else {
            a = mid;
        }
    }
    0.5 * (a + b)
}

/// Tolerance for `|V(±L) − E0|` before the result carries a truncation warning.
pub const SETTLED_TOL: f64 = 1e-8;

/// All eigenvalues strictly below `e0`, with residuals. Eigenvectors are
/// `√m_i ψ(s_i)` on the interior nodes, orthonormal in the plain sum.
pub fn solve_1d_schrodinger(pot: &SampledPotential, e0: f64) -> Result<SpectralResult> {
    if pot.values.len() < 3 || pot.values.len() != pot.nodes.len() {
        return Err(Error::InvalidInput("need matching nodes and values, at least one interior node".into()));
    }
    if pot.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("potential must be finite".into()));
    }
    let gaps = pot.gaps();
    let mass = pot.masses();
    let inner = &pot.values[1..pot.values.len() - 1];
    let diag: Vec<f64> = inner
        .iter()
        .enumerate()
        .map(|(i, v)| (1.0 / gaps[i] + 1.0 / gaps[i + 1]) / mass[i] + v)
        .collect();
    let off: Vec<f64> = (0..diag.len() - 1)
        .map(|i| -1.0 / (gaps[i + 1] * (mass[i] * mass[i + 1]).sqrt()))
        .collect();
    let hmin = pot.min_spacing();
    let c = 1.0 / (hmin * hmin);

    let mut result = SpectralResult::empty(Some(hmin));
    let ends = [pot.values[0], *pot.values.last().unwrap()];
    if ends.iter().any(|v| (v - e0).abs() > SETTLED_TOL * e0.abs().max(1.0)) {
        result.warnings.push(format!(
            "potential not settled at box ends: V(±L) = {ends:?}, E0 = {e0}"
        ));
    }

    let count = count_below(&gaps, &mass, inner, e0);
    let vmin = inner.iter().copied().fold(f64::INFINITY, f64::min);
    let lo = vmin.min(e0) - 1.0;
    let mut vectors = Vec::with_capacity(count);
    for idx in 0..count {
        let lambda = bisect_flux(&gaps, &mass, inner, idx, lo, e0);
        let tol = 4.0 * f64::EPSILON * (lo.abs().max(e0.abs()) + 4.0 * c);
        // inverse iteration
        let mut x: Vec<f64> = (0..diag.len()).map(|i| 1.0 + ((i * 7919) % 13) as f64 * 1e-3).collect();
        let perturbed = lambda + tol.max(1e-13 * lambda.abs().max(1.0));
        for _ in 0..3 {
            x = tridiagonal_solve_shifted(&diag, &off, perturbed, &x);
            let nx = norm(&x);
            x.iter_mut().for_each(|v| *v /= nx);
        }
        let mut r2 = 0.0;
        for i in 0..diag.len() {
            let mut ax = diag[i] * x[i];
            if i > 0 {
                ax += off[i - 1] * x[i - 1];
            }
            if i + 1 < diag.len() {
                ax += off[i] * x[i + 1];
            }
            r2 += (ax - lambda * x[i]).powi(2);
        }
        result.eigenvalues.push(lambda);
        result.residual_norms.push(r2.sqrt());
        vectors.push(x);
    }
    result.eigenvectors = Some(vectors);
    result.shift = e0;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::roots::find_sign_change;

    #[test]
    fn free_operator_has_no_bound_states() {
        let pot = SampledPotential::from_fn(|_| 0.0, 10.0, 0.05).unwrap();
        let r = solve_1d_schrodinger(&pot, 0.0).unwrap();
        assert!(r.eigenvalues.is_empty());
        assert!(r.warnings.is_empty());
    }

    /// Even ground state of a finite well of depth `v0`, half-width `a`:
    /// `k tan(k a) = κ` with `k² + κ² = v0`.
    fn finite_well_ground(v0: f64, a: f64) -> f64 {
        let g = |k: f64| k * (k * a).tan() - (v0 - k * k).sqrt();
        let kmax = (std::f64::consts::FRAC_PI_2 / a).min(v0.sqrt()) * (1.0 - 1e-12);
        let k = find_sign_change(g, 1e-12, kmax, 1e-15).unwrap();
        -(v0 - k * k)
    }

    #[test]
    fn square_well_matches_transcendental_root() {
        let exact = finite_well_ground(1.0, 1.0);
        let well = |s: f64| {
            if s.abs() < 1.0 {
                -1.0
            } else if s.abs() == 1.0 {
                -0.5
            } else {
                0.0
            }
        };
        let pot = SampledPotential::from_fn(well, 16.0, 5e-4).unwrap();
        let r = solve_1d_schrodinger(&pot, 0.0).unwrap();
        assert!((r.eigenvalues[0] - exact).abs() < 1e-6, "{} vs {exact}", r.eigenvalues[0]);
        assert!(r.residual_norms[0] < 1e-6);
    }

    #[test]
    fn shallow_well_weak_coupling() {
        let eps = 0.01;
        let pot = SampledPotential::from_fn(|s| if s.abs() <= 1.0 { -eps } else { 0.0 }, 1500.0, 0.05).unwrap();
        let r = solve_1d_schrodinger(&pot, 0.0).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        let predicted = -0.25 * (2.0 * eps).powi(2);
        assert!((r.eigenvalues[0] / predicted - 1.0).abs() < 0.1);
    }

    #[test]
    fn graded_grid_matches_uniform() {
        let eps = 0.01;
        let well = |s: f64| if s.abs() <= 1.0 { -eps * (1.0 - s * s) } else { 0.0 };
        let uni = solve_1d_schrodinger(&SampledPotential::from_fn(well, 1500.0, 0.02).unwrap(), 0.0).unwrap();
        let pot = SampledPotential::graded(well, 2.0, 0.02, 1500.0, 1.05, 5.0).unwrap();
        assert!(pot.nodes.len() < 2000);
        let gr = solve_1d_schrodinger(&pot, 0.0).unwrap();
        assert_eq!(gr.eigenvalues.len(), 1);
        assert!((gr.eigenvalues[0] / uni.eigenvalues[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn very_shallow_well_keeps_relative_accuracy() {
        // eigenvalue ~1e-12, far below the rounding level of 2/h² ~ 2e4
        let v0 = 1e-6;
        let well = |s: f64| if s.abs() < 1.0 { -v0 * (1.0 - s * s) } else { 0.0 };
        let pot = SampledPotential::graded(well, 1.5, 0.01, 1.2e7, 1.02, 2e4).unwrap();
        let r = solve_1d_schrodinger(&pot, 0.0).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        let predicted = -0.25 * (4.0 * v0 / 3.0).powi(2);
        assert!((r.eigenvalues[0] / predicted - 1.0).abs() < 1e-4, "{} vs {predicted}", r.eigenvalues[0]);
    }

    #[test]
    fn unsettled_potential_is_flagged() {
        let pot = SampledPotential::from_fn(|s| -0.5 * (-s * s / 50.0).exp(), 5.0, 0.05).unwrap();
        let r = solve_1d_schrodinger(&pot, 0.0).unwrap();
        assert_eq!(r.warnings.len(), 1);
    }
}
