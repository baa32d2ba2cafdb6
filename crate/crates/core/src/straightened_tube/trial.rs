use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bound::discrete_threshold;
use super::config::{AlphaProfile, TubeConfig};
use super::form::{assemble_tube_form, tube_form_value};
use crate::cross_section::{ground_state_single, Grid};
use crate::{Error, Result};

/// Largest value of `φ_δ(±L)` accepted when the tails are truncated.
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// How the exponential tails of `φ_δ` beyond the box are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TailPolicy {
    /// The tails must have decayed below [`TAIL_TOLERANCE`] inside the box.
    Truncate,
    /// The parts beyond `±L`, where `α ≡ 1` and `Ψ = f·φ_δ` exactly, are
    /// added in closed form: they contribute `δe^{−2δ(L−s₀)}` to the gap
    /// and `e^{−2δ(L−s₀)}/δ` to the norm.
    #[default]
    Analytic,
}

/// Longitudinal factor: 1 on `|s| ≤ s₀`, `e^{−δ(|s|−s₀)}` outside.
pub fn phi_delta(s: f64, s0: f64, delta: f64) -> f64 {
    (-delta * (s.abs() - s0).max(0.0)).exp()
}

/// `Ψ(s_i, ·) = φ_δ(s_i) f_{α(s_i)}` on every slice of the tube grid.
#[derive(Debug, Clone)]
pub struct TrialFunction {
    pub grid: Grid,
    pub s_nodes: Vec<f64>,
    /// One row per slice, including the two end slices.
    pub field: Vec<Vec<f64>>,
    pub s0: f64,
    pub delta: f64,
    pub tail: TailPolicy,
}

/// Builds the trial function for `config`, whose profile must dominate the
/// tent `1 + ε(s₀ − |s|)₊` and equal 1 at the box ends.
pub fn trial_function(config: &TubeConfig, s0: f64, eps: f64, decay_delta: f64, tail: TailPolicy) -> Result<TrialFunction> {
    config.validate()?;
    if !(decay_delta > 0.0) || !(s0 > 0.0) || !(eps >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "need s0 > 0, eps >= 0, decay_delta > 0; got {s0}, {eps}, {decay_delta}"
        )));
    }
    let s_nodes = config.s_nodes();
    let lower = AlphaProfile::Tent {
        epsilon: eps,
        s0,
        cap_width: 0.0,
    };
    let sharp = AlphaProfile::tent(eps, s0);
    for &s in &s_nodes {
        let a = config.alpha_profile.alpha(s);
        // the mollified tent sits slightly below the kinked one at its peak
        if a < lower.alpha(s).min(sharp.alpha(s)) - 1e-12 {
            return Err(Error::InvalidInput(format!(
                "profile does not dominate the tent at s = {s}: {a} < {}",
                lower.alpha(s)
            )));
        }
    }
    let edge = phi_delta(config.s_box, s0, decay_delta);
    if tail == TailPolicy::Truncate && edge > TAIL_TOLERANCE {
        return Err(Error::InvalidInput(format!(
            "box too short for the tails: φ_δ(L) = {edge:e}, need L >= {}",
            s0 + TAIL_TOLERANCE.recip().ln() / decay_delta
        )));
    }
    if config.alpha_profile.support_radius().max(s0) >= config.s_box {
        return Err(Error::InvalidInput("profile support or s0 reaches the box ends".into()));
    }
    let mut keys: Vec<u64> = s_nodes.iter().map(|&s| config.alpha_profile.alpha(s).to_bits()).collect();
    keys.sort_unstable();
    keys.dedup();
    let states: Vec<(u64, Grid, Vec<f64>)> = keys
        .par_iter()
        .map(|&k| {
            let (g, _, f, _) = ground_state_single(&config.cross_section, f64::from_bits(k), config.theta_rate)?;
            Ok((k, g, f))
        })
        .collect::<Result<_>>()?;
    let grid = states[0].1.clone();
    let cache: HashMap<u64, Vec<f64>> = states.into_iter().map(|(k, _, f)| (k, f)).collect();
    let field = s_nodes
        .iter()
        .map(|&s| {
            let p = phi_delta(s, s0, decay_delta);
            let f = &cache[&config.alpha_profile.alpha(s).to_bits()];
            f.iter().map(|v| p * v).collect()
        })
        .collect();
    Ok(TrialFunction {
        grid,
        s_nodes,
        field,
        s0,
        delta: decay_delta,
        tail,
    })
}

/// Gap of the trial function and its parts.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapReport {
    /// `q[Ψ] − E(1)‖Ψ‖²`.
    pub gap: f64,
    pub form: f64,
    pub norm_sq: f64,
    /// Same-grid threshold `E(1)`.
    pub threshold: f64,
}

/// `q[Ψ] − E(1)‖Ψ‖²` through the tube form, with `E(1)` computed on the
/// same cross-section grid.
pub fn variational_gap(config: &TubeConfig, psi: &TrialFunction) -> Result<GapReport> {
    let threshold = discrete_threshold(config)?;
    let (mut form, mut norm_sq) = tube_form_value(config, &psi.grid, &psi.field)?;
    let mut gap = form - threshold * norm_sq;
    if psi.tail == TailPolicy::Analytic {
        // both tails: the end slice is f exactly, with ‖f‖ = 1
        let decay = (-2.0 * psi.delta * (config.s_box - psi.s0)).exp();
        norm_sq += decay / psi.delta;
        form += threshold * decay / psi.delta + psi.delta * decay;
        gap += psi.delta * decay;
    }
    Ok(GapReport {
        gap,
        form,
        norm_sq,
        threshold,
    })
}

/// Rayleigh quotient of the trial function for the assembled Dirichlet
/// form: the end slices are set to zero, so the tails must be truncated.
pub fn trial_rayleigh_quotient(config: &TubeConfig, psi: &TrialFunction) -> Result<f64> {
    if psi.tail != TailPolicy::Truncate {
        return Err(Error::InvalidInput("Rayleigh quotient needs truncated tails".into()));
    }
    let t = assemble_tube_form(config)?;
    let x = t.from_field(&psi.field);
    let ax = t.op.apply(&x);
    let num: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
    let den: f64 = x.iter().map(|a| a * a).sum();
    Ok(num / den)
}

/// Writes `(ε, gap)` rows.
pub fn write_gap_csv<W: std::io::Write>(rows: &[(f64, f64)], header: &[String], out: &mut W) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "epsilon,gap")?;
    for (e, g) in rows {
        writeln!(out, "{e:.12e},{g:.12e}")?;
    }
    Ok(())
}
