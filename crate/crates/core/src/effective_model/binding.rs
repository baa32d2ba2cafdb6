use rayon::prelude::*;
use serde::Serialize;

use super::expansion::veff_prefactors;
use super::potential::{asymptotic_energy, potential_on_curve, support_in_arc_length, EffectivePotential, TubeKind};
use crate::geometry::{HelixParams, PerturbationProfile, PerturbedHelix};
use crate::numerics::quadrature::simpson_samples;
use crate::numerics::roots::find_sign_change;
use crate::numerics::{solve_1d_schrodinger, SampledPotential, SpectralResult};
use crate::{Error, Result};

/// Simpson intervals across the perturbation support.
pub const MEAN_INTERVALS: usize = 400;

/// Box half-length for the 1D check, in units of the weak-coupling decay
/// length `2/|m|`.
pub const DECAY_LENGTHS: f64 = 12.0;

#[derive(Debug, Clone, Serialize)]
pub struct BindingVerdict {
    /// `∫(V − E₀) ds`.
    pub mean_integral: f64,
    pub binds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalue_check: Option<SpectralResult>,
    /// `−4(E − E₀)/m²` for the lowest confirmed eigenvalue.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shallow_well_ratio: Option<f64>,
}

/// `∫(V − E₀) ds` by composite Simpson over the support in arc length,
/// where the integrand is nonzero. `with_tilt = false` forces `α ≡ 0` for
/// the ribbon.
pub fn mean_integral_on_curve(kind: TubeKind, curve: &PerturbedHelix, with_tilt: bool) -> Result<f64> {
    if curve.perturbation.epsilon == 0.0 || curve.perturbation.amplitude == 0.0 {
        return Ok(0.0);
    }
    let e0 = asymptotic_energy(kind, &curve.params);
    let (sa, sb) = support_in_arc_length(curve);
    let h = (sb - sa) / MEAN_INTERVALS as f64;
    let y = (0..=MEAN_INTERVALS)
        .into_par_iter()
        .map(|i| potential_on_curve(kind, curve, sa + i as f64 * h, with_tilt).map(|v| v - e0))
        .collect::<Result<Vec<_>>>()?;
    simpson_samples(&y, h)
}

pub fn mean_integral(kind: TubeKind, helix: &HelixParams, pert: &PerturbationProfile) -> Result<f64> {
    mean_integral_on_curve(kind, &PerturbedHelix::new(*helix, *pert)?, true)
}

/// Mean attractiveness verdict, optionally confirmed by the lowest
/// eigenvalue of `−d²/ds² + V − E₀`.
pub fn binding_verdict(pot: &EffectivePotential, confirm: bool) -> Result<BindingVerdict> {
    pot.check_settled()?;
    let curve = pot.curve()?;
    let m = mean_integral_on_curve(pot.kind, &curve, true)?;
    let binds = m < 0.0;
    let (eigenvalue_check, shallow_well_ratio) = if confirm && binds {
        let r = confirm_bound_state(pot.kind, &curve, m)?;
        let ratio = r.eigenvalues.first().map(|e| -4.0 * e / (m * m));
        (Some(r), ratio)
    } else {
        (None, None)
    };
    Ok(BindingVerdict {
        mean_integral: m,
        binds,
        eigenvalue_check,
        shallow_well_ratio,
    })
}

/// Eigenvalues of `−d²/ds² + V − E₀` below zero on a grid that is uniform
/// across the support (`MEAN_INTERVALS` cells) and graded outside, with the
/// box sized from the mean integral `m`.
pub fn confirm_bound_state(kind: TubeKind, curve: &PerturbedHelix, m: f64) -> Result<SpectralResult> {
    if !(m < 0.0) {
        return Err(Error::InvalidInput(format!("no weak-coupling length for mean integral {m}")));
    }
    let e0 = asymptotic_energy(kind, &curve.params);
    let (sa, sb) = support_in_arc_length(curve);
    let mid = 0.5 * (sa + sb);
    let half = 0.5 * (sb - sa);
    let decay = 2.0 / m.abs();
    let h = (sb - sa) / MEAN_INTERVALS as f64;
    let core = half + 4.0 * h;
    let probe = SampledPotential::graded(|_| 0.0, core, h, (DECAY_LENGTHS * decay).max(2.0 * core), 1.02, decay / 50.0)?;
    let inside: Vec<f64> = probe
        .nodes
        .iter()
        .copied()
        .filter(|x| (x + mid) > sa && (x + mid) < sb)
        .collect();
    let vals = inside
        .par_iter()
        .map(|&x| potential_on_curve(kind, curve, x + mid, true).map(|v| v - e0))
        .collect::<Result<Vec<_>>>()?;
    let mut it = vals.into_iter();
    let values = probe
        .nodes
        .iter()
        .map(|&x| if (x + mid) > sa && (x + mid) < sb { it.next().unwrap() } else { 0.0 })
        .collect();
    let pot = SampledPotential { nodes: probe.nodes, values };
    solve_1d_schrodinger(&pot, 0.0)
}

/// Perturbation types of the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Deformation {
    /// Local reduction of the helix radius, `∫δ < 0`.
    Squeeze,
    /// Local enlargement, `∫δ > 0`.
    Inflate,
}

impl Deformation {
    pub fn sign(self) -> f64 {
        match self {
            Deformation::Squeeze => -1.0,
            Deformation::Inflate => 1.0,
        }
    }

    /// Bump of unit half width centred at `t = 2`.
    pub fn profile(self, epsilon: f64) -> PerturbationProfile {
        PerturbationProfile::bump(self.sign(), 2.0, 1.0, epsilon)
    }
}

/// Critical pitch `R₀β₀` where the `δ` prefactor of `V₁` changes sign.
pub fn critical_pitch_value(kind: TubeKind) -> f64 {
    match kind {
        TubeKind::Circular => 1.0,
        TubeKind::Ribbon => 5f64.sqrt(),
    }
}

/// Verdict predicted by the two-regime picture: above the critical pitch a
/// squeeze binds, below it an inflation does. `None` at the critical pitch.
pub fn predicted_binding(kind: TubeKind, pitch: f64, deformation: Deformation) -> Option<bool> {
    let c = critical_pitch_value(kind);
    if (pitch - c).abs() < 1e-12 {
        return None;
    }
    Some((pitch > c) == (deformation == Deformation::Squeeze))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriticalPitch {
    /// From bisection on the closed-form `δ` prefactor.
    pub from_coefficient: f64,
    /// From bisection on the exact-geometry mean integral of a squeeze.
    pub from_exact_path: f64,
}

/// Bisection tolerance in `R₀β₀`.
pub const PITCH_TOL: f64 = 1e-6;

/// Critical pitch at fixed `R₀` by both paths. The exact path uses a
/// squeeze of strength `epsilon`.
pub fn critical_pitch_with(kind: TubeKind, r0: f64, epsilon: f64) -> Result<CriticalPitch> {
    let (lo, hi) = match kind {
        TubeKind::Circular => (0.5, 1.6),
        TubeKind::Ribbon => (1.5, 3.0),
    };
    let coef = |p: f64| {
        let h = HelixParams { r0, beta0: p / r0 };
        veff_prefactors(kind, &h).0
    };
    let from_coefficient = find_sign_change(coef, lo, hi, PITCH_TOL)?;
    let pert = Deformation::Squeeze.profile(epsilon);
    let exact = |p: f64| {
        let h = HelixParams { r0, beta0: p / r0 };
        mean_integral(kind, &h, &pert).unwrap_or(f64::NAN)
    };
    let from_exact_path = find_sign_change(exact, lo, hi, PITCH_TOL)?;
    Ok(CriticalPitch {
        from_coefficient,
        from_exact_path,
    })
}

/// Squeeze strength for the exact-path crossover. The second-order term
/// is dominated by `κ₁² ∝ δ̈²` and moves the crossing by about `20ε`.
pub const CROSSOVER_EPSILON: f64 = 1e-5;

/// Both critical-pitch paths at `R₀ = 1`.
pub fn critical_pitch(kind: TubeKind) -> Result<CriticalPitch> {
    critical_pitch_with(kind, 1.0, CROSSOVER_EPSILON)
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseRow {
    pub kind: TubeKind,
    pub pitch: f64,
    pub deformation: Deformation,
    pub mean_integral: f64,
    pub binds: bool,
    /// `None` at the critical pitch.
    pub predicted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lowest_eigenvalue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shallow_well_ratio: Option<f64>,
}

impl PhaseRow {
    pub fn matches_prediction(&self) -> bool {
        self.predicted.is_none_or(|p| p == self.binds)
    }
}

/// Verdicts over `pitches × {squeeze, inflate}` at `R₀ = 1`.
pub fn phase_diagram(kind: TubeKind, pitches: &[f64], epsilon: f64, confirm: bool) -> Result<Vec<PhaseRow>> {
    let mut rows = Vec::with_capacity(2 * pitches.len());
    for &p in pitches {
        for d in [Deformation::Squeeze, Deformation::Inflate] {
            let helix = HelixParams::new(1.0, p)?;
            let pert = d.profile(epsilon);
            let curve = PerturbedHelix::new(helix, pert)?;
            let m = mean_integral_on_curve(kind, &curve, true)?;
            let binds = m < 0.0;
            let (lowest_eigenvalue, shallow_well_ratio) = if confirm && binds {
                let r = confirm_bound_state(kind, &curve, m)?;
                let e = r.eigenvalues.first().copied();
                (e, e.map(|e| -4.0 * e / (m * m)))
            } else {
                (None, None)
            };
            rows.push(PhaseRow {
                kind,
                pitch: p,
                deformation: d,
                mean_integral: m,
                binds,
                predicted: predicted_binding(kind, p, d),
                lowest_eigenvalue,
                shallow_well_ratio,
            });
        }
    }
    Ok(rows)
}

/// Writes phase-diagram rows as CSV.
pub fn write_phase_csv<W: std::io::Write>(rows: &[PhaseRow], header: &[String], out: &mut W) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "kind,pitch,deformation,mean_integral,binds,predicted,lowest_eigenvalue,shallow_well_ratio")?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.12e}"));
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.12e},{},{},{},{}",
            serde_json::to_string(&r.kind)?.trim_matches('"'),
            r.pitch,
            serde_json::to_string(&r.deformation)?.trim_matches('"'),
            r.mean_integral,
            r.binds,
            r.predicted.map_or("critical".to_string(), |p| p.to_string()),
            opt(r.lowest_eigenvalue),
            opt(r.shallow_well_ratio)
        )?;
    }
    Ok(())
}
