use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::geometry::{
    arc_length, arc_length_param, curvature_torsion, frenet_frame, tilt_from_frame, HelixParams, PerturbationProfile,
    PerturbedHelix,
};
use crate::{Error, Result};

/// Tolerance for `|V(±L) − E₀|` on a sampled potential.
pub const SETTLED_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TubeKind {
    /// Thin tube with a disc cross section: `V = −κ²/4`.
    Circular,
    /// Thin segment kept perpendicular to the helix axis:
    /// `V = −κ²cos²α/4 + (τ − α̇)²/2`.
    Ribbon,
}

impl TubeKind {
    pub const ALL: [TubeKind; 2] = [TubeKind::Circular, TubeKind::Ribbon];
}

/// Asymptotic value of the effective potential, from the unperturbed
/// curvature and torsion.
pub fn asymptotic_energy(kind: TubeKind, helix: &HelixParams) -> f64 {
    let (k, t) = (helix.kappa0(), helix.tau0());
    match kind {
        TubeKind::Circular => -0.25 * k * k,
        TubeKind::Ribbon => -0.25 * k * k + 0.5 * t * t,
    }
}

/// Exact effective potential at arc length `s` from the numerically
/// computed geometry at `t(s)`.
pub fn effective_potential(kind: TubeKind, helix: &HelixParams, pert: &PerturbationProfile, s: f64) -> Result<f64> {
    let curve = PerturbedHelix::new(*helix, *pert)?;
    potential_on_curve(kind, &curve, s, true)
}

/// `V(s)` on a prepared curve; `with_tilt = false` forces `α ≡ 0`.
pub fn potential_on_curve(kind: TubeKind, curve: &PerturbedHelix, s: f64, with_tilt: bool) -> Result<f64> {
    let t = arc_length_param(curve, s)?;
    match kind {
        TubeKind::Circular => {
            let (k, _) = curvature_torsion(curve, t);
            Ok(-0.25 * k * k)
        }
        TubeKind::Ribbon => {
            let frame = frenet_frame(curve, t)?;
            let (k, tau) = (frame.kappa, frame.tau);
            if !with_tilt {
                return Ok(-0.25 * k * k + 0.5 * tau * tau);
            }
            let tilt = tilt_from_frame(&frame, s)?;
            let c = tilt.alpha.cos();
            Ok(-0.25 * k * k * c * c + 0.5 * (tau - tilt.alpha_dot).powi(2))
        }
    }
}

/// Arc-length interval `[s_a, s_b]` covered by the support of `δ`; outside
/// it the curve is the unperturbed helix.
pub fn support_in_arc_length(curve: &PerturbedHelix) -> (f64, f64) {
    let (ta, tb) = curve.perturbation.support();
    (arc_length(curve, ta), arc_length(curve, tb))
}

/// Effective potential sampled on `[−L, L]`.
#[derive(Debug, Clone, Serialize)]
pub struct EffectivePotential {
    pub kind: TubeKind,
    pub samples: Vec<(f64, f64)>,
    #[serde(rename = "E0")]
    pub e0: f64,
    pub helix: HelixParams,
    pub perturbation: PerturbationProfile,
}

impl EffectivePotential {
    /// Samples `V` at `n + 1` equispaced points of `[−L, L]`. Points outside
    /// the perturbation support are evaluated too, which makes the
    /// settled check meaningful.
    pub fn sample(
        kind: TubeKind,
        helix: HelixParams,
        perturbation: PerturbationProfile,
        half_length: f64,
        n: usize,
    ) -> Result<Self> {
        if !(half_length > 0.0) || n < 2 {
            return Err(Error::InvalidInput("need L > 0 and n >= 2".into()));
        }
        let curve = PerturbedHelix::new(helix, perturbation)?;
        let samples = (0..=n)
            .map(|i| {
                let s = -half_length + 2.0 * half_length * i as f64 / n as f64;
                potential_on_curve(kind, &curve, s, true).map(|v| (s, v))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            kind,
            samples,
            e0: asymptotic_energy(kind, &helix),
            helix,
            perturbation,
        })
    }

    pub fn curve(&self) -> Result<PerturbedHelix> {
        PerturbedHelix::new(self.helix, self.perturbation)
    }

    /// Rejects potentials that have not reached `E₀` at the box ends.
    pub fn check_settled(&self) -> Result<()> {
        let ends = [self.samples[0], self.samples[self.samples.len() - 1]];
        for (s, v) in ends {
            if (v - self.e0).abs() >= SETTLED_TOL {
                return Err(Error::InvalidInput(format!(
                    "potential not settled at s = {s}: V − E0 = {:e}",
                    v - self.e0
                )));
            }
        }
        if let Ok(c) = self.curve() {
            let (sa, sb) = support_in_arc_length(&c);
            let (l, r) = (ends[0].0, ends[1].0);
            if sa <= l || sb >= r {
                return Err(Error::InvalidInput(format!(
                    "perturbation support [{sa}, {sb}] not inside the box [{l}, {r}]"
                )));
            }
        }
        Ok(())
    }
}

/// Writes `(s, V_exact, V_expansion)` rows.
pub fn write_potential_csv<W: Write>(rows: &[(f64, f64, f64)], header: &[String], out: &mut W) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "s,v_exact,v_expansion")?;
    for (s, a, b) in rows {
        writeln!(out, "{s:.12e},{a:.12e},{b:.12e}")?;
    }
    Ok(())
}
