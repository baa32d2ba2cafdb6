use serde::Serialize;

use super::potential::{asymptotic_energy, TubeKind};
use crate::geometry::{HelixParams, PerturbationProfile};
use crate::numerics::quadrature::integrate_with_breaks;

/// First-order coefficients at one arc length `s`, with `δ` and its
/// `t`-derivatives taken at `t₀(s) = s/√(1 + R₀²β₀²)`. The `ε` factor is
/// not included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionCoefficients {
    pub kappa1: f64,
    pub tau1: f64,
    pub tan_alpha1: f64,
    /// `V₁(s)` of the requested kind.
    pub veff1: f64,
    /// Prefactors of `δ` and `δ̈` in `V₁`.
    pub veff_delta_coef: f64,
    pub veff_ddot_coef: f64,
}

/// Prefactors `(c_δ, c_δ̈)` of `V₁ = c_δ δ + c_δ̈ δ̈`.
pub fn veff_prefactors(kind: TubeKind, helix: &HelixParams) -> (f64, f64) {
    let (r, b) = (helix.r0, helix.beta0);
    let p2 = (r * b).powi(2);
    let d3 = (1.0 + p2).powi(3);
    match kind {
        TubeKind::Circular => (r * b.powi(4) * (p2 - 1.0) / (2.0 * d3), r * b * b * (p2 + 1.0) / (2.0 * d3)),
        TubeKind::Ribbon => (
            r * r * b.powi(4) * (p2 - 5.0) / (2.0 * r * d3),
            (1.0 + p2) * (p2 - 2.0) / (2.0 * r * d3),
        ),
    }
}

pub fn expansion_coefficients(
    kind: TubeKind,
    helix: &HelixParams,
    pert: &PerturbationProfile,
    s: f64,
) -> ExpansionCoefficients {
    let (r, b) = (helix.r0, helix.beta0);
    let p2 = (r * b).powi(2);
    let den = (1.0 + p2).powi(2);
    let [d0, d1, d2, _] = pert.delta_jet(s / helix.speed0());
    let kappa1 = ((b * b - r * r * b.powi(4)) * d0 - (p2 + 1.0) * d2) / den;
    let (tau1, tan_alpha1) = if b > 0.0 {
        (
            -2.0 * (r * r * b.powi(4) * d0 + (p2 + 1.0) * d2) / (r * b * den),
            -d1 / (r * b * (1.0 + p2).sqrt()),
        )
    } else {
        (0.0, 0.0)
    };
    let (cd, cdd) = veff_prefactors(kind, helix);
    ExpansionCoefficients {
        kappa1,
        tau1,
        tan_alpha1,
        veff1: cd * d0 + cdd * d2,
        veff_delta_coef: cd,
        veff_ddot_coef: cdd,
    }
}

/// `V₀ + εV₁(s)`.
pub fn expanded_potential(kind: TubeKind, helix: &HelixParams, pert: &PerturbationProfile, s: f64) -> f64 {
    asymptotic_energy(kind, helix) + pert.epsilon * expansion_coefficients(kind, helix, pert, s).veff1
}

/// `∫ c_δ̈ δ̈(t₀(s)) ds`, the integrated `δ̈` part of `V₁`, by adaptive
/// quadrature with breaks at the kinks of the profile.
pub fn ddot_delta_null_check(kind: TubeKind, helix: &HelixParams, pert: &PerturbationProfile) -> f64 {
    let (_, cdd) = veff_prefactors(kind, helix);
    let (a, b) = pert.support();
    let mut breaks = vec![pert.center];
    if let crate::geometry::ProfileShape::Plateau { flat } = pert.shape {
        breaks.push(pert.center - flat * pert.half_width);
        breaks.push(pert.center + flat * pert.half_width);
    }
    let f = |t: f64| pert.delta_jet(t)[2];
    // ds = √(1 + R₀²β₀²) dt
    cdd * helix.speed0() * integrate_with_breaks(&f, a, b, &breaks, 1e-14)
}
