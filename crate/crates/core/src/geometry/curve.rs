use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::profile::PerturbationProfile;
use crate::{Error, Result};

/// Base radius `R₀` and pitch rate `β₀ = θ(t)/t` of the helix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixParams {
    #[serde(rename = "R0")]
    pub r0: f64,
    pub beta0: f64,
}

impl HelixParams {
    pub fn new(r0: f64, beta0: f64) -> Result<Self> {
        let p = Self { r0, beta0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(Error::InvalidInput(format!("helix R0 must be > 0, got {}", self.r0)));
        }
        if !(self.beta0 >= 0.0 && self.beta0.is_finite()) {
            return Err(Error::InvalidInput(format!("helix beta0 must be >= 0, got {}", self.beta0)));
        }
        Ok(())
    }

    /// `R₀β₀`.
    pub fn pitch(&self) -> f64 {
        self.r0 * self.beta0
    }

    pub fn kappa0(&self) -> f64 {
        self.r0 * self.beta0 * self.beta0 / (1.0 + self.pitch().powi(2))
    }

    pub fn tau0(&self) -> f64 {
        self.beta0 / (1.0 + self.pitch().powi(2))
    }

    /// `ds/dt` of the unperturbed helix.
    pub fn speed0(&self) -> f64 {
        (1.0 + self.pitch().powi(2)).sqrt()
    }
}

/// Point and first three derivatives of a curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub point: Vector3<f64>,
    pub d1: Vector3<f64>,
    pub d2: Vector3<f64>,
    pub d3: Vector3<f64>,
}

/// A regular parametrized space curve with analytic derivatives.
pub trait Curve {
    fn jet(&self, t: f64) -> CurveJet;

    /// Parameter values where derivatives of order ≤ 3 may jump; quadrature
    /// splits there.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    fn speed(&self, t: f64) -> f64 {
        self.jet(t).d1.norm()
    }
}

/// `Γ̃(t) = (t, R(t) cos β₀t, R(t) sin β₀t)` with `R = R₀ + εδ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbedHelix {
    pub params: HelixParams,
    pub perturbation: PerturbationProfile,
}

impl PerturbedHelix {
    pub fn new(params: HelixParams, perturbation: PerturbationProfile) -> Result<Self> {
        params.validate()?;
        perturbation.validate()?;
        if perturbation.epsilon * perturbation.sup_norm() >= params.r0 {
            return Err(Error::InvalidInput(format!(
                "epsilon·max|delta| = {} must stay below R0 = {}",
                perturbation.epsilon * perturbation.sup_norm(),
                params.r0
            )));
        }
        Ok(Self { params, perturbation })
    }

    pub fn unperturbed(params: HelixParams) -> Result<Self> {
        Self::new(params, PerturbationProfile::unperturbed())
    }

    /// `R(t)` and its first three derivatives.
    pub fn radius_jet(&self, t: f64) -> [f64; 4] {
        let eps = self.perturbation.epsilon;
        let [d0, d1, d2, d3] = if eps == 0.0 { [0.0; 4] } else { self.perturbation.delta_jet(t) };
        [self.params.r0 + eps * d0, eps * d1, eps * d2, eps * d3]
    }
}

pub fn helix_curve(params: HelixParams, perturbation: PerturbationProfile) -> Result<PerturbedHelix> {
    PerturbedHelix::new(params, perturbation)
}

impl Curve for PerturbedHelix {
    fn jet(&self, t: f64) -> CurveJet {
        let b = self.params.beta0;
        let [r, r1, r2, r3] = self.radius_jet(t);
        let (s, c) = (b * t).sin_cos();
        CurveJet {
            point: Vector3::new(t, r * c, r * s),
            d1: Vector3::new(1.0, r1 * c - r * b * s, r1 * s + r * b * c),
            d2: Vector3::new(
                0.0,
                r2 * c - 2.0 * r1 * b * s - r * b * b * c,
                r2 * s + 2.0 * r1 * b * c - r * b * b * s,
            ),
            d3: Vector3::new(
                0.0,
                r3 * c - 3.0 * r2 * b * s - 3.0 * r1 * b * b * c + r * b * b * b * s,
                r3 * s + 3.0 * r2 * b * c - 3.0 * r1 * b * b * s - r * b * b * b * c,
            ),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        if self.perturbation.epsilon == 0.0 {
            return Vec::new();
        }
        let (a, b) = self.perturbation.support();
        let mut v = vec![a, b];
        if let super::profile::ProfileShape::Plateau { flat } = self.perturbation.shape {
            let w = self.perturbation.half_width * flat;
            v.extend([self.perturbation.center - w, self.perturbation.center + w]);
        }
        v.push(self.perturbation.center);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sample_points() {
        let h = helix_curve(HelixParams::new(1.0, 1.0).unwrap(), PerturbationProfile::unperturbed()).unwrap();
        assert!((h.jet(0.0).point - Vector3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
        assert!((h.jet(PI).point - Vector3::new(PI, -1.0, 0.0)).norm() < 1e-15);
        let p = helix_curve(
            HelixParams::new(1.0, 1.0).unwrap(),
            PerturbationProfile::bump(1.0, 0.0, 1.0, 0.01),
        )
        .unwrap();
        assert!((p.jet(0.0).point - Vector3::new(0.0, 1.01, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = helix_curve(
            HelixParams::new(1.3, 0.8).unwrap(),
            PerturbationProfile::bump(0.5, 0.2, 1.5, 0.2),
        )
        .unwrap();
        let h = 1e-5;
        for k in 0..25 {
            let t = -1.2 + 0.1 * k as f64 + 0.013;
            let j = p.jet(t);
            let (jp, jm) = (p.jet(t + h), p.jet(t - h));
            assert!(((jp.point - jm.point) / (2.0 * h) - j.d1).norm() < 1e-8);
            assert!(((jp.d1 - jm.d1) / (2.0 * h) - j.d2).norm() < 1e-8);
            assert!(((jp.d2 - jm.d2) / (2.0 * h) - j.d3).norm() < 1e-7);
        }
    }

    #[test]
    fn closed_forms() {
        let p = HelixParams::new(2.0, 1.0).unwrap();
        assert!((p.kappa0() - 0.4).abs() < 1e-15);
        assert!((p.tau0() - 0.2).abs() < 1e-15);
        assert!(HelixParams::new(0.0, 1.0).is_err());
        assert!(HelixParams::new(1.0, -1.0).is_err());
    }

    #[test]
    fn large_perturbation_rejected() {
        let r = helix_curve(HelixParams::new(1.0, 1.0).unwrap(), PerturbationProfile::bump(2.0, 0.0, 1.0, 0.5));
        assert!(r.is_err());
    }
}
