use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Shape of the unit-amplitude radius perturbation `δ(t)`, written in the
/// local variable `u = (t − center)/half_width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileShape {
    /// `(1 − u²)³`, C² at the support edges.
    Bump,
    /// Flat top on `|u| ≤ flat` joined to zero by quintic smoothsteps (C²).
    Plateau { flat: f64 },
    /// `1 − u²`; only continuous, `δ′` jumps at the edges.
    Parabolic,
}

/// `R(t) = R₀ + ε·amplitude·shape((t − center)/half_width)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationProfile {
    pub shape: ProfileShape,
    pub amplitude: f64,
    pub center: f64,
    pub half_width: f64,
    pub epsilon: f64,
}

impl Default for PerturbationProfile {
    fn default() -> Self {
        Self {
            shape: ProfileShape::Bump,
            amplitude: 1.0,
            center: 0.0,
            half_width: 1.0,
            epsilon: 0.0,
        }
    }
}

/// Quintic smoothstep and its first three derivatives on `[0, 1]`.
fn smoothstep(x: f64) -> [f64; 4] {
    let x = x.clamp(0.0, 1.0);
    [
        x * x * x * (10.0 - 15.0 * x + 6.0 * x * x),
        30.0 * x * x * (1.0 - x) * (1.0 - x),
        60.0 * x * (1.0 - x) * (1.0 - 2.0 * x),
        60.0 * (6.0 * x * x - 6.0 * x + 1.0),
    ]
}

impl ProfileShape {
    /// Value and first three `u`-derivatives; zero outside `|u| < 1`.
    pub fn jet(&self, u: f64) -> [f64; 4] {
        if u.abs() >= 1.0 {
            return [0.0; 4];
        }
        match *self {
            ProfileShape::Bump => {
                let q = 1.0 - u * u;
                [
                    q * q * q,
                    -6.0 * u * q * q,
                    q * (30.0 * u * u - 6.0),
                    72.0 * u - 120.0 * u * u * u,
                ]
            }
            ProfileShape::Plateau { flat } => {
                let a = u.abs();
                if a <= flat {
                    return [1.0, 0.0, 0.0, 0.0];
                }
                let ramp = 1.0 - flat;
                let [v, d1, d2, d3] = smoothstep((1.0 - a) / ramp);
                // x = (1 − |u|)/ramp, so dx/du = −sgn(u)/ramp
                let sg = -u.signum() / ramp;
                [v, d1 * sg, d2 * sg * sg, d3 * sg * sg * sg]
            }
            ProfileShape::Parabolic => [1.0 - u * u, -2.0 * u, -2.0, 0.0],
        }
    }

    pub fn is_c2(&self) -> bool {
        !matches!(self, ProfileShape::Parabolic)
    }

    /// `∫_{−1}^{1} shape(u) du`.
    pub fn unit_integral(&self) -> f64 {
        match *self {
            ProfileShape::Bump => 32.0 / 35.0,
            ProfileShape::Plateau { flat } => 2.0 * flat + (1.0 - flat),
            ProfileShape::Parabolic => 4.0 / 3.0,
        }
    }
}

impl PerturbationProfile {
    pub fn bump(amplitude: f64, center: f64, half_width: f64, epsilon: f64) -> Self {
        Self {
            shape: ProfileShape::Bump,
            amplitude,
            center,
            half_width,
            epsilon,
        }
    }

    pub fn unperturbed() -> Self {
        Self::default()
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }

    /// `δ(t)` and its first three `t`-derivatives (without the factor ε).
    pub fn delta_jet(&self, t: f64) -> [f64; 4] {
        let w = self.half_width;
        let [g0, g1, g2, g3] = self.shape.jet((t - self.center) / w);
        let a = self.amplitude;
        [a * g0, a * g1 / w, a * g2 / (w * w), a * g3 / (w * w * w)]
    }

    pub fn delta(&self, t: f64) -> f64 {
        self.delta_jet(t)[0]
    }

    pub fn sup_norm(&self) -> f64 {
        self.amplitude.abs()
    }

    /// `∫ δ(t) dt`.
    pub fn integral(&self) -> f64 {
        self.amplitude * self.half_width * self.shape.unit_integral()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidInput("perturbation half_width must be positive".into()));
        }
        if !self.amplitude.is_finite() || !self.center.is_finite() {
            return Err(Error::InvalidInput("perturbation amplitude and center must be finite".into()));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidInput("perturbation epsilon must be >= 0".into()));
        }
        if let ProfileShape::Plateau { flat } = self.shape {
            if !(0.0..1.0).contains(&flat) {
                return Err(Error::InvalidInput("plateau flat fraction must lie in [0, 1)".into()));
            }
        }
        Ok(())
    }

    /// Checks that `δ, δ′, δ″` vanish at the support edges to 1e-10.
    pub fn check_c2(&self) -> Result<()> {
        let (a, b) = self.support();
        for t in [a, b] {
            for side in [-1e-13, 0.0, 1e-13] {
                let j = self.delta_jet(t + side * self.half_width);
                if j[..3].iter().any(|v| v.abs() > 1e-10) {
                    return Err(Error::InvalidInput(format!(
                        "profile {:?} is not C² at the support edge t = {t}",
                        self.shape
                    )));
                }
            }
        }
        Ok(())
    }
}
