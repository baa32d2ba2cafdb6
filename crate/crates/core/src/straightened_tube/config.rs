use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::cross_section::{scale_point, CrossSection};
use crate::{Error, Result};

/// Default width of the quadratic caps that smooth the tent profile.
pub const DEFAULT_CAP_WIDTH: f64 = 0.05;

/// Default cap on the number of unknowns of an assembled tube form.
pub const DEFAULT_MEMORY_CAP: usize = 4_000_000;

/// Longitudinal scaling profile `α(s)`, equal to 1 outside a compact set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaProfile {
    /// `α ≡ 1`: the purely helical tube.
    Flat,
    /// `1 + ε(1 − u²)³` with `u = (s − center)/half_width`.
    Bump { epsilon: f64, center: f64, half_width: f64 },
    /// `1 + ε(s₀ − |s|)` on `|s| < s₀`, with quadratic caps of width
    /// `cap_width` at the three kinks; `cap_width = 0` keeps the kinks.
    Tent { epsilon: f64, s0: f64, cap_width: f64 },
}

/// `max(y, 0)` with a quadratic cap on `|y| < w/2`, and its derivative.
fn soft_ramp(y: f64, w: f64) -> (f64, f64) {
    if w <= 0.0 {
        return if y > 0.0 { (y, 1.0) } else { (0.0, if y == 0.0 { 0.5 } else { 0.0 }) };
    }
    let h = 0.5 * w;
    if y <= -h {
        (0.0, 0.0)
    } else if y >= h {
        (y, 1.0)
    } else {
        ((y + h).powi(2) / (2.0 * w), (y + h) / w)
    }
}

impl AlphaProfile {
    pub fn tent(epsilon: f64, s0: f64) -> Self {
        AlphaProfile::Tent {
            epsilon,
            s0,
            cap_width: DEFAULT_CAP_WIDTH,
        }
    }

    /// `(α(s), α̇(s))`.
    pub fn eval(&self, s: f64) -> (f64, f64) {
        match *self {
            AlphaProfile::Flat => (1.0, 0.0),
            AlphaProfile::Bump {
                epsilon,
                center,
                half_width,
            } => {
                let u = (s - center) / half_width;
                if u.abs() >= 1.0 {
                    return (1.0, 0.0);
                }
                let q = 1.0 - u * u;
                (1.0 + epsilon * q * q * q, -6.0 * epsilon * u * q * q / half_width)
            }
            AlphaProfile::Tent { epsilon, s0, cap_width } => {
                // s₀ − |s| on (−s₀, s₀) as a sum of ramps at the kinks
                let (a, da) = soft_ramp(s + s0, cap_width);
                let (b, db) = soft_ramp(s, cap_width);
                let (c, dc) = soft_ramp(s - s0, cap_width);
                (1.0 + epsilon * (a - 2.0 * b + c), epsilon * (da - 2.0 * db + dc))
            }
        }
    }

    pub fn alpha(&self, s: f64) -> f64 {
        self.eval(s).0
    }

    /// Half-length of an interval outside which `α ≡ 1`.
    pub fn support_radius(&self) -> f64 {
        match *self {
            AlphaProfile::Flat => 0.0,
            AlphaProfile::Bump { center, half_width, .. } => center.abs() + half_width,
            AlphaProfile::Tent { s0, cap_width, .. } => s0 + 0.5 * cap_width.max(0.0),
        }
    }

    pub fn is_nonnegative_protrusion(&self) -> bool {
        match *self {
            AlphaProfile::Flat => true,
            AlphaProfile::Bump { epsilon, .. } | AlphaProfile::Tent { epsilon, .. } => epsilon >= 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.into()));
        match *self {
            AlphaProfile::Flat => Ok(()),
            AlphaProfile::Bump {
                epsilon,
                center,
                half_width,
            } => {
                if !(half_width > 0.0 && center.is_finite() && epsilon.is_finite() && epsilon > -1.0) {
                    return bad("bump profile needs half_width > 0 and epsilon > -1");
                }
                Ok(())
            }
            AlphaProfile::Tent { epsilon, s0, cap_width } => {
                if !(s0 > 0.0 && cap_width >= 0.0 && cap_width < s0 && epsilon.is_finite()) {
                    return bad("tent profile needs s0 > 0 and 0 <= cap_width < s0");
                }
                if 1.0 + epsilon.min(0.0) * s0 <= 0.0 {
                    return bad("tent profile makes alpha non-positive");
                }
                Ok(())
            }
        }
    }
}

/// Straightened helical tube over `[−L, L] × ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeConfig {
    /// Cross section; its `grid_spacing` is the transverse spacing.
    pub cross_section: CrossSection,
    /// `θ̇ = β₀`.
    pub theta_rate: f64,
    pub alpha_profile: AlphaProfile,
    /// Truncation half-length `L`.
    pub s_box: f64,
    pub s_spacing: f64,
    #[serde(default = "default_cap")]
    pub memory_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_MEMORY_CAP
}

/// Metric data of the straightened tube at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricData {
    pub h2: f64,
    pub h3: f64,
    pub g_inverse: Matrix3<f64>,
    pub det_g_root: f64,
}

/// `h₂ = (t₂ − t₂⁰)α̇ + t̃₃θ̇`, `h₃ = (t₃ − t₃⁰)α̇ − t̃₂θ̇` with `t̃ = l_α(t)`.
#[inline]
pub fn shear(t: [f64; 2], t0: [f64; 2], alpha: f64, alpha_dot: f64, theta_rate: f64) -> (f64, f64) {
    let tt = scale_point(t, t0, alpha);
    (
        (t[0] - t0[0]) * alpha_dot + tt[1] * theta_rate,
        (t[1] - t0[1]) * alpha_dot - tt[0] * theta_rate,
    )
}

impl TubeConfig {
    pub fn validate(&self) -> Result<()> {
        self.cross_section.validate()?;
        self.alpha_profile.validate()?;
        if !(self.theta_rate.is_finite() && self.theta_rate >= 0.0) {
            return Err(Error::InvalidInput("theta_rate must be >= 0".into()));
        }
        if !(self.s_spacing > 0.0 && self.s_box > 0.0) {
            return Err(Error::InvalidInput("s_box and s_spacing must be positive".into()));
        }
        if self.alpha_profile.support_radius() >= self.s_box {
            return Err(Error::InvalidInput(format!(
                "alpha profile support radius {} reaches the box half-length {}",
                self.alpha_profile.support_radius(),
                self.s_box
            )));
        }
        if self.slice_count() < 3 {
            return Err(Error::InvalidInput("need at least two interior slices".into()));
        }
        Ok(())
    }

    /// Number of intervals `N` of the longitudinal grid `s_i = −L + i·2L/N`.
    pub fn slice_count(&self) -> usize {
        ((2.0 * self.s_box / self.s_spacing).round() as usize).max(1)
    }

    /// Effective longitudinal spacing after rounding `N`.
    pub fn ds(&self) -> f64 {
        2.0 * self.s_box / self.slice_count() as f64
    }

    /// `s_i` for `i = 0..=N`, both ends included.
    pub fn s_nodes(&self) -> Vec<f64> {
        let (n, h) = (self.slice_count(), self.ds());
        (0..=n).map(|i| -self.s_box + i as f64 * h).collect()
    }

    pub fn with_profile(&self, alpha_profile: AlphaProfile) -> Self {
        Self {
            alpha_profile,
            ..self.clone()
        }
    }
}

pub fn metric_at(config: &TubeConfig, s: f64, t: [f64; 2]) -> Result<MetricData> {
    let (a, ad) = config.alpha_profile.eval(s);
    if !(a > 0.0) {
        return Err(Error::Config(format!("alpha({s}) = {a} is not positive")));
    }
    let (h2, h3) = shear(t, config.cross_section.scaling_center, a, ad, config.theta_rate);
    let a2 = a * a;
    let g = Matrix3::new(
        1.0,
        -h2 / a,
        -h3 / a,
        -h2 / a,
        (1.0 + h2 * h2) / a2,
        h2 * h3 / a2,
        -h3 / a,
        h2 * h3 / a2,
        (1.0 + h3 * h3) / a2,
    );
    if g.cholesky().is_none() {
        return Err(Error::Config(format!(
            "inverse metric is not positive definite at s = {s}, t = {t:?}"
        )));
    }
    let det = g.determinant();
    Ok(MetricData {
        h2,
        h3,
        g_inverse: g,
        det_g_root: 1.0 / det.sqrt(),
    })
}
