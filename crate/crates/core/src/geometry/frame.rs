use nalgebra::Vector3;
use serde::Serialize;

use super::curve::Curve;
use crate::numerics::quadrature::integrate_with_breaks;
use crate::{Error, Result};

/// Curvature below which the principal normal is treated as undefined.
pub const KAPPA_MIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetFrame {
    pub point: Vector3<f64>,
    pub tangent: Vector3<f64>,
    pub normal: Vector3<f64>,
    pub binormal: Vector3<f64>,
    pub kappa: f64,
    pub tau: f64,
}

pub fn frenet_frame<C: Curve + ?Sized>(curve: &C, t: f64) -> Result<FrenetFrame> {
    let j = curve.jet(t);
    let speed = j.d1.norm();
    let cross = j.d1.cross(&j.d2);
    let cn = cross.norm();
    let kappa = cn / speed.powi(3);
    if !(kappa >= KAPPA_MIN) {
        return Err(Error::FrameUndefined { t, kappa });
    }
    let tau = cross.dot(&j.d3) / (cn * cn);
    let tangent = j.d1 / speed;
    let binormal = cross / cn;
    let normal = binormal.cross(&tangent);
    Ok(FrenetFrame {
        point: j.point,
        tangent,
        normal,
        binormal,
        kappa,
        tau,
    })
}

/// Curvature and torsion only; `κ = 0` is allowed here.
pub fn curvature_torsion<C: Curve + ?Sized>(curve: &C, t: f64) -> (f64, f64) {
    let j = curve.jet(t);
    let cross = j.d1.cross(&j.d2);
    let cn2 = cross.norm_squared();
    let kappa = cn2.sqrt() / j.d1.norm().powi(3);
    let tau = if cn2 > 0.0 { cross.dot(&j.d3) / cn2 } else { 0.0 };
    (kappa, tau)
}

/// Quadrature tolerance for arc-length integrals.
const ARC_TOL: f64 = 1e-14;

/// `∫₀ᵗ |Γ′|`.
pub fn arc_length<C: Curve + ?Sized>(curve: &C, t: f64) -> f64 {
    arc_length_between(curve, 0.0, t)
}

fn arc_length_between<C: Curve + ?Sized>(curve: &C, a: f64, b: f64) -> f64 {
    let speed = |x: f64| curve.speed(x);
    integrate_with_breaks(&speed, a, b, &curve.breakpoints(), ARC_TOL)
}

/// Inverts `s = ∫₀^{t(s)} |Γ′|` by Newton's method, integrating only the
/// increment between successive iterates.
pub fn arc_length_param<C: Curve + ?Sized>(curve: &C, s: f64) -> Result<f64> {
    let v0 = curve.speed(0.0);
    if !(v0 > 0.0) {
        return Err(Error::InvalidInput("curve is not regular at t = 0".into()));
    }
    let mut t = s / v0;
    let mut f = arc_length(curve, t) - s;
    for _ in 0..60 {
        let v = curve.speed(t);
        if !(v > 0.0) {
            return Err(Error::InvalidInput(format!("curve is not regular at t = {t}")));
        }
        let dt = -f / v;
        let t_new = t + dt;
        f += arc_length_between(curve, t, t_new);
        t = t_new;
        if dt.abs() <= 1e-14 * (1.0 + t.abs()) {
            return Ok(t);
        }
    }
    if f.abs() < 1e-10 * (1.0 + s.abs()) {
        return Ok(t);
    }
    Err(Error::NoConvergence {
        iterations: 60,
        best_residual: f.abs(),
    })
}

/// Tilt `α` of a segment turned from the normal towards `−b` so that it stays
/// perpendicular to the first coordinate axis, with its arc-length rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RibbonTilt {
    pub alpha: f64,
    pub alpha_dot: f64,
}

/// Tilt from a frame: `tan α = n₁/b₁` on the branch `(−π/2, π/2)`.
///
/// `α̇` comes from differentiating the defining relation with the
/// Frenet–Serret equations (`n′ = −κt + τb`, `b′ = −τn`), giving
/// `α̇ = τ − κ t₁ b₁/(n₁² + b₁²)`.
pub fn tilt_from_frame(frame: &FrenetFrame, s: f64) -> Result<RibbonTilt> {
    let (n1, b1, t1) = (frame.normal.x, frame.binormal.x, frame.tangent.x);
    if n1.abs() < 1e-14 && b1.abs() < 1e-14 {
        return Err(Error::TiltUndefined { s });
    }
    let alpha = if b1 == 0.0 {
        std::f64::consts::FRAC_PI_2.copysign(n1)
    } else {
        (n1 / b1).atan()
    };
    let alpha_dot = frame.tau - frame.kappa * t1 * b1 / (n1 * n1 + b1 * b1);
    Ok(RibbonTilt { alpha, alpha_dot })
}

pub fn ribbon_tilt<C: Curve + ?Sized>(curve: &C, s: f64) -> Result<RibbonTilt> {
    let t = arc_length_param(curve, s)?;
    tilt_from_frame(&frenet_frame(curve, t)?, s)
}

/// Everything the effective potentials need at one arc-length value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcSample {
    pub s: f64,
    pub t: f64,
    pub frame: FrenetFrame,
    pub tilt: RibbonTilt,
}

pub fn sample_at_arc_length<C: Curve + ?Sized>(curve: &C, s: f64) -> Result<ArcSample> {
    let t = arc_length_param(curve, s)?;
    let frame = frenet_frame(curve, t)?;
    let tilt = tilt_from_frame(&frame, s)?;
    Ok(ArcSample { s, t, frame, tilt })
}
