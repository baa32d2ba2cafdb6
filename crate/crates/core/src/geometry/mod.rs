//! Perturbed helices: analytic curve derivatives, Frenet frames, arc-length
//! reparametrization and the ribbon tilt angle.

mod curve;
mod export;
mod frame;
mod profile;

pub use curve::{helix_curve, Curve, CurveJet, HelixParams, PerturbedHelix};
pub use export::write_curve_csv;
pub use frame::{
    arc_length, arc_length_param, curvature_torsion, frenet_frame, ribbon_tilt, sample_at_arc_length, tilt_from_frame,
    ArcSample, FrenetFrame, RibbonTilt, KAPPA_MIN,
};
pub use profile::{PerturbationProfile, ProfileShape};
