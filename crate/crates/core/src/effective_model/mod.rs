//! Thin-tube effective potentials for circular and ribbon cross sections.
//!
//! The exact path evaluates `V(s)` from the geometry of the perturbed helix
//! at `t(s)`; the expansion path uses the closed-form first-order
//! coefficients. Binding is decided by the sign of `∫(V − E₀) ds`.

mod binding;
mod expansion;
mod potential;

pub use binding::{
    binding_verdict, confirm_bound_state, critical_pitch, critical_pitch_value, critical_pitch_with, mean_integral,
    mean_integral_on_curve, phase_diagram, predicted_binding, write_phase_csv, BindingVerdict, CriticalPitch,
    Deformation, PhaseRow, CROSSOVER_EPSILON, DECAY_LENGTHS, MEAN_INTERVALS, PITCH_TOL,
};
pub use expansion::{
    ddot_delta_null_check, expanded_potential, expansion_coefficients, veff_prefactors, ExpansionCoefficients,
};
pub use potential::{
    asymptotic_energy, effective_potential, potential_on_curve, support_in_arc_length, write_potential_csv,
    EffectivePotential, TubeKind, SETTLED_TOL,
};
