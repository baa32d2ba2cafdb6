//! The straightened helical tube: metric coefficients, the transformed
//! quadratic form on `ℝ × ω`, trial functions and bound-state detection.

mod bound;
mod config;
mod form;
mod trial;

pub use bound::{
    bound_states_below_threshold, discrete_threshold, interpolate_on_grid, interpolate_tube_vector, refinement_check,
    solve_tube, BoundStateReport, RefinementCheck, TubeSolveOptions, CUTOFF_SAFETY, DIRECT_MEMORY_BUDGET,
    PERSISTENCE_TOL,
};
pub use config::{metric_at, shear, AlphaProfile, MetricData, TubeConfig, DEFAULT_CAP_WIDTH, DEFAULT_MEMORY_CAP};
pub use form::{assemble_tube_form, helical_form_value, tube_form_value, TubeOperator};
pub use trial::{
    phi_delta, trial_function, trial_rayleigh_quotient, variational_gap, write_gap_csv, GapReport, TailPolicy,
    TrialFunction, TAIL_TOLERANCE,
};
