//! Transverse cross-section operators and their ground states.
//!
//! Two assembly paths are provided: the direct operator on the scaled set
//! `ω(α)` and the unitarily equivalent operator on the unscaled `ω`. The
//! second one keeps the grid fixed while `α` varies, so `E(α)` computed
//! from it is a smooth function of `α`.

mod grid;
mod ground;
mod operator;
mod shape;

pub use grid::{Grid, MIN_NODES_ACROSS};
pub use ground::{
    energy_slope, energy_slope_with, ground_energy, ground_state, ground_state_single, write_energy_curve_csv,
    TransverseGroundState,
};
pub use operator::{
    assemble_scaled_operator, assemble_transverse_operator, direct_form_value, master_grid, sample_supported,
    transverse_form_value,
};
pub(crate) use operator::{add_transverse_form, twist_row};
pub use shape::{scale_cross_section, scale_point, CrossSection, Shape, SEGMENT_ASPECT};
