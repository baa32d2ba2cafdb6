//! Spectra of hard-wall helical quantum waveguides.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: sparse symmetric operators, banded LDLᵀ, shift-invert
//!   Lanczos, MINRES, 1D Schrödinger solver, Richardson extrapolation,
//!   quadrature and bisection.
//! - [`geometry`]: perturbed helices, Frenet frames, arc length and the
//!   ribbon tilt angle.
//! - [`cross_section`]: the twisted transverse operator on radially scaled
//!   cross sections, its ground state and the slope `dE/dα` at `α = 1`.
//! - [`straightened_tube`]: the straightened-tube quadratic form with
//!   cross-section scaling, trial functions and direct bound-state search.
//! - [`effective_model`]: thin-tube effective potentials, their first-order
//!   expansions and the mean-attractiveness binding criterion.
//! - [`cli`]: JSON run descriptors, CSV tables and run manifests.
//!
//! Units: `ħ²/2m = 1`, so energies are in inverse squared length units.

pub mod cli;
pub mod cross_section;
pub mod effective_model;
mod error;
pub mod geometry;
pub mod numerics;
pub mod straightened_tube;

pub use error::{Error, Result};
