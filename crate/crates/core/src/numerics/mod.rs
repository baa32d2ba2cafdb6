//! Shared numerical kernels.

pub mod banded;
pub mod eigen;
pub mod krylov;
pub mod quadrature;
pub mod richardson;
pub mod roots;
pub mod schrodinger1d;
pub mod sparse;
pub mod stencil;
pub mod tridiag;

pub use banded::BandedLdlt;
pub use eigen::{smallest_eigenpairs, smallest_eigenpairs_with, Backend, EigenOptions, SpectralResult};
pub use richardson::{extract_linear_coefficient, Extrapolation, Ladder};
pub use roots::find_sign_change;
pub use schrodinger1d::{solve_1d_schrodinger, SampledPotential};
pub use sparse::{SparseSymmetricOperator, TripletBuilder};
