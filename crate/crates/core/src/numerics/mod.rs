//! Numerical kernels shared by the rest of the crate.

pub mod bessel;
pub mod chebyshev;
pub mod linalg;
pub mod quadrature;
pub mod roots;
pub mod simplex;

pub use bessel::{bessel_j, bessel_smallest_zero, BesselZero};
pub use linalg::{symmetric_eig_max, Matrix};
pub use quadrature::{
    gauss_chebyshev, gauss_legendre, golub_welsch, QuadratureRule, Recurrence, RuleKind,
};
pub use roots::find_root_bracketed;
pub use simplex::{simplex_solve, Constraint, LinearProgram, LpResult, LpStatus};
