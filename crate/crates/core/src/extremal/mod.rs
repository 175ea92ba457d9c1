//! Numerical oracles for extremal polynomial problems and for the
//! inequalities whose constants the factors module predicts.

mod basis;
mod l2;
mod lp;
mod verify;
mod videnskii;

pub use basis::{BasisKind, PolyBasis};
pub use l2::{l2_ratio_numeric, l2_ratio_with_basis, L2Mode, L2Result};
pub use lp::{
    local_maxima, markov_candidates, markov_constant_numeric, pointwise_derivative_sup, sup_norm,
    Domain, ExtremalResult,
};
pub use verify::{
    verify_inequality, Inequality, VerifyOptions, VerifyReport, Violation, WitnessCheck,
};
pub use videnskii::{videnskii_check, VidenskiiPoint, VidenskiiReport};
