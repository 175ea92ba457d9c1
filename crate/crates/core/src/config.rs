//! Numerical tolerances used across the crate.
//!
//! Every threshold that a test or a report depends on lives here so that the
//! values can be inspected and overridden in one place.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Total weight of an n-point Gauss-Legendre rule must equal 2 within this.
    pub quadrature_mass: f64,
    /// Residual bound for Bessel zeros.
    pub bessel_residual: f64,
    /// Bisection width for Bessel zeros.
    pub bessel_zero: f64,
    /// Constraint feasibility for the simplex solver.
    pub lp_feasibility: f64,
    /// Absolute tolerance of bracketed root finding.
    pub root: f64,
    /// Maximum allowed gap-moment residual after solving for the gap zeros.
    pub xi_residual: f64,
    /// Relative change at which doubling a quadrature rule stops.
    pub quadrature_doubling: f64,
    /// Allowed deviation of total mass from 1.
    pub mass: f64,
    /// Allowed spread of the logarithmic potential on the set.
    pub frostman_spread: f64,
    /// Width of the endpoint buffer excluded from probe grids.
    pub endpoint_buffer: f64,
    /// Error estimate bound for extrapolated endpoint limits.
    pub extrapolation: f64,
    /// Condition number above which a collocation solve is rejected.
    pub collocation_condition: f64,
    /// Certified sup-norm bound for extremal polynomials (1 + this).
    pub certified_norm: f64,
    /// Relative slack before an exact inequality counts as violated.
    pub violation: f64,
    /// Lower bound on sharpness ratios at the top tested degree.
    pub sharpness_floor: f64,
    /// Allowed relative gap between the numeric Markov constant and the asymptotic factor.
    pub markov_gap: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        quadrature_mass: 1e-13,
        bessel_residual: 1e-12,
        bessel_zero: 1e-12,
        lp_feasibility: 1e-9,
        root: 1e-13,
        xi_residual: 1e-11,
        quadrature_doubling: 1e-12,
        mass: 1e-8,
        frostman_spread: 1e-6,
        endpoint_buffer: 1e-3,
        extrapolation: 1e-6,
        collocation_condition: 1e12,
        certified_norm: 1e-6,
        violation: 1e-9,
        sharpness_floor: 0.85,
        markov_gap: 0.15,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Default collocation degree per band.
pub const COLLOCATION_DEGREE: usize = 40;
/// Default number of density samples per band in tabulated output.
pub const SAMPLES_PER_BAND: usize = 512;
/// Simplex iteration cap.
pub const LP_ITERATION_LIMIT: usize = 1_000_000;
