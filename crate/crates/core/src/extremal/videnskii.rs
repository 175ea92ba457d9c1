//! Trigonometric extremal values on `[-β, β]` compared with the closed
//! Videnskii factors.

use serde::Serialize;

use crate::error::Result;
use crate::factors::{videnskii_factor, videnskii_markov};
use crate::sets::PeriodicSet;

use super::basis::PolyBasis;
use super::lp::{markov_constant_numeric, pointwise_derivative_sup, Domain};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VidenskiiPoint {
    pub theta: f64,
    /// `sup |T'(θ)|` over `‖T‖ ≤ 1`.
    pub extremal: f64,
    /// `n · cos(θ/2)/√(sin²(β/2) - sin²(θ/2))`.
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VidenskiiReport {
    pub beta: f64,
    pub degree: usize,
    pub points: Vec<VidenskiiPoint>,
    /// `sup ‖T'‖` over `‖T‖ ≤ 1`.
    pub markov_extremal: f64,
    /// `n² · 2cot(β/2)`.
    pub markov_bound: f64,
    pub markov_ratio: f64,
}

/// Pointwise ratios at each `θ` and the Markov ratio for degree `n`.
pub fn videnskii_check(beta: f64, n: usize, thetas: &[f64]) -> Result<VidenskiiReport> {
    let set = PeriodicSet::symmetric(beta)?;
    let basis = PolyBasis::trigonometric_for(&set, n)?;
    let domain = Domain::Periodic(set);
    let nf = n as f64;
    let mut points = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let bound = nf * videnskii_factor(beta, theta)?.value;
        let extremal = pointwise_derivative_sup(&domain, &basis, theta, 1)?.value;
        points.push(VidenskiiPoint {
            theta,
            extremal,
            bound,
            ratio: extremal / bound,
        });
    }
    let markov_extremal = markov_constant_numeric(&domain, &basis, 1)?.value;
    let markov_bound = nf * nf * videnskii_markov(beta)?.value;
    Ok(VidenskiiReport {
        beta,
        degree: n,
        points,
        markov_extremal,
        markov_bound,
        markov_ratio: markov_extremal / markov_bound,
    })
}
