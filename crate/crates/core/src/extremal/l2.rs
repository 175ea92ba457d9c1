//! L² derivative ratios as the largest eigenvalue of a symmetric pencil
//! `A v = λ B v` built from Gram matrices under a generalized Jacobi weight.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::equilibrium::EquilibriumDensity;
use crate::error::{Error, Result};
use crate::factors::Weight;
use crate::numerics::linalg::{jacobi_eigen, symmetric_eig_max_pair, Matrix};
use crate::numerics::{golub_welsch, Recurrence};
use crate::sets::IntervalUnion;

use super::basis::PolyBasis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum L2Mode {
    /// `‖P'‖_w / ‖P‖_w`.
    Markov,
    /// `‖√((t-a)(b-t)) P'‖_w / ‖P‖_w` on a single interval `[a, b]`.
    GradientBernstein,
    /// `‖P'/(πω)‖ / ‖P‖` in `L²(ω dt)`, ω the equilibrium density.
    OmegaBernstein,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L2Result {
    /// `√λ_max`.
    pub ratio: f64,
    pub lambda: f64,
    /// Maximizing polynomial in the Chebyshev basis of `basis.reference`.
    pub coefficients: Vec<f64>,
    pub basis: PolyBasis,
}

const GRAM_CONDITION_LIMIT: f64 = 1e10;
const EXTRA_NODES: usize = 30;

/// Quadrature nodes and weights for `∫_E f · w`, with the endpoint
/// singularities of each band absorbed by a Gauss-Jacobi rule.
fn weighted_rule(set: &IntervalUnion, weight: &Weight, nodes: usize) -> Result<Vec<(f64, f64)>> {
    let e = set.endpoints();
    let mut out = Vec::new();
    for k in 0..set.band_count() {
        let (a, b) = (e[2 * k], e[2 * k + 1]);
        let (al, ar) = (weight.exponents[2 * k], weight.exponents[2 * k + 1]);
        let rule = golub_welsch(
            &Recurrence::Jacobi {
                alpha: ar,
                beta: al,
            },
            nodes,
        )?;
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        let scale = h.powf(al + ar + 1.0);
        for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
            let t = c + h * s;
            let rest: f64 = e
                .iter()
                .zip(&weight.exponents)
                .enumerate()
                .filter(|&(i, _)| i != 2 * k && i != 2 * k + 1)
                .map(|(_, (aa, ex))| (t - aa).abs().powf(*ex))
                .product();
            out.push((t, w * scale * rest * weight.h_at(t)));
        }
    }
    Ok(out)
}

fn gram(
    basis: &PolyBasis,
    rule: &[(f64, f64)],
    k: usize,
    multiplier: impl Fn(f64) -> f64,
) -> Matrix {
    let d = basis.len();
    let mut g = Matrix::zeros(d, d);
    for &(t, w) in rule {
        let v = basis.derivatives(t, k);
        let ww = w * multiplier(t);
        for i in 0..d {
            let vi = ww * v[i];
            if vi == 0.0 {
                continue;
            }
            for j in 0..d {
                g[(i, j)] += vi * v[j];
            }
        }
    }
    g
}

fn check_gram(b: &Matrix) -> Result<()> {
    let (eig, _) = jacobi_eigen(b, false)?;
    let max = eig.iter().fold(0.0f64, |m, v| m.max(*v));
    let min = eig.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    if !(min > 0.0) || max / min > GRAM_CONDITION_LIMIT {
        return Err(Error::numeric(format!(
            "Gram matrix is ill-conditioned or indefinite (eigenvalues in [{min:e}, {max:e}])"
        )));
    }
    Ok(())
}

/// `√λ_max` of the pencil for degree `n`, using the Chebyshev basis of the
/// set's hull.
pub fn l2_ratio_numeric(
    set: &IntervalUnion,
    weight: &Weight,
    n: usize,
    mode: L2Mode,
) -> Result<f64> {
    let (lo, hi) = set.hull();
    Ok(l2_ratio_with_basis(set, weight, &PolyBasis::algebraic(n, lo, hi)?, mode)?.ratio)
}

/// As [`l2_ratio_numeric`] with an explicit basis (any reference interval).
pub fn l2_ratio_with_basis(
    set: &IntervalUnion,
    weight: &Weight,
    basis: &PolyBasis,
    mode: L2Mode,
) -> Result<L2Result> {
    let n = basis.degree;
    if n == 0 || n > 100 {
        return Err(Error::invalid(format!(
            "degree must lie in 1..=100, got {n}"
        )));
    }
    let (a_mat, b_mat) = pencil(set, weight, basis, mode)?;
    check_gram(&b_mat)?;
    let (lambda, v) = symmetric_eig_max_pair(&a_mat, &b_mat)
        .map_err(|e| Error::numeric(format!("generalized eigenproblem failed: {e}")))?;
    Ok(L2Result {
        ratio: lambda.max(0.0).sqrt(),
        lambda,
        coefficients: v,
        basis: *basis,
    })
}

/// Gram matrices `(A, B)` of the numerator and denominator forms.
pub(crate) fn pencil(
    set: &IntervalUnion,
    weight: &Weight,
    basis: &PolyBasis,
    mode: L2Mode,
) -> Result<(Matrix, Matrix)> {
    let nodes = basis.degree + EXTRA_NODES;
    Ok(match mode {
        L2Mode::Markov | L2Mode::GradientBernstein => {
            weight.validate(set)?;
            let rule = weighted_rule(set, weight, nodes)?;
            let b = gram(basis, &rule, 0, |_| 1.0);
            let a = if mode == L2Mode::Markov {
                gram(basis, &rule, 1, |_| 1.0)
            } else {
                if set.band_count() != 1 {
                    return Err(Error::invalid(
                        "gradient-bernstein mode is defined on a single interval",
                    ));
                }
                let (lo, hi) = set.hull();
                gram(basis, &rule, 1, |t| (t - lo) * (hi - t))
            };
            (a, b)
        }
        L2Mode::OmegaBernstein => omega_pencil(set, basis, nodes)?,
    })
}

/// Pencil for `∫ P'²/(π²ω) dt` against `∫ P² ω dt`. On band k with
/// `t = c + h s`, `ω dt = f(s) ds/√(1-s²)` and `dt/ω = h² √(1-s²) ds / f(s)`.
fn omega_pencil(set: &IntervalUnion, basis: &PolyBasis, nodes: usize) -> Result<(Matrix, Matrix)> {
    let d = EquilibriumDensity::intervals(set)?;
    let sys = d.band_system().expect("interval densities carry bands");
    let cheb = golub_welsch(&Recurrence::ChebyshevFirst, nodes)?;
    let second = golub_welsch(
        &Recurrence::Jacobi {
            alpha: 0.5,
            beta: 0.5,
        },
        nodes,
    )?;
    let mut rule_b = Vec::new();
    let mut rule_a = Vec::new();
    for band in &sys.bands {
        let (c, h) = (band.center(), band.half_width());
        for (&s, &w) in cheb.nodes.iter().zip(&cheb.weights) {
            rule_b.push((c + h * s, w * band.weight(s)));
        }
        for (&s, &w) in second.nodes.iter().zip(&second.weights) {
            rule_a.push((c + h * s, w * h * h / (PI * PI * band.weight(s))));
        }
    }
    Ok((
        gram(basis, &rule_a, 1, |_| 1.0),
        gram(basis, &rule_b, 0, |_| 1.0),
    ))
}
