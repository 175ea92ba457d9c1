//! Extremal derivative values by semi-infinite linear programming: the
//! constraint `‖P‖_E ≤ 1` is imposed on a grid that is refined at the
//! maxima of the current solution until the norm is certified.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numerics::chebyshev;
use crate::numerics::{simplex_solve, Constraint, LinearProgram, LpStatus};
use crate::sets::{wrap_angle, IntervalUnion, PeriodicSet};

use super::basis::{BasisKind, PolyBasis};

/// Where the polynomials are normed: real intervals for algebraic
/// polynomials, one period of a periodic set for trigonometric ones.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Intervals(IntervalUnion),
    Periodic(PeriodicSet),
}

impl Domain {
    pub fn bands(&self) -> Vec<(f64, f64)> {
        match self {
            Domain::Intervals(s) => s.bands().collect(),
            Domain::Periodic(p) => p.base().bands().collect(),
        }
    }

    pub fn endpoints(&self) -> &[f64] {
        match self {
            Domain::Intervals(s) => s.endpoints(),
            Domain::Periodic(p) => p.base().endpoints(),
        }
    }

    fn normalize(&self, x: f64) -> f64 {
        match self {
            Domain::Intervals(_) => x,
            Domain::Periodic(_) => wrap_angle(x),
        }
    }

    fn contains(&self, x: f64) -> bool {
        self.bands().iter().any(|&(a, b)| a <= x && x <= b)
    }

    fn check_basis(&self, basis: &PolyBasis) -> Result<()> {
        match (self, basis.kind) {
            (Domain::Intervals(_), BasisKind::AlgebraicChebyshev)
            | (Domain::Periodic(_), BasisKind::Trigonometric) => Ok(()),
            _ => Err(Error::invalid(
                "algebraic bases go with interval sets, trigonometric bases with periodic sets",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalResult {
    /// Extremal value: `|P^{(k)}(x₀)|` or `‖P^{(k)}‖_E`.
    pub value: f64,
    /// `value / n^{2k}` for Markov-type problems.
    pub normalized: Option<f64>,
    /// Point where the derivative value is attained.
    pub point: f64,
    pub order: usize,
    pub basis: PolyBasis,
    pub coefficients: Vec<f64>,
    /// Final constraint grid.
    pub grid: Vec<f64>,
    pub refinements: usize,
    /// `max |P|` over a grid 10× finer than the initial one, with local maxima refined.
    pub certified_norm: f64,
    pub lp_iterations: usize,
}

const INITIAL_PER_DEGREE: usize = 40;
const MAX_REFINEMENTS: usize = 60;

/// Golden-section maximization of a function assumed unimodal on `[a, b]`.
fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_9;
    let mut c = b - R * (b - a);
    let mut d = a + R * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - R * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + R * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Local maxima of `g` over each band: scan `per_band` Chebyshev-Lobatto
/// points, then refine every discrete local maximum by golden section.
/// Returns `(x, g(x))` pairs; band endpoints are candidates too.
pub fn local_maxima<F: Fn(f64) -> f64>(
    g: &F,
    bands: &[(f64, f64)],
    per_band: usize,
) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(a, b) in bands {
        let xs: Vec<f64> = chebyshev::points_lobatto(per_band)
            .into_iter()
            .map(|s| 0.5 * (a + b) + 0.5 * (b - a) * s)
            .collect();
        let vs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
        let m = xs.len();
        for i in 0..m {
            let left = if i > 0 { vs[i - 1] } else { f64::NEG_INFINITY };
            let right = if i + 1 < m {
                vs[i + 1]
            } else {
                f64::NEG_INFINITY
            };
            if vs[i] >= left && vs[i] >= right {
                let lo = xs[i.saturating_sub(1)];
                let hi = xs[(i + 1).min(m - 1)];
                let (x, v) = golden_max(g, lo, hi);
                out.push(if v > vs[i] { (x, v) } else { (xs[i], vs[i]) });
            }
        }
    }
    out
}

/// `sup_E |g|` by grid scan plus local refinement, with the maximizer.
pub fn sup_norm<F: Fn(f64) -> f64>(g: &F, bands: &[(f64, f64)], per_band: usize) -> (f64, f64) {
    let abs = |x: f64| g(x).abs();
    local_maxima(&abs, bands, per_band).into_iter().fold(
        (f64::NEG_INFINITY, f64::NAN),
        |best, (x, v)| if v > best.0 { (v, x) } else { best },
    )
}

fn lp_error(status: LpStatus) -> Error {
    match status {
        LpStatus::IterationLimit => Error::ResourceLimit("simplex iteration limit reached".into()),
        other => Error::numeric(format!("extremal LP ended with status {other:?}")),
    }
}

/// `sup |P^{(k)}(x₀)|` over `‖P‖_E ≤ 1` in the span of `basis`.
///
/// Only `+P^{(k)}(x₀)` is maximized: `P ↦ -P` maps feasible polynomials to
/// feasible ones and flips the sign of the objective.
pub fn pointwise_derivative_sup(
    domain: &Domain,
    basis: &PolyBasis,
    x0: f64,
    k: usize,
) -> Result<ExtremalResult> {
    domain.check_basis(basis)?;
    let x0 = domain.normalize(x0);
    if !domain.contains(x0) {
        return Err(Error::domain(format!("x₀ = {x0} does not lie on the set")));
    }
    let n = basis.degree;
    let bands = domain.bands();
    let tol = Tolerances::DEFAULT.certified_norm;
    let objective = basis.derivatives(x0, k);
    if objective.iter().all(|v| *v == 0.0) {
        return Err(Error::invalid(format!(
            "derivative order {k} annihilates the basis"
        )));
    }

    let mut grid: Vec<f64> = Vec::new();
    for &(a, b) in &bands {
        for s in chebyshev::points_lobatto(INITIAL_PER_DEGREE * n) {
            grid.push(0.5 * (a + b) + 0.5 * (b - a) * s);
        }
    }
    let row = |x: f64| basis.values(x);
    let mut constraints: Vec<Constraint> = Vec::with_capacity(2 * grid.len());
    for &x in &grid {
        let r = row(x);
        constraints.push(Constraint {
            coeffs: r.iter().map(|v| -v).collect(),
            rhs: 1.0,
        });
        constraints.push(Constraint {
            coeffs: r,
            rhs: 1.0,
        });
    }

    let fine = 10 * INITIAL_PER_DEGREE * n;
    let mut iterations = 0;
    for refinement in 0..=MAX_REFINEMENTS {
        let lp = LinearProgram {
            objective: objective.clone(),
            constraints: constraints.clone(),
        };
        let res = simplex_solve(&lp)?;
        iterations += res.iterations;
        if res.status != LpStatus::Optimal {
            return Err(lp_error(res.status));
        }
        let c = res.solution;
        let g = |x: f64| basis.eval(&c, x).abs();
        let maxima = local_maxima(&g, &bands, fine);
        let certified = maxima.iter().fold(0.0f64, |m, p| m.max(p.1));
        if certified <= 1.0 + tol {
            let value = basis.eval_derivative(&c, x0, k);
            return Ok(ExtremalResult {
                value,
                normalized: None,
                point: x0,
                order: k,
                basis: *basis,
                coefficients: c,
                grid,
                refinements: refinement,
                certified_norm: certified,
                lp_iterations: iterations,
            });
        }
        for &(x, v) in &maxima {
            if v > 1.0 + 0.1 * tol {
                let r = row(x);
                constraints.push(Constraint {
                    coeffs: r.iter().map(|v| -v).collect(),
                    rhs: 1.0,
                });
                constraints.push(Constraint {
                    coeffs: r,
                    rhs: 1.0,
                });
                grid.push(x);
            }
        }
    }
    Err(Error::numeric(format!(
        "norm certification failed after {MAX_REFINEMENTS} grid refinements"
    )))
}

/// Candidate points for a global derivative maximum: every endpoint plus
/// 10 points per band end at distances `L·4^{-i}`, `i = 1..=10`.
pub fn markov_candidates(domain: &Domain) -> Vec<f64> {
    let mut pts: Vec<f64> = domain.endpoints().to_vec();
    for (a, b) in domain.bands() {
        let len = b - a;
        for i in 1..=10 {
            let d = len * 4f64.powi(-i);
            pts.push(a + d);
            pts.push(b - d);
        }
    }
    pts
}

/// `sup ‖P^{(k)}‖_E` over `‖P‖_E ≤ 1` as the maximum of pointwise extremal
/// values over [`markov_candidates`], solved in parallel. Ties go to the
/// first candidate, so the result does not depend on scheduling.
pub fn markov_constant_numeric(
    domain: &Domain,
    basis: &PolyBasis,
    k: usize,
) -> Result<ExtremalResult> {
    let candidates = markov_candidates(domain);
    let results: Vec<Result<ExtremalResult>> = candidates
        .par_iter()
        .map(|&x| pointwise_derivative_sup(domain, basis, x, k))
        .collect();
    let mut best: Option<ExtremalResult> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    let mut best = best.expect("at least one candidate");
    best.normalized = Some(best.value / (basis.degree as f64).powi(2 * k as i32));
    Ok(best)
}
