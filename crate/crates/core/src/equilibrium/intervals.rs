//! Closed-form equilibrium density of a finite union of real intervals.

use serde::Serialize;
use std::f64::consts::PI;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numerics::linalg::{Lu, Matrix};
use crate::numerics::{find_root_bracketed, gauss_legendre};
use crate::sets::{locate, IntervalUnion, Location};

/// Finite limit of `√|t - a_j| · ω(t)` at an endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndpointData {
    /// 0-based endpoint index.
    pub index: usize,
    pub omega: f64,
    /// Band (interval or arc) the limit is taken from.
    pub band: usize,
    /// Estimated absolute error; zero for closed forms.
    pub error_estimate: f64,
}

/// `1/√∏|u - a_i|` over the endpoints not bounding gap `j`.
fn outer_factor(e: &[f64], gap: usize, u: f64) -> f64 {
    let skip = (2 * gap + 1, 2 * gap + 2);
    let p: f64 = e
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip.0 && i != skip.1)
        .map(|(_, &a)| (u - a).abs())
        .product();
    1.0 / p.sqrt()
}

/// `∫_0^π g(u(θ)) dθ` over every gap for a vector-valued integrand, with
/// `u = c_j + r_j cos θ`, doubling Gauss-Legendre from 64 nodes.
fn gap_integrals<F>(e: &[f64], width: usize, g: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(usize, f64, &mut [f64]),
{
    let gaps = e.len() / 2 - 1;
    let tol = Tolerances::DEFAULT.quadrature_doubling;
    let eval = |n: usize| -> Result<Vec<Vec<f64>>> {
        let rule = gauss_legendre(n)?;
        let mut out = vec![vec![0.0; width]; gaps];
        let mut buf = vec![0.0; width];
        for (j, row) in out.iter_mut().enumerate() {
            let c = 0.5 * (e[2 * j + 1] + e[2 * j + 2]);
            let r = 0.5 * (e[2 * j + 2] - e[2 * j + 1]);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let theta = 0.5 * PI * (x + 1.0);
                let u = c + r * theta.cos();
                let scale = 0.5 * PI * w * outer_factor(e, j, u);
                g(j, u, &mut buf);
                for (o, b) in row.iter_mut().zip(&buf) {
                    *o += scale * b;
                }
            }
        }
        Ok(out)
    };
    let mut n = 64;
    let mut prev = eval(n)?;
    while n < 8192 {
        n *= 2;
        let cur = eval(n)?;
        let converged = cur.iter().zip(&prev).all(|(a, b)| {
            let scale = a.iter().fold(1e-300f64, |s, v| s.max(v.abs()));
            a.iter()
                .zip(b)
                .all(|(x, y)| (x - y).abs() <= tol * scale.max(1.0))
        });
        if converged {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::numeric(
        "gap integrals did not converge under node doubling",
    ))
}

/// The points ξ_1 < … < ξ_{m-1}, one per gap, at which the numerator of the
/// equilibrium density vanishes; empty for a single interval.
pub fn solve_xi(set: &IntervalUnion) -> Result<Vec<f64>> {
    let e = set.endpoints();
    let m = set.band_count();
    if m == 1 {
        return Ok(Vec::new());
    }
    let p = m - 1;
    let (lo, hi) = set.hull();
    let (cc, rr) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    // moments of v^i with v = (u - C)/R the hull coordinate
    let moments = gap_integrals(e, p + 1, |_, u, out| {
        let v = (u - cc) / rr;
        let mut pw = 1.0;
        for o in out.iter_mut() {
            *o = pw;
            pw *= v;
        }
    })?;
    let a = Matrix::from_fn(p, p, |j, i| moments[j][i]);
    let rhs: Vec<f64> = moments.iter().map(|row| -row[p]).collect();
    let lu = Lu::new(&a).map_err(|_| Error::numeric("gap moment system is singular"))?;
    let mut coeffs = lu.solve(&rhs);
    coeffs.push(1.0);
    let q = |u: f64| {
        let v = (u - cc) / rr;
        coeffs.iter().rev().fold(0.0, |acc, c| acc * v + c)
    };
    let mut xi = Vec::with_capacity(p);
    for j in 0..p {
        let (g0, g1) = (e[2 * j + 1], e[2 * j + 2]);
        let root = find_root_bracketed(q, g0, g1).map_err(|_| {
            Error::numeric(format!(
                "gap polynomial has no root in gap [{g0}, {g1}]; the gap conditions have no admissible solution"
            ))
        })?;
        if !(root > g0 && root < g1) {
            return Err(Error::numeric(format!(
                "root {root} escapes gap ({g0}, {g1})"
            )));
        }
        xi.push(root);
    }
    Ok(xi)
}

/// `∫_{gap j} ∏(u - ξ_i) / √|∏(u - a_i)| du` for every gap.
pub fn xi_residuals(set: &IntervalUnion, xi: &[f64]) -> Result<Vec<f64>> {
    let e = set.endpoints();
    if xi.len() + 1 != set.band_count() {
        return Err(Error::invalid(format!(
            "expected {} ξ values, got {}",
            set.band_count() - 1,
            xi.len()
        )));
    }
    if xi.is_empty() {
        return Ok(Vec::new());
    }
    let v = gap_integrals(e, 1, |_, u, out| {
        out[0] = xi.iter().map(|x| u - x).product();
    })?;
    Ok(v.into_iter().map(|r| r[0]).collect())
}

/// `(1/π) ∏|t - ξ_i| / √∏|t - a_i|` without interior checks.
pub(crate) fn density_formula(e: &[f64], xi: &[f64], t: f64) -> f64 {
    let num: f64 = xi.iter().map(|x| (t - x).abs()).product();
    let den: f64 = e.iter().map(|a| (t - a).abs()).product();
    num / (PI * den.sqrt())
}

/// Equilibrium density at an interior point `t` of the set.
pub fn density_intervals(set: &IntervalUnion, xi: &[f64], t: f64) -> Result<f64> {
    if xi.len() + 1 != set.band_count() {
        return Err(Error::invalid(format!(
            "expected {} ξ values, got {}",
            set.band_count() - 1,
            xi.len()
        )));
    }
    match locate(set, t) {
        Location::Interior => Ok(density_formula(set.endpoints(), xi, t)),
        Location::Endpoint(j) => Err(Error::domain(format!(
            "t = {t} is endpoint {j}; the density is infinite there"
        ))),
        _ => Err(Error::domain(format!(
            "t = {t} is not an interior point of the set"
        ))),
    }
}

/// Band-local smooth factor `ω(t) · h · √(1 - s²)` on band `k`.
pub(crate) fn band_weight(e: &[f64], xi: &[f64], k: usize, s: f64) -> f64 {
    let (a, b) = (e[2 * k], e[2 * k + 1]);
    let t = 0.5 * (a + b) + 0.5 * (b - a) * s;
    let num: f64 = xi.iter().map(|x| (t - x).abs()).product();
    let den: f64 = e
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != 2 * k && i != 2 * k + 1)
        .map(|(_, a)| (t - a).abs())
        .product();
    num / (PI * den.sqrt())
}

/// Closed-form `Ω_j = (1/π) ∏|a_j - ξ_i| / √∏_{i≠j}|a_j - a_i|`.
pub fn omega_limit(set: &IntervalUnion, xi: &[f64], j: usize) -> Result<EndpointData> {
    let e = set.endpoints();
    if j >= e.len() {
        return Err(Error::invalid(format!(
            "endpoint index {j} out of range (set has {} endpoints)",
            e.len()
        )));
    }
    if xi.len() + 1 != set.band_count() {
        return Err(Error::invalid("ξ list does not match the number of gaps"));
    }
    let aj = e[j];
    let num: f64 = xi.iter().map(|x| (aj - x).abs()).product();
    let den: f64 = e
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, a)| (aj - a).abs())
        .product();
    Ok(EndpointData {
        index: j,
        omega: num / (PI * den.sqrt()),
        band: j / 2,
        error_estimate: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_pair_has_zero_xi() {
        let e = IntervalUnion::new(vec![-1.0, -0.5, 0.5, 1.0]).unwrap();
        let xi = solve_xi(&e).unwrap();
        assert_eq!(xi.len(), 1);
        assert!(xi[0].abs() < 1e-13);
    }

    #[test]
    fn residuals_vanish() {
        let e = IntervalUnion::new(vec![0.0, 1.0, 2.0, 4.0, 5.0, 5.5]).unwrap();
        let xi = solve_xi(&e).unwrap();
        assert!(xi[0] > 1.0 && xi[0] < 2.0 && xi[1] > 4.0 && xi[1] < 5.0);
        for r in xi_residuals(&e, &xi).unwrap() {
            assert!(r.abs() < 1e-11, "{r}");
        }
    }

    #[test]
    fn endpoint_density_is_domain_error() {
        let e = IntervalUnion::interval(-1.0, 1.0).unwrap();
        assert!(matches!(
            density_intervals(&e, &[], 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            density_intervals(&e, &[], 2.0),
            Err(Error::Domain(_))
        ));
    }
}
