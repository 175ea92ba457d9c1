//! Closed-form densities on a single arc, a circle and a lemniscate.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sets::{Circle, Lemniscate};

/// Density per unit arc length of the arc `{e^{it} : |t| ≤ β}` at `e^{it}`.
pub fn density_arc(beta: f64, t: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < PI) {
        return Err(Error::invalid(format!(
            "arc half-angle must lie in (0, π), got {beta}"
        )));
    }
    if !(t.abs() < beta) {
        return Err(Error::domain(format!(
            "angle {t} is not interior to the arc [-{beta}, {beta}]"
        )));
    }
    Ok(arc_formula(beta, t))
}

/// `sin²(β/2) - sin²(t/2) = sin((β-t)/2) sin((β+t)/2)` avoids cancellation.
pub(crate) fn arc_formula(beta: f64, t: f64) -> f64 {
    let d = (0.5 * (beta - t)).sin() * (0.5 * (beta + t)).sin();
    (0.5 * t).cos() / (2.0 * PI * d.sqrt())
}

/// Smooth band factor `ω · β · √(1 - s²)` with `t = β s`.
pub(crate) fn arc_band_weight(beta: f64, s: f64) -> f64 {
    let t = beta * s;
    let ratio = |x: f64| {
        if x == 0.0 {
            2.0
        } else {
            x / (0.5 * x).sin()
        }
    };
    (0.5 * t).cos() * (ratio(beta - t) * ratio(beta + t)).sqrt() / (2.0 * PI)
}

/// `Ω` of a single arc of half-angle β at either endpoint.
pub(crate) fn arc_omega(beta: f64) -> f64 {
    let h = 0.5 * beta;
    h.cos() / (2.0 * PI * (h.sin() * h.cos()).sqrt())
}

/// Constant density `1/(2πr)` of a circle per unit arc length.
pub fn density_circle(circle: &Circle) -> f64 {
    1.0 / (2.0 * PI * circle.radius)
}

/// Density `|T'(z)| / (2πN)` at a point `z` of the lemniscate `|T| = 1`.
pub fn density_lemniscate(lemniscate: &Lemniscate, z: Complex64) -> Result<f64> {
    let (t, dt) = lemniscate.eval_with_derivative(z);
    if (t.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::domain(format!(
            "point {z} is not on the lemniscate: |T(z)| = {}",
            t.norm()
        )));
    }
    Ok(dt.norm() / (2.0 * PI * lemniscate.degree() as f64))
}

/// All `N` solutions of `T(z) = e^{iφ}` by Weierstrass iteration followed by
/// Newton polishing; together they lie on the lemniscate.
pub fn lemniscate_level_points(lemniscate: &Lemniscate, phi: f64) -> Result<Vec<Complex64>> {
    let n = lemniscate.degree();
    let lead = *lemniscate.coeffs().last().expect("degree ≥ 1");
    let mut c: Vec<Complex64> = lemniscate.coeffs().iter().map(|&a| a / lead).collect();
    c[0] -= Complex64::from_polar(1.0, phi) / lead;
    let p = |z: Complex64| {
        c.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    };
    let bound = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * bound, 0.4 + 2.0 * PI * k as f64 / n as f64))
        .collect();
    let mut converged = false;
    for _ in 0..2000 {
        let mut change = 0.0f64;
        for i in 0..n {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if denom.norm() == 0.0 {
                z[i] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let step = p(z[i]) / denom;
            z[i] -= step;
            change = change.max(step.norm());
        }
        if change < 1e-15 * bound {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::numeric(
            "root iteration for lemniscate points did not converge",
        ));
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (t, dt) = lemniscate.eval_with_derivative(*zi);
            if dt.norm() == 0.0 {
                break;
            }
            *zi -= (t - Complex64::from_polar(1.0, phi)) / dt;
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_center_value() {
        let v = density_arc(PI / 2.0, 0.0).unwrap();
        assert!((v - 2f64.sqrt() / (2.0 * PI)).abs() < 1e-15);
        assert!(density_arc(1.0, 1.0).is_err());
    }

    #[test]
    fn band_weight_matches_formula() {
        let beta = 2.0;
        for s in [-0.9, -0.3, 0.0, 0.7] {
            let t: f64 = beta * s;
            let direct = arc_formula(beta, t) * beta * (1.0 - s * s).sqrt();
            assert!((arc_band_weight(beta, s) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn level_points_lie_on_lemniscate() {
        let l = Lemniscate::new(vec![
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        let pts = lemniscate_level_points(&l, 0.7).unwrap();
        assert_eq!(pts.len(), 2);
        for z in pts {
            assert!((l.eval_with_derivative(z).0.norm() - 1.0).abs() < 1e-13);
        }
    }
}
