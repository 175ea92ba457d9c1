//! Bessel functions of the first kind of real order and their first zeros.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Smallest positive zero of `J_order` together with its residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselZero {
    pub order: f64,
    pub zero: f64,
    pub residual: f64,
}

const SERIES_LIMIT: f64 = 12.0;

/// `J_order(x)` for `order > -1` and `0 < x <= 100`.
///
/// Ascending series up to x = 12; above that Miller's backward recurrence
/// normalized by the Neumann identity
/// `(x/2)^ν = Σ_k (ν+2k) Γ(ν+k)/k! · J_{ν+2k}(x)`.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    if !(order > -1.0) || !order.is_finite() {
        return Err(Error::invalid(format!(
            "Bessel order must exceed -1, got {order}"
        )));
    }
    if !(x > 0.0 && x <= 100.0) {
        return Err(Error::domain(format!(
            "Bessel argument must lie in (0, 100], got {x}"
        )));
    }
    if x <= SERIES_LIMIT {
        Ok(series(order, x))
    } else {
        Ok(miller(order, x))
    }
}

fn series(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0 / libm::tgamma(nu + 1.0);
    let mut sum = term;
    for k in 1..300 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && kf > 0.5 * x {
            break;
        }
    }
    (0.5 * x).powf(nu) * sum
}

fn miller(nu: f64, x: f64) -> f64 {
    let top = (x + 40.0 + 10.0 * x.sqrt()).ceil() as usize;
    let top = top + (top % 2);
    // weights[m] = (ν+m) Γ(ν+m/2)/(m/2)! for even m, the k = 0 term being Γ(ν+1)
    let mut weights = vec![0.0; top + 1];
    let mut ratio = libm::tgamma(nu + 1.0);
    weights[0] = ratio;
    for k in 1..=top / 2 {
        if k > 1 {
            let kf = k as f64;
            ratio *= (nu + kf - 1.0) / kf;
        }
        weights[2 * k] = (nu + 2.0 * k as f64) * ratio;
    }
    let mut next = 0.0;
    let mut cur = 1.0;
    let mut norm = weights[top] * cur;
    for k in (0..top).rev() {
        let mu = nu + (k + 1) as f64;
        let prev = 2.0 * mu / x * cur - next;
        next = cur;
        cur = prev;
        if k % 2 == 0 {
            norm += weights[k] * cur;
        }
        if cur.abs() > 1e200 {
            next *= 1e-200;
            cur *= 1e-200;
            norm *= 1e-200;
        }
    }
    cur * (0.5 * x).powf(nu) / norm
}

/// Smallest positive zero ν_κ of `J_{(κ-1)/2}`: sign-change scan with step
/// 0.1 from 0⁺, then bisection.
pub fn bessel_smallest_zero(kappa: f64) -> Result<BesselZero> {
    if !(kappa > -1.0) || !kappa.is_finite() {
        return Err(Error::invalid(format!("kappa must exceed -1, got {kappa}")));
    }
    let order = 0.5 * (kappa - 1.0);
    let tol = Tolerances::DEFAULT.bessel_zero;
    let f = |x: f64| bessel_j(order, x);
    let mut lo = 1e-6;
    let mut flo = f(lo)?;
    let mut bracket = None;
    let mut x = 0.1;
    while x <= 100.0 + 1e-9 {
        let fx = f(x)?;
        if flo * fx <= 0.0 {
            bracket = Some((lo, x, flo));
            break;
        }
        lo = x;
        flo = fx;
        x += 0.1;
    }
    let (mut a, mut b, mut fa) =
        bracket.ok_or_else(|| Error::numeric("no sign change of Bessel function in (0, 100]"))?;
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    let zero = 0.5 * (a + b);
    Ok(BesselZero {
        order,
        zero,
        residual: f(zero)?.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn j_minus_half(x: f64) -> f64 {
        (2.0 / (PI * x)).sqrt() * x.cos()
    }

    fn j_half(x: f64) -> f64 {
        (2.0 / (PI * x)).sqrt() * x.sin()
    }

    #[test]
    fn half_integer_orders_match_closed_forms() {
        for &x in &[0.3, 1.0, PI / 2.0, 5.0, 11.9, 12.1, 20.0, 47.3, 99.0] {
            assert!(
                (bessel_j(-0.5, x).unwrap() - j_minus_half(x)).abs() < 1e-12,
                "x={x}"
            );
            assert!(
                (bessel_j(0.5, x).unwrap() - j_half(x)).abs() < 1e-12,
                "x={x}"
            );
        }
        assert!(bessel_j(-0.5, PI / 2.0).unwrap().abs() < 1e-15);
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-15);
    }

    #[test]
    fn order_zero_small_argument_limit() {
        assert!((bessel_j(0.0, 1e-9).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn series_and_recurrence_agree_at_split() {
        for &nu in &[0.0, 0.25, 1.0, 2.0] {
            let a = series(nu, 12.0);
            let b = miller(nu, 12.0);
            assert!((a - b).abs() < 1e-12, "nu={nu}: {a} vs {b}");
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(bessel_j(0.0, 0.0).is_err());
        assert!(bessel_j(0.0, 100.5).is_err());
        assert!(bessel_j(-1.0, 1.0).is_err());
        assert!(bessel_smallest_zero(-1.0).is_err());
    }

    #[test]
    fn smallest_zeros() {
        let z0 = bessel_smallest_zero(0.0).unwrap();
        assert!((z0.zero - PI / 2.0).abs() < 1e-12);
        let z2 = bessel_smallest_zero(2.0).unwrap();
        assert!((z2.zero - PI).abs() < 1e-12);
        let z1 = bessel_smallest_zero(1.0).unwrap();
        assert!((z1.zero - 2.404_825_557_695_773).abs() < 1e-11);
        for k in [0.0, 0.5, 1.0, 2.0, 5.0] {
            let z = bessel_smallest_zero(k).unwrap();
            assert!(z.residual < 1e-12, "kappa={k} residual {}", z.residual);
            assert!(z.zero > 0.0);
        }
    }
}
