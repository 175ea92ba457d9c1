//! Polynomial bases used by the extremal solvers.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numerics::chebyshev;
use crate::sets::{IntervalUnion, PeriodicSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    /// `T_j((x - c)/h)` for the reference interval `[c - h, c + h]`.
    AlgebraicChebyshev,
    /// Trigonometric polynomials of degree n written as `T_j(u)` and
    /// `sin(s)·T_{j-1}(u)` with `s = t - t_c`, `u` the affine image of
    /// `cos s` onto [-1, 1] over the reference arc `[t_c - γ, t_c + γ]`.
    /// Spans `1, cos t, sin t, …, cos nt, sin nt`, but stays well
    /// conditioned on arcs shorter than the full period.
    Trigonometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyBasis {
    pub kind: BasisKind,
    pub degree: usize,
    /// Conditioning interval: real for algebraic bases, an arc of angles
    /// for trigonometric ones.
    pub reference: (f64, f64),
}

impl PolyBasis {
    pub fn algebraic(degree: usize, lo: f64, hi: f64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("polynomial degree must be positive"));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(format!(
                "bad reference interval [{lo}, {hi}]"
            )));
        }
        Ok(PolyBasis {
            kind: BasisKind::AlgebraicChebyshev,
            degree,
            reference: (lo, hi),
        })
    }

    /// Chebyshev basis of the smallest interval covering the set.
    pub fn algebraic_for(set: &IntervalUnion, degree: usize) -> Result<Self> {
        let (lo, hi) = set.hull();
        Self::algebraic(degree, lo, hi)
    }

    /// Trigonometric basis conditioned on the full period.
    pub fn trigonometric(degree: usize) -> Result<Self> {
        Self::trigonometric_on(degree, -PI, PI)
    }

    /// Trigonometric basis conditioned on the arc `[lo, hi]` (angles).
    pub fn trigonometric_on(degree: usize, lo: f64, hi: f64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("polynomial degree must be positive"));
        }
        if !(lo < hi && hi - lo <= 2.0 * PI + 1e-12) {
            return Err(Error::invalid(format!("bad reference arc [{lo}, {hi}]")));
        }
        Ok(PolyBasis {
            kind: BasisKind::Trigonometric,
            degree,
            reference: (lo, hi),
        })
    }

    /// Trigonometric basis conditioned on the smallest arc covering one
    /// period of the set, i.e. the complement of its largest gap.
    pub fn trigonometric_for(set: &PeriodicSet, degree: usize) -> Result<Self> {
        let e = set.base().endpoints();
        let m = e.len();
        // gap after endpoint 2i+1 runs to endpoint 2i+2 (cyclically)
        let (mut best, mut start) = (f64::NEG_INFINITY, 0);
        for i in 0..m / 2 {
            let from = e[2 * i + 1];
            let to = if 2 * i + 2 < m {
                e[2 * i + 2]
            } else {
                e[0] + 2.0 * PI
            };
            if to - from > best {
                best = to - from;
                start = (2 * i + 2) % m;
            }
        }
        let lo = e[start];
        let hi = lo + 2.0 * PI - best;
        Self::trigonometric_on(degree, lo, hi)
    }

    pub fn len(&self) -> usize {
        match self.kind {
            BasisKind::AlgebraicChebyshev => self.degree + 1,
            BasisKind::Trigonometric => 2 * self.degree + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn local(&self, x: f64) -> (f64, f64) {
        let (lo, hi) = self.reference;
        let h = 0.5 * (hi - lo);
        ((x - 0.5 * (lo + hi)) / h, h)
    }

    /// k-th derivatives of every basis function at `x` (k = 0 gives values).
    pub fn derivatives(&self, x: f64, k: usize) -> Vec<f64> {
        match self.kind {
            BasisKind::AlgebraicChebyshev => {
                let (s, h) = self.local(x);
                let scale = h.powi(-(k as i32));
                let mut d = chebyshev::derivatives(self.degree, k, s);
                if k > 0 {
                    d.iter_mut().for_each(|v| *v *= scale);
                }
                d
            }
            BasisKind::Trigonometric => self.trig_derivatives(x, k),
        }
    }

    /// `(t_c, c, h)` with `u = (cos(t - t_c) - c)/h`.
    fn trig_frame(&self) -> (f64, f64, f64) {
        let (lo, hi) = self.reference;
        let gamma = (0.5 * (hi - lo)).min(PI);
        let low = gamma.cos();
        (0.5 * (lo + hi), 0.5 * (1.0 + low), 0.5 * (1.0 - low))
    }

    fn trig_derivatives(&self, x: f64, k: usize) -> Vec<f64> {
        let (tc, c, h) = self.trig_frame();
        let s = x - tc;
        let n = self.degree;
        let len = k + 1;
        // truncated Taylor jets in ε of functions of s + ε
        let mut cos_jet = vec![0.0; len];
        let mut sin_jet = vec![0.0; len];
        let mut fact = 1.0;
        for i in 0..len {
            if i > 0 {
                fact *= i as f64;
            }
            let shift = i as f64 * FRAC_PI_2;
            cos_jet[i] = (s + shift).cos() / fact;
            sin_jet[i] = (s + shift).sin() / fact;
        }
        let mul = |a: &[f64], b: &[f64]| -> Vec<f64> {
            (0..len)
                .map(|i| (0..=i).map(|j| a[j] * b[i - j]).sum())
                .collect()
        };
        let mut u = cos_jet.iter().map(|v| v / h).collect::<Vec<f64>>();
        u[0] -= c / h;
        let mut t_prev = vec![0.0; len];
        t_prev[0] = 1.0;
        let mut t_cur = u.clone();
        let kfact: f64 = (1..=k).map(|i| i as f64).product();
        let mut out = Vec::with_capacity(self.len());
        out.push(t_prev[k] * kfact);
        for _ in 1..=n {
            // t_cur = T_j(u), t_prev = T_{j-1}(u)
            out.push(t_cur[k] * kfact);
            out.push(mul(&sin_jet, &t_prev)[k] * kfact);
            let next: Vec<f64> = mul(&u, &t_cur)
                .iter()
                .zip(&t_prev)
                .map(|(a, b)| 2.0 * a - b)
                .collect();
            t_prev = std::mem::replace(&mut t_cur, next);
        }
        out
    }

    pub fn values(&self, x: f64) -> Vec<f64> {
        self.derivatives(x, 0)
    }

    /// `P^{(k)}(x)` for coefficients in this basis.
    pub fn eval_derivative(&self, coeffs: &[f64], x: f64, k: usize) -> f64 {
        match (self.kind, k) {
            (BasisKind::AlgebraicChebyshev, 0) => chebyshev::clenshaw(coeffs, self.local(x).0),
            _ => self
                .derivatives(x, k)
                .iter()
                .zip(coeffs)
                .map(|(a, b)| a * b)
                .sum(),
        }
    }

    pub fn eval(&self, coeffs: &[f64], x: f64) -> f64 {
        self.eval_derivative(coeffs, x, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_derivative_scaling() {
        // T_2 on [0, 2] is 2(x-1)^2 - 1, derivative 4(x-1)
        let b = PolyBasis::algebraic(2, 0.0, 2.0).unwrap();
        let d = b.derivatives(1.5, 1);
        assert!((d[2] - 2.0).abs() < 1e-14);
        assert!((b.eval(&[0.0, 0.0, 1.0], 1.5) + 0.5).abs() < 1e-14);
    }

    #[test]
    fn trig_basis_spans_standard_functions() {
        // full-period frame: T_j(cos t) = cos jt and sin t·T_0 = sin t
        let b = PolyBasis::trigonometric(3).unwrap();
        let x = 0.7f64;
        let v = b.values(x);
        assert!((v[3] - (2.0 * x).cos()).abs() < 1e-14);
        assert!((v[2] - x.sin()).abs() < 1e-14);
        // (cos 3t)'' = -9 cos 3t
        assert!((b.derivatives(x, 2)[5] + 9.0 * (3.0 * x).cos()).abs() < 1e-12);
    }

    #[test]
    fn trig_jet_derivatives_match_finite_differences() {
        let b = PolyBasis::trigonometric_on(5, -1.2, 2.0).unwrap();
        let x = 0.3;
        let hstep = 1e-4;
        let v0 = b.values(x - hstep);
        let v1 = b.values(x + hstep);
        let d = b.derivatives(x, 1);
        for i in 0..b.len() {
            let fd = (v1[i] - v0[i]) / (2.0 * hstep);
            assert!((fd - d[i]).abs() < 1e-5 * (1.0 + d[i].abs()), "{i}");
        }
        let d3 = b.derivatives(x, 3);
        let d2a = b.derivatives(x - hstep, 2);
        let d2b = b.derivatives(x + hstep, 2);
        for i in 0..b.len() {
            let fd = (d2b[i] - d2a[i]) / (2.0 * hstep);
            assert!((fd - d3[i]).abs() < 1e-4 * (1.0 + d3[i].abs()), "{i}");
        }
    }
}
