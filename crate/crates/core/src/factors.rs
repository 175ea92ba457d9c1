//! Sharp Bernstein, Markov and L² constants expressed through the
//! equilibrium density and its endpoint limits Ω_j.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::equilibrium::{density_intervals, omega_limit, solve_xi, EquilibriumDensity, Support};
use crate::error::{Error, Result};
use crate::numerics::bessel_smallest_zero;
use crate::sets::{gamma_of, locate, wrap_angle, ArcUnion, IntervalUnion, Location, PeriodicSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKind {
    BernsteinAlg,
    BernsteinTrig,
    BernsteinCircleSubset,
    RieszCurve,
    MarkovLocal,
    MarkovGlobal,
    MarkovTrig,
    MarkovArcEndpoint,
    HigherMarkov,
    HigherBernstein,
    L2Markov,
    L2MarkovWeighted,
    L2BernsteinJacobi,
    VidenskiiPointwise,
    VidenskiiMarkov,
    VaMarkov,
}

/// A constant `value` multiplying `n^degree_power · ‖P‖`.
///
/// `asymptotic` marks constants that only hold up to a `(1 + o(1))` factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorReport {
    pub kind: FactorKind,
    pub value: f64,
    pub degree_power: u32,
    pub asymptotic: bool,
}

impl FactorReport {
    pub fn new(kind: FactorKind, value: f64, degree_power: u32, asymptotic: bool) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::numeric(format!(
                "{kind:?} factor is not a positive finite number: {value}"
            )));
        }
        Ok(FactorReport {
            kind,
            value,
            degree_power,
            asymptotic,
        })
    }

    /// `value · n^degree_power`.
    pub fn scaled(&self, n: usize) -> f64 {
        self.value * (n as f64).powi(self.degree_power as i32)
    }
}

/// Generalized Jacobi weight `h(t) ∏ |t - a_i|^{α_i}`, with `h` a polynomial
/// (ascending coefficients; empty means `h ≡ 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weight {
    pub exponents: Vec<f64>,
    #[serde(default)]
    pub h: Vec<f64>,
}

impl Weight {
    pub fn new(exponents: Vec<f64>) -> Result<Self> {
        let w = Weight {
            exponents,
            h: Vec::new(),
        };
        w.check_exponents()?;
        Ok(w)
    }

    pub fn unweighted(set: &IntervalUnion) -> Self {
        Weight {
            exponents: vec![0.0; set.endpoints().len()],
            h: Vec::new(),
        }
    }

    /// `(1 + x)^α (1 - x)^β` on [-1, 1]: α belongs to the left endpoint.
    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(vec![alpha, beta])
    }

    pub fn with_h(mut self, coeffs: Vec<f64>) -> Self {
        self.h = coeffs;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: Weight =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("weight JSON: {e}")))?;
        w.check_exponents()?;
        Ok(w)
    }

    fn check_exponents(&self) -> Result<()> {
        if let Some(a) = self
            .exponents
            .iter()
            .find(|a| !(**a > -1.0) || !a.is_finite())
        {
            return Err(Error::invalid(format!(
                "weight exponents must exceed -1, got {a}"
            )));
        }
        Ok(())
    }

    pub fn h_at(&self, t: f64) -> f64 {
        if self.h.is_empty() {
            1.0
        } else {
            self.h.iter().rev().fold(0.0, |acc, c| acc * t + c)
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0.0) && self.has_unit_h()
    }

    /// `h ≡ 1`, i.e. a pure Jacobi-type weight.
    pub fn has_unit_h(&self) -> bool {
        self.h.is_empty() || self.h == [1.0]
    }

    /// Checks exponents against the set and spot-checks `h > 0` on a grid.
    pub fn validate(&self, set: &IntervalUnion) -> Result<()> {
        self.check_exponents()?;
        if self.exponents.len() != set.endpoints().len() {
            return Err(Error::invalid(format!(
                "weight has {} exponents but the set has {} endpoints",
                self.exponents.len(),
                set.endpoints().len()
            )));
        }
        for (a, b) in set.bands() {
            for i in 0..=200 {
                let t = a + (b - a) * i as f64 / 200.0;
                let v = self.h_at(t);
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::invalid(format!(
                        "weight factor h is not positive at t = {t}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, set: &IntervalUnion, t: f64) -> f64 {
        let p: f64 = set
            .endpoints()
            .iter()
            .zip(&self.exponents)
            .map(|(a, e)| (t - a).abs().powf(*e))
            .product();
        self.h_at(t) * p
    }
}

/// `(2k-1)!! = 1·3·…·(2k-1)`.
pub fn double_factorial_odd(k: u32) -> f64 {
    (1..=k).map(|i| (2 * i - 1) as f64).product()
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("derivative order k must be at least 1"));
    }
    Ok(())
}

/// `π ω_E(x)` for interior points of a union of intervals.
pub fn bernstein_factor(set: &IntervalUnion, x: f64) -> Result<FactorReport> {
    if locate(set, x) != Location::Interior {
        return Err(Error::domain(format!(
            "x = {x} is not an interior point of the set"
        )));
    }
    let xi = solve_xi(set)?;
    let w = density_intervals(set, &xi, x)?;
    FactorReport::new(FactorKind::BernsteinAlg, PI * w, 1, false)
}

/// `2π ω_{Γ_E}(e^{iθ})` for a 2π-periodic set E.
pub fn bernstein_factor_trig(set: &PeriodicSet, theta: f64) -> Result<FactorReport> {
    let theta = wrap_angle(theta);
    if locate(set.base(), theta) != Location::Interior {
        return Err(Error::domain(format!(
            "θ = {theta} is not interior to the periodic set"
        )));
    }
    let d = EquilibriumDensity::periodic(set)?;
    FactorReport::new(
        FactorKind::BernsteinTrig,
        2.0 * PI * d.evaluate(theta)?,
        1,
        false,
    )
}

/// Closed-form Videnskii factor `cos(θ/2)/√(sin²(β/2) - sin²(θ/2))` on `[-β, β]`.
pub fn videnskii_factor(beta: f64, theta: f64) -> Result<FactorReport> {
    let w = crate::equilibrium::density_arc(beta, theta)?;
    FactorReport::new(FactorKind::VidenskiiPointwise, 2.0 * PI * w, 1, false)
}

/// Markov factor `2 cot(β/2)` for trigonometric polynomials on `[-β, β]`.
pub fn videnskii_markov(beta: f64) -> Result<FactorReport> {
    if !(beta > 0.0 && beta < PI) {
        return Err(Error::invalid(format!("β must lie in (0, π), got {beta}")));
    }
    FactorReport::new(
        FactorKind::VidenskiiMarkov,
        2.0 / (0.5 * beta).tan(),
        2,
        true,
    )
}

/// `(1 + 2π ω_A(e^{it}))/2` at an inner point `e^{it}` of a union of arcs.
pub fn bernstein_factor_circle_subset(set: &ArcUnion, t: f64) -> Result<FactorReport> {
    let t = wrap_angle(t);
    let inner = set.arcs().any(|(a, b)| a < t && t < b);
    if !inner {
        return Err(Error::domain(format!(
            "angle {t} is not an inner point of an arc; endpoint factors are not defined"
        )));
    }
    let d = EquilibriumDensity::arcs(set)?;
    let w = d.evaluate(t)?;
    FactorReport::new(
        FactorKind::BernsteinCircleSubset,
        0.5 * (1.0 + 2.0 * PI * w),
        1,
        false,
    )
}

/// `2π ω_S(z)` on a circle (exact) or lemniscate (asymptotic).
pub fn riesz_factor(support: &Support, z: Complex64) -> Result<FactorReport> {
    let (density, exact) = match support {
        Support::Circle(c) => (EquilibriumDensity::circle(c), true),
        Support::Lemniscate(l) => (EquilibriumDensity::lemniscate(l), false),
        _ => {
            return Err(Error::invalid(
                "the Riesz factor needs a circle or a lemniscate",
            ))
        }
    };
    let w = density.evaluate_complex(z)?;
    FactorReport::new(FactorKind::RieszCurve, 2.0 * PI * w, 1, !exact)
}

/// `M_j = 2π² Ω_j²` near endpoint `j` of a union of intervals.
pub fn markov_local(set: &IntervalUnion, j: usize) -> Result<FactorReport> {
    let xi = solve_xi(set)?;
    let o = omega_limit(set, &xi, j)?.omega;
    FactorReport::new(FactorKind::MarkovLocal, 2.0 * PI * PI * o * o, 2, true)
}

/// `max_j M_j`.
pub fn markov_global(set: &IntervalUnion) -> Result<FactorReport> {
    let xi = solve_xi(set)?;
    let mut best = 0.0f64;
    for j in 0..set.endpoints().len() {
        let o = omega_limit(set, &xi, j)?.omega;
        best = best.max(o * o);
    }
    FactorReport::new(FactorKind::MarkovGlobal, 2.0 * PI * PI * best, 2, true)
}

/// `2π² Ω_j²` near endpoint `j` of a union of arcs.
pub fn markov_local_arc(set: &ArcUnion, j: usize) -> Result<FactorReport> {
    let d = EquilibriumDensity::arcs(set)?;
    let o = d.omega_limit(j)?.omega;
    FactorReport::new(FactorKind::MarkovLocal, 2.0 * PI * PI * o * o, 2, true)
}

/// `8π² (Ω_j^{Γ_E})²` for trigonometric polynomials near endpoint `j`.
pub fn markov_trig(set: &PeriodicSet, j: usize) -> Result<FactorReport> {
    let d = EquilibriumDensity::arcs(&gamma_of(set))?;
    let o = d.omega_limit(j)?.omega;
    FactorReport::new(FactorKind::MarkovTrig, 8.0 * PI * PI * o * o, 2, true)
}

fn higher_from_omega(kind: FactorKind, omega: f64, k: u32) -> Result<FactorReport> {
    check_k(k)?;
    let base = 2.0 * PI * PI * omega * omega;
    FactorReport::new(
        kind,
        base.powi(k as i32) / double_factorial_odd(k),
        2 * k,
        true,
    )
}

/// `2^k π^{2k} Ω_j^{2k} / (2k-1)!!` for the k-th derivative near endpoint `j`.
pub fn markov_higher(set: &IntervalUnion, j: usize, k: u32) -> Result<FactorReport> {
    let xi = solve_xi(set)?;
    let o = omega_limit(set, &xi, j)?.omega;
    higher_from_omega(FactorKind::HigherMarkov, o, k)
}

/// Higher Markov factor at endpoint `j` of an arc set, or the global
/// variant over all endpoints when `endpoint` is `None`.
pub fn markov_arc_endpoint(
    support: &Support,
    endpoint: Option<usize>,
    k: u32,
) -> Result<FactorReport> {
    let d = match support {
        Support::Arcs(a) => EquilibriumDensity::arcs(a)?,
        Support::Intervals(s) => EquilibriumDensity::intervals(s)?,
        Support::Circle(_) | Support::Lemniscate(_) => {
            return Err(Error::invalid("a closed curve has no endpoints"));
        }
    };
    let omega = match endpoint {
        Some(j) => d.omega_limit(j)?.omega,
        None => {
            let mut best = 0.0f64;
            for j in 0..d.endpoint_count() {
                best = best.max(d.omega_limit(j)?.omega);
            }
            best
        }
    };
    higher_from_omega(FactorKind::MarkovArcEndpoint, omega, k)
}

/// `∏_{i<k} (n² - i²) / (2k-1)!!`, the exact bound for `‖P^{(k)}‖` on [-1, 1].
pub fn va_markov_exact(n: u32, k: u32) -> Result<f64> {
    check_k(k)?;
    if k > n {
        return Err(Error::invalid(format!(
            "derivative order {k} exceeds the degree {n}"
        )));
    }
    let n2 = (n as f64).powi(2);
    let num: f64 = (0..k).map(|i| n2 - (i as f64).powi(2)).product();
    Ok(num / double_factorial_odd(k))
}

/// k-th power of a first-order Bernstein-type factor.
pub fn bernstein_higher(first: &FactorReport, k: u32) -> Result<FactorReport> {
    check_k(k)?;
    let asymptotic = match first.kind {
        FactorKind::BernsteinTrig | FactorKind::VidenskiiPointwise => false,
        FactorKind::BernsteinAlg | FactorKind::BernsteinCircleSubset => true,
        FactorKind::RieszCurve => first.asymptotic,
        other => {
            return Err(Error::invalid(format!(
                "{other:?} is not a first-order Bernstein factor"
            )));
        }
    };
    FactorReport::new(
        FactorKind::HigherBernstein,
        first.value.powi(k as i32),
        k,
        asymptotic,
    )
}

/// `max_j π² Ω_j² / ν_{α_j}`. Only the exponents of the weight matter.
pub fn l2_markov_constant(set: &IntervalUnion, weight: &Weight) -> Result<FactorReport> {
    weight.validate(set)?;
    let xi = solve_xi(set)?;
    let mut best = 0.0f64;
    for (j, &alpha) in weight.exponents.iter().enumerate() {
        let o = omega_limit(set, &xi, j)?.omega;
        let nu = bessel_smallest_zero(alpha)?.zero;
        best = best.max(PI * PI * o * o / nu);
    }
    let kind = if weight.is_trivial() {
        FactorKind::L2Markov
    } else {
        FactorKind::L2MarkovWeighted
    };
    FactorReport::new(kind, best, 2, true)
}

/// `√(n(n + 1 + α + β))`, exact for the weighted gradient inequality.
pub fn l2_bernstein_jacobi(n: u32, alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::invalid(format!(
            "Jacobi exponents must exceed -1, got {alpha}, {beta}"
        )));
    }
    let n = n as f64;
    Ok((n * (n + 1.0 + alpha + beta)).sqrt())
}
