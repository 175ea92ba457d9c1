//! Equilibrium measures of compact sets: closed-form densities where known,
//! a collocation solver otherwise, endpoint limits and a potential check.

mod bands;
mod closed;
mod collocation;
mod intervals;

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numerics::quadrature::integrate_adaptive;
use crate::sets::{
    gamma_of, wrap_angle, ArcUnion, Circle, IntervalUnion, Lemniscate, PeriodicSet, SetDescription,
};

pub use bands::{Band, BandSystem, Geometry};
pub use closed::{density_arc, density_circle, density_lemniscate, lemniscate_level_points};
pub use intervals::{density_intervals, omega_limit, solve_xi, xi_residuals, EndpointData};

/// The set an equilibrium density lives on.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    Intervals(IntervalUnion),
    Arcs(ArcUnion),
    Circle(Circle),
    Lemniscate(Lemniscate),
}

/// A set that collocation can handle.
#[derive(Debug, Clone, PartialEq)]
pub enum BandSet {
    Intervals(IntervalUnion),
    Arcs(ArcUnion),
}

/// How the density values are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Collocation,
    /// Closed-form expression with caller-supplied ξ; used as a negative control.
    PrescribedXi,
}

/// Equilibrium density of a set with its mass and Frostman spread.
///
/// Densities are per unit length on the real line and per unit arc length on
/// curves. Immutable once built.
#[derive(Debug, Clone)]
pub struct EquilibriumDensity {
    support: Support,
    xi: Vec<f64>,
    method: Method,
    bands: Option<BandSystem>,
    mass: f64,
    frostman_spread: f64,
}

const DEFAULT_PROBES: usize = 16;

impl EquilibriumDensity {
    /// Closed-form density of a union of intervals.
    pub fn intervals(set: &IntervalUnion) -> Result<Self> {
        let xi = solve_xi(set)?;
        Self::from_xi(set, xi, Method::ClosedForm)
    }

    /// Closed-form expression with arbitrary numerator zeros. The result is
    /// generally not an equilibrium measure; mass and spread show how far off it is.
    pub fn intervals_with_xi(set: &IntervalUnion, xi: Vec<f64>) -> Result<Self> {
        if xi.len() + 1 != set.band_count() {
            return Err(Error::invalid(format!(
                "expected {} ξ values, got {}",
                set.band_count() - 1,
                xi.len()
            )));
        }
        Self::from_xi(set, xi, Method::PrescribedXi)
    }

    fn from_xi(set: &IntervalUnion, xi: Vec<f64>, method: Method) -> Result<Self> {
        let e = set.endpoints();
        let mut list = Vec::new();
        for k in 0..set.band_count() {
            let coeffs = bands::interpolate(|s| intervals::band_weight(e, &xi, k, s));
            list.push(Band {
                lo: e[2 * k],
                hi: e[2 * k + 1],
                coeffs,
            });
        }
        let mut mass = 0.0;
        for k in 0..set.band_count() {
            mass += band_mass(|s| intervals::band_weight(e, &xi, k, s))?;
        }
        Self::finish(
            Support::Intervals(set.clone()),
            xi,
            method,
            BandSystem {
                geometry: Geometry::Line,
                bands: list,
            },
            mass,
        )
    }

    /// Density of a union of arcs: closed form for one arc, collocation otherwise.
    pub fn arcs(set: &ArcUnion) -> Result<Self> {
        if set.arc_count() == 1 {
            let (a, b) = (set.angles()[0], set.angles()[1]);
            let beta = 0.5 * (b - a);
            let coeffs = bands::interpolate(|s| closed::arc_band_weight(beta, s));
            let mass = band_mass(|s| closed::arc_band_weight(beta, s))?;
            Self::finish(
                Support::Arcs(set.clone()),
                Vec::new(),
                Method::ClosedForm,
                BandSystem {
                    geometry: Geometry::UnitCircle,
                    bands: vec![Band {
                        lo: a,
                        hi: b,
                        coeffs,
                    }],
                },
                mass,
            )
        } else {
            collocation_density(&BandSet::Arcs(set.clone()))
        }
    }

    /// Density of Γ_E for a 2π-periodic set E.
    pub fn periodic(set: &PeriodicSet) -> Result<Self> {
        Self::arcs(&gamma_of(set))
    }

    pub fn circle(circle: &Circle) -> Self {
        EquilibriumDensity {
            support: Support::Circle(*circle),
            xi: Vec::new(),
            method: Method::ClosedForm,
            bands: None,
            mass: 1.0,
            frostman_spread: 0.0,
        }
    }

    pub fn lemniscate(lemniscate: &Lemniscate) -> Self {
        EquilibriumDensity {
            support: Support::Lemniscate(lemniscate.clone()),
            xi: Vec::new(),
            method: Method::ClosedForm,
            bands: None,
            mass: 1.0,
            frostman_spread: 0.0,
        }
    }

    pub fn from_description(set: &SetDescription) -> Result<Self> {
        match set {
            SetDescription::Intervals(s) => Self::intervals(s),
            SetDescription::Arcs(s) => Self::arcs(s),
            SetDescription::Circle(c) => Ok(Self::circle(c)),
            SetDescription::Lemniscate(l) => Ok(Self::lemniscate(l)),
            SetDescription::Periodic(p) => Self::periodic(p),
        }
    }

    fn finish(
        support: Support,
        xi: Vec<f64>,
        method: Method,
        bands: BandSystem,
        mass: f64,
    ) -> Result<Self> {
        let mut d = EquilibriumDensity {
            support,
            xi,
            method,
            bands: Some(bands),
            mass,
            frostman_spread: f64::NAN,
        };
        d.frostman_spread = frostman_check(&d, DEFAULT_PROBES)?;
        Ok(d)
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn frostman_spread(&self) -> f64 {
        self.frostman_spread
    }

    /// Per-band Chebyshev representation, absent for circles and lemniscates.
    pub fn band_system(&self) -> Option<&BandSystem> {
        self.bands.as_ref()
    }

    pub fn endpoint_count(&self) -> usize {
        match &self.support {
            Support::Intervals(s) => s.endpoints().len(),
            Support::Arcs(a) => a.angles().len(),
            _ => 0,
        }
    }

    /// Density at a real parameter: the point itself for intervals, the
    /// angle for arcs and circles (measured from the center for circles).
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        match &self.support {
            Support::Intervals(set) => match self.method {
                Method::ClosedForm | Method::PrescribedXi => density_intervals(set, &self.xi, t),
                Method::Collocation => self.band_density(t),
            },
            Support::Arcs(set) => {
                let t = wrap_angle(t);
                if self.method == Method::ClosedForm {
                    let (a, b) = (set.angles()[0], set.angles()[1]);
                    let beta = 0.5 * (b - a);
                    let u = t - 0.5 * (a + b);
                    if u.abs() < beta {
                        return Ok(closed::arc_formula(beta, u));
                    }
                    return Err(Error::domain(format!(
                        "angle {t} is not interior to the arc"
                    )));
                }
                self.band_density(t)
            }
            Support::Circle(c) => Ok(density_circle(c)),
            Support::Lemniscate(_) => Err(Error::invalid(
                "a lemniscate has no real parameterization; evaluate at a complex point",
            )),
        }
    }

    /// Density at a point of the plane lying on the set.
    pub fn evaluate_complex(&self, z: Complex64) -> Result<f64> {
        const ON: f64 = 1e-10;
        match &self.support {
            Support::Intervals(_) => {
                if z.im.abs() > ON {
                    return Err(Error::domain(format!("{z} is not on the real line")));
                }
                self.evaluate(z.re)
            }
            Support::Arcs(_) => {
                if (z.norm() - 1.0).abs() > ON {
                    return Err(Error::domain(format!("{z} is not on the unit circle")));
                }
                self.evaluate(z.arg())
            }
            Support::Circle(c) => {
                if !c.contains(z, ON) {
                    return Err(Error::domain(format!("{z} is not on the circle")));
                }
                Ok(density_circle(c))
            }
            Support::Lemniscate(l) => density_lemniscate(l, z),
        }
    }

    fn band_density(&self, t: f64) -> Result<f64> {
        let sys = self.bands.as_ref().expect("band representation present");
        match sys.band_containing(t) {
            Some((k, s)) if s.abs() < 1.0 => {
                let b = &sys.bands[k];
                Ok(b.weight(s) / (b.half_width() * (1.0 - s * s).sqrt()))
            }
            _ => Err(Error::domain(format!(
                "{t} is not an interior point of the set"
            ))),
        }
    }

    /// Logarithmic potential `∫ log(1/|x - t|) dμ(t)` at a parameter value.
    pub fn potential(&self, x: f64) -> Result<f64> {
        match &self.bands {
            Some(sys) => Ok(sys.potential(x)),
            None => Err(Error::invalid(
                "potential is only available for interval and arc sets",
            )),
        }
    }

    /// Ω at endpoint `j`: closed form for intervals, extrapolation otherwise.
    pub fn omega_limit(&self, j: usize) -> Result<EndpointData> {
        match (&self.support, self.method) {
            (Support::Intervals(set), Method::ClosedForm | Method::PrescribedXi) => {
                omega_limit(set, &self.xi, j)
            }
            (Support::Intervals(_), Method::Collocation) | (Support::Arcs(_), _) => {
                omega_limit_arc(self, j)
            }
            _ => Err(Error::invalid(format!(
                "a {} has no endpoints",
                match self.support {
                    Support::Circle(_) => "circle",
                    _ => "lemniscate",
                }
            ))),
        }
    }
}

/// `∫_0^π f(cos θ) dθ` with doubling Gauss-Legendre: the mass of one band.
fn band_mass<F: Fn(f64) -> f64>(f: F) -> Result<f64> {
    integrate_adaptive(
        |theta| f(theta.cos()),
        0.0,
        PI,
        64,
        Tolerances::DEFAULT.quadrature_doubling,
    )
}

/// Equilibrium density computed purely from the Frostman condition.
pub fn collocation_density(set: &BandSet) -> Result<EquilibriumDensity> {
    collocation_density_with_degree(set, collocation::default_degree())
}

pub fn collocation_density_with_degree(set: &BandSet, degree: usize) -> Result<EquilibriumDensity> {
    let (geometry, spans, support): (Geometry, Vec<(f64, f64)>, Support) = match set {
        BandSet::Intervals(s) => (
            Geometry::Line,
            s.bands().collect(),
            Support::Intervals(s.clone()),
        ),
        BandSet::Arcs(a) => (
            Geometry::UnitCircle,
            a.arcs().collect(),
            Support::Arcs(a.clone()),
        ),
    };
    let sys = collocation::collocate(geometry, &spans, degree)?;
    let mut mass = 0.0;
    for b in &sys.bands {
        mass += band_mass(|s| b.weight(s))?;
    }
    EquilibriumDensity::finish(support, Vec::new(), Method::Collocation, sys, mass)
}

/// Spread `max - min` of the log-potential over `probes` equispaced points
/// per band, staying `1e-3` away from the endpoints.
pub fn frostman_check(density: &EquilibriumDensity, probes: usize) -> Result<f64> {
    if probes < 3 {
        return Err(Error::invalid("at least 3 probes per band are required"));
    }
    let Some(sys) = density.bands.as_ref() else {
        // rotation invariance (circle) and the level-set structure (lemniscate)
        // make the potential exactly constant
        return Ok(0.0);
    };
    let buffer = Tolerances::DEFAULT.endpoint_buffer;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for b in &sys.bands {
        let len = b.hi - b.lo;
        let pad = buffer.min(0.1 * len);
        for i in 0..probes {
            let x = b.lo + pad + (len - 2.0 * pad) * i as f64 / (probes - 1) as f64;
            let u = sys.potential(x);
            lo = lo.min(u);
            hi = hi.max(u);
        }
    }
    Ok(hi - lo)
}

/// Neville extrapolation to `h = 0`; returns the limit and the difference
/// between the two highest-order estimates.
pub fn richardson_limit(samples: &[(f64, f64)]) -> (f64, f64) {
    let n = samples.len();
    let mut p: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let mut prev_top = p[n - 1];
    for level in 1..n {
        prev_top = p[n - 1];
        for i in (level..n).rev() {
            let (hi, hj) = (samples[i - level].0, samples[i].0);
            p[i] = (hi * p[i] - hj * p[i - 1]) / (hi - hj);
        }
    }
    (p[n - 1], (p[n - 1] - prev_top).abs())
}

/// Ω at endpoint `j` from `√δ · ω` at chordal distances `δ = 10^{-2..-5}`,
/// extrapolated to `δ = 0`. Works for any density with a band representation.
pub fn omega_limit_arc(density: &EquilibriumDensity, j: usize) -> Result<EndpointData> {
    let count = density.endpoint_count();
    if count == 0 {
        return Err(Error::invalid("density has no endpoints"));
    }
    if j >= count {
        return Err(Error::invalid(format!(
            "endpoint index {j} out of range (set has {count} endpoints)"
        )));
    }
    let (a, inward, on_circle, band_len) = match &density.support {
        Support::Intervals(s) => {
            let e = s.endpoints();
            (
                e[j],
                if j.is_multiple_of(2) { 1.0 } else { -1.0 },
                false,
                e[j | 1] - e[j & !1],
            )
        }
        Support::Arcs(s) => {
            let e = s.angles();
            (
                e[j],
                if j.is_multiple_of(2) { 1.0 } else { -1.0 },
                true,
                e[j | 1] - e[j & !1],
            )
        }
        _ => unreachable!("endpoint_count is zero for closed curves"),
    };
    let mut samples = Vec::new();
    for p in 2..=5 {
        let delta = 10f64.powi(-p);
        let step = if on_circle {
            2.0 * (0.5 * delta).asin()
        } else {
            delta
        };
        if step >= band_len {
            continue;
        }
        let w = density.evaluate(a + inward * step)?;
        samples.push((delta, delta.sqrt() * w));
    }
    if samples.len() < 2 {
        return Err(Error::numeric("band too short for endpoint extrapolation"));
    }
    let (omega, err) = richardson_limit(&samples);
    if !(err < Tolerances::DEFAULT.extrapolation) || !omega.is_finite() {
        return Err(Error::numeric(format!(
            "endpoint extrapolation did not converge (error estimate {err:.3e})"
        )));
    }
    Ok(EndpointData {
        index: j,
        omega,
        band: j / 2,
        error_estimate: err,
    })
}

/// Closed-form Ω of the single arc `[-β, β]`.
pub fn arc_omega_closed_form(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < PI) {
        return Err(Error::invalid(format!(
            "arc half-angle must lie in (0, π), got {beta}"
        )));
    }
    Ok(closed::arc_omega(beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_recovers_polynomial_limit() {
        let s: Vec<(f64, f64)> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&h| (h, 3.0 + 2.0 * h - h * h))
            .collect();
        let (v, _) = richardson_limit(&s);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_interval_basics() {
        let d =
            EquilibriumDensity::intervals(&IntervalUnion::interval(-1.0, 1.0).unwrap()).unwrap();
        assert!((d.mass() - 1.0).abs() < 1e-12);
        assert!(d.frostman_spread() < 1e-10);
        assert!((d.potential(0.3).unwrap() - 2f64.ln()).abs() < 1e-12);
    }
}
