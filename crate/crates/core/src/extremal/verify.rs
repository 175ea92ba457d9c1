//! Randomized checks of the polynomial inequalities: both sides are
//! evaluated for seeded random polynomials and the worst ratio
//! `LHS / RHS` is reported. Exact inequalities flag ratios above
//! `1 + 1e-9` as violations; asymptotic ones only report the ratio.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::config::Tolerances;
use crate::equilibrium::{lemniscate_level_points, EquilibriumDensity};
use crate::error::{Error, Result};
use crate::factors::{
    l2_bernstein_jacobi, l2_markov_constant, markov_local, markov_trig, va_markov_exact,
    FactorKind, Weight,
};
use crate::numerics::chebyshev;
use crate::numerics::linalg::dot;
use crate::sets::{
    nearest_endpoint_region_arcs, nearest_endpoint_region_intervals, ArcUnion, Circle,
    IntervalUnion, Lemniscate, PeriodicSet, SetDescription,
};

use super::basis::PolyBasis;
use super::l2::{pencil, L2Mode};
use super::lp::sup_norm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inequality {
    /// `‖T'‖ ≤ n‖T‖` for trigonometric polynomials over a full period.
    TrigBernstein,
    /// `|P'(x)| ≤ n‖P‖/√(1-x²)` on [-1, 1].
    BernsteinInterval,
    /// `‖P'‖ ≤ n²‖P‖` on [-1, 1].
    MarkovInterval,
    /// `(P'√(1-x²))² + n²P² ≤ n²‖P‖²` on [-1, 1].
    Szego,
    /// `(P'/(πω))² + n²P² ≤ n²‖P‖²` on a union of intervals.
    BernsteinSzego,
    /// `‖P'‖ ≤ n‖P‖/r` on a circle of radius r.
    Riesz,
    /// `|T'(θ)| ≤ n·2πω_Γ(θ)‖T‖_E` on a periodic set.
    Videnskii,
    /// `|P'(x)| ≤ n·πω(x)‖P‖_E` on a union of intervals.
    BernsteinAlg,
    /// `‖P^{(k)}‖ ≤ ∏(n²-i²)/(2k-1)!! ‖P‖` on [-1, 1].
    VaMarkov,
    /// `|P'(z)| ≤ (n/2)(1 + 2πω(z))‖P‖` on a union of arcs.
    CircleSubset,
    /// Weighted `L²` gradient inequality for Jacobi weights.
    GradientJacobi,
    /// Local Markov near endpoints of a union of intervals (asymptotic).
    MarkovLocal,
    /// Markov near endpoints of a periodic set (asymptotic).
    MarkovTrig,
    /// `|P'(z)| ≤ n·2πω(z)‖P‖` on a lemniscate (asymptotic).
    RieszCurve,
    /// `L²` Markov with the Bessel-zero constant (asymptotic).
    L2Markov,
}

impl Inequality {
    pub const ALL: [Inequality; 15] = [
        Inequality::TrigBernstein,
        Inequality::BernsteinInterval,
        Inequality::MarkovInterval,
        Inequality::Szego,
        Inequality::BernsteinSzego,
        Inequality::Riesz,
        Inequality::Videnskii,
        Inequality::BernsteinAlg,
        Inequality::VaMarkov,
        Inequality::CircleSubset,
        Inequality::GradientJacobi,
        Inequality::MarkovLocal,
        Inequality::MarkovTrig,
        Inequality::RieszCurve,
        Inequality::L2Markov,
    ];

    /// Holds for every degree, not just up to `1 + o(1)`.
    pub fn is_exact(self) -> bool {
        !matches!(
            self,
            Inequality::MarkovLocal
                | Inequality::MarkovTrig
                | Inequality::RieszCurve
                | Inequality::L2Markov
        )
    }

    pub fn factor_kind(self) -> Option<FactorKind> {
        Some(match self {
            Inequality::BernsteinAlg | Inequality::BernsteinInterval => FactorKind::BernsteinAlg,
            Inequality::Videnskii => FactorKind::BernsteinTrig,
            Inequality::CircleSubset => FactorKind::BernsteinCircleSubset,
            Inequality::Riesz | Inequality::RieszCurve => FactorKind::RieszCurve,
            Inequality::MarkovLocal | Inequality::MarkovInterval => FactorKind::MarkovLocal,
            Inequality::MarkovTrig => FactorKind::MarkovTrig,
            Inequality::VaMarkov => FactorKind::VaMarkov,
            Inequality::GradientJacobi => FactorKind::L2BernsteinJacobi,
            Inequality::L2Markov => FactorKind::L2Markov,
            Inequality::TrigBernstein | Inequality::Szego | Inequality::BernsteinSzego => {
                return None
            }
        })
    }

    /// The set the inequality is checked on when none is given.
    pub fn default_set(self) -> SetDescription {
        let unit = || IntervalUnion::interval(-1.0, 1.0).expect("valid");
        let two = || IntervalUnion::new(vec![-1.0, -0.3, 0.2, 1.0]).expect("valid");
        match self {
            Inequality::BernsteinInterval
            | Inequality::MarkovInterval
            | Inequality::Szego
            | Inequality::VaMarkov
            | Inequality::GradientJacobi
            | Inequality::L2Markov => SetDescription::Intervals(unit()),
            Inequality::BernsteinSzego | Inequality::BernsteinAlg | Inequality::MarkovLocal => {
                SetDescription::Intervals(two())
            }
            Inequality::TrigBernstein | Inequality::Riesz => SetDescription::Circle(Circle::unit()),
            Inequality::Videnskii | Inequality::MarkovTrig => SetDescription::Periodic(
                PeriodicSet::new(vec![-2.5, -0.4, 0.3, 2.0]).expect("valid"),
            ),
            Inequality::CircleSubset => {
                SetDescription::Arcs(ArcUnion::new(vec![-2.5, -0.4, 0.3, 2.0]).expect("valid"))
            }
            Inequality::RieszCurve => SetDescription::Lemniscate(
                Lemniscate::new(vec![
                    Complex64::new(-1.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                ])
                .expect("valid"),
            ),
        }
    }

    /// Whether the inequality can be checked on `set`.
    pub fn accepts(self, set: &SetDescription) -> bool {
        match (self, set) {
            (Inequality::TrigBernstein | Inequality::Riesz, SetDescription::Circle(_)) => true,
            (Inequality::Videnskii | Inequality::MarkovTrig, SetDescription::Periodic(_)) => true,
            (Inequality::CircleSubset, SetDescription::Arcs(_)) => true,
            (Inequality::RieszCurve, SetDescription::Lemniscate(_)) => true,
            (
                Inequality::BernsteinInterval
                | Inequality::MarkovInterval
                | Inequality::Szego
                | Inequality::VaMarkov
                | Inequality::GradientJacobi,
                SetDescription::Intervals(s),
            ) => s.endpoints() == [-1.0, 1.0],
            (
                Inequality::BernsteinSzego
                | Inequality::BernsteinAlg
                | Inequality::MarkovLocal
                | Inequality::L2Markov,
                SetDescription::Intervals(_),
            ) => true,
            _ => false,
        }
    }

    /// The suite run by default on the interval [-1, 1].
    pub fn interval_suite() -> Vec<Inequality> {
        vec![
            Inequality::BernsteinInterval,
            Inequality::MarkovInterval,
            Inequality::Szego,
            Inequality::BernsteinAlg,
            Inequality::BernsteinSzego,
            Inequality::VaMarkov,
            Inequality::GradientJacobi,
            Inequality::MarkovLocal,
            Inequality::L2Markov,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub max_degree: usize,
    pub probes_per_band: usize,
    /// Multiplies every equilibrium density used on the right-hand side.
    /// Anything but 1 deliberately breaks the inequalities; used to check
    /// that violations are detected.
    pub density_scale: f64,
    /// Weight for the L² inequalities; `None` means Jacobi (0.5, -0.3) for
    /// the gradient inequality and the unit weight otherwise.
    pub weight: Option<Weight>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 1000,
            seed: 0,
            max_degree: 15,
            probes_per_band: 64,
            density_scale: 1.0,
            weight: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub trial: usize,
    pub degree: usize,
    pub ratio: f64,
    /// Real point (or angle) where the worst ratio occurred.
    pub point: f64,
    /// Coefficients of the offending polynomial; complex ones interleaved as re, im.
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessCheck {
    pub description: String,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub inequality: Inequality,
    pub exact: bool,
    pub set: serde_json::Value,
    pub seed: u64,
    pub trials: usize,
    pub worst_ratio: f64,
    pub worst: Option<Violation>,
    pub violation_count: usize,
    /// Up to 10 violations, in trial order.
    pub violations: Vec<Violation>,
    pub witness: Option<WitnessCheck>,
}

/// Per-trial outcome: worst ratio, where it occurred and the polynomial.
struct Trial {
    degree: usize,
    ratio: f64,
    point: f64,
    coefficients: Vec<f64>,
}

fn probe_points(bands: &[(f64, f64)], per: usize) -> Vec<f64> {
    let buffer = Tolerances::DEFAULT.endpoint_buffer;
    let mut out = Vec::with_capacity(bands.len() * per);
    for &(a, b) in bands {
        let pad = buffer.min(0.1 * (b - a));
        for i in 0..per {
            out.push(a + pad + (b - a - 2.0 * pad) * i as f64 / (per - 1) as f64);
        }
    }
    out
}

fn scan_grid(n: usize) -> usize {
    (24 * n).max(96)
}

/// Maximum of `ratio(x)` over probes, with its location.
fn worst_over<F: Fn(f64) -> f64>(probes: &[f64], ratio: F) -> (f64, f64) {
    probes
        .iter()
        .map(|&x| (ratio(x), x))
        .fold(
            (f64::NEG_INFINITY, f64::NAN),
            |b, c| if c.0 > b.0 { c } else { b },
        )
}

/// Random polynomials in complex monomials `Σ a_j ((z - c)/r)^j`.
struct ComplexPoly {
    coeffs: Vec<Complex64>,
    center: Complex64,
    radius: f64,
}

impl ComplexPoly {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let w = (z - self.center) / self.radius;
        let mut p = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            d = d * w + p;
            p = p * w + c;
        }
        (p, d / self.radius)
    }

    fn flat(&self) -> Vec<f64> {
        self.coeffs.iter().flat_map(|c| [c.re, c.im]).collect()
    }
}

struct Context {
    inequality: Inequality,
    set: SetDescription,
    options: VerifyOptions,
    density: Option<EquilibriumDensity>,
    /// Markov factor per endpoint, or the L² constant, computed once.
    constants: Vec<f64>,
}

impl Context {
    fn scale(&self) -> f64 {
        self.options.density_scale
    }

    fn omega(&self, t: f64) -> f64 {
        self.density
            .as_ref()
            .and_then(|d| d.evaluate(t).ok())
            .unwrap_or(f64::NAN)
            * self.scale()
    }

    fn intervals(&self) -> Result<&IntervalUnion> {
        match &self.set {
            SetDescription::Intervals(s) => Ok(s),
            other => Err(Error::invalid(format!(
                "{:?} needs a union of intervals, got {}",
                self.inequality,
                other.kind_name()
            ))),
        }
    }

    fn unit_interval(&self) -> Result<()> {
        let s = self.intervals()?;
        if s.endpoints() != [-1.0, 1.0] {
            return Err(Error::invalid(format!(
                "{:?} is stated on [-1, 1]",
                self.inequality
            )));
        }
        Ok(())
    }

    fn run_trial(&self, trial: usize) -> Result<Trial> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.options.seed);
        rng.set_stream(trial as u64);
        let n = rng.random_range(1..=self.options.max_degree);
        let per = self.options.probes_per_band;
        let mut normal = move || -> f64 { rng.sample(StandardNormal) };
        match self.inequality {
            Inequality::TrigBernstein
            | Inequality::Riesz
            | Inequality::CircleSubset
            | Inequality::RieszCurve => self.complex_trial(n, &mut normal),
            Inequality::Videnskii | Inequality::MarkovTrig => {
                let SetDescription::Periodic(p) = &self.set else {
                    return Err(Error::invalid(format!(
                        "{:?} needs a periodic set",
                        self.inequality
                    )));
                };
                let basis = PolyBasis::trigonometric_for(p, n)?;
                let c: Vec<f64> = (0..basis.len()).map(|_| normal()).collect();
                let bands: Vec<(f64, f64)> = p.base().bands().collect();
                let (norm, _) = sup_norm(&|x| basis.eval(&c, x), &bands, scan_grid(n));
                let nf = n as f64;
                let (ratio, point) = if self.inequality == Inequality::Videnskii {
                    worst_over(&probe_points(&bands, per), |x| {
                        basis.eval_derivative(&c, x, 1).abs()
                            / (nf * 2.0 * PI * self.omega(x) * norm)
                    })
                } else {
                    let arcs = crate::sets::gamma_of(p);
                    let mut best = (f64::NEG_INFINITY, f64::NAN);
                    for (j, &m) in self.constants.iter().enumerate() {
                        let region = nearest_endpoint_region_arcs(&arcs, j)?;
                        let (d, x) =
                            sup_norm(&|x| basis.eval_derivative(&c, x, 1), &region, scan_grid(n));
                        let r = d / (m * nf * nf * norm);
                        if r > best.0 {
                            best = (r, x);
                        }
                    }
                    best
                };
                Ok(Trial {
                    degree: n,
                    ratio,
                    point,
                    coefficients: c,
                })
            }
            _ => self.real_trial(n, &mut normal),
        }
    }

    fn real_trial(&self, n: usize, normal: &mut dyn FnMut() -> f64) -> Result<Trial> {
        let set = self.intervals()?;
        let basis = PolyBasis::algebraic_for(set, n)?;
        let c: Vec<f64> = (0..basis.len()).map(|_| normal()).collect();
        let bands: Vec<(f64, f64)> = set.bands().collect();
        let per = self.options.probes_per_band;
        let probes = probe_points(&bands, per);
        let p = |x: f64| basis.eval(&c, x);
        let dp = |x: f64| basis.eval_derivative(&c, x, 1);
        let (norm, _) = sup_norm(&p, &bands, scan_grid(n));
        let nf = n as f64;
        let (ratio, point) = match self.inequality {
            Inequality::BernsteinInterval => {
                self.unit_interval()?;
                worst_over(&probes, |x| {
                    dp(x).abs() * (1.0 - x * x).sqrt() / (nf * norm)
                })
            }
            Inequality::BernsteinAlg => {
                worst_over(&probes, |x| dp(x).abs() / (nf * PI * self.omega(x) * norm))
            }
            Inequality::Szego => {
                self.unit_interval()?;
                worst_over(&probes, |x| {
                    let a = dp(x) * (1.0 - x * x).sqrt();
                    (a * a + nf * nf * p(x).powi(2)) / (nf * nf * norm * norm)
                })
            }
            Inequality::BernsteinSzego => worst_over(&probes, |x| {
                let a = dp(x) / (PI * self.omega(x));
                (a * a + nf * nf * p(x).powi(2)) / (nf * nf * norm * norm)
            }),
            Inequality::MarkovInterval => {
                self.unit_interval()?;
                let (d, x) = sup_norm(&dp, &bands, scan_grid(n));
                (d / (nf * nf * norm), x)
            }
            Inequality::VaMarkov => {
                self.unit_interval()?;
                // derivative order cycles with the degree so each k is exercised
                let k = 1 + n % n.min(3);
                let (d, x) = sup_norm(&|x| basis.eval_derivative(&c, x, k), &bands, scan_grid(n));
                (d / (va_markov_exact(n as u32, k as u32)? * norm), x)
            }
            Inequality::MarkovLocal => {
                let mut best = (f64::NEG_INFINITY, f64::NAN);
                for (j, &m) in self.constants.iter().enumerate() {
                    let region = nearest_endpoint_region_intervals(set, j)?;
                    let (d, x) = sup_norm(&dp, &region, scan_grid(n));
                    let r = d / (m * nf * nf * norm);
                    if r > best.0 {
                        best = (r, x);
                    }
                }
                best
            }
            Inequality::GradientJacobi => {
                self.unit_interval()?;
                let w = self
                    .options
                    .weight
                    .clone()
                    .unwrap_or(Weight::jacobi(0.5, -0.3)?);
                let ratio = l2_pair_ratio(set, &w, &basis, &c, L2Mode::GradientBernstein)?;
                let bound = l2_bernstein_jacobi(n as u32, w.exponents[0], w.exponents[1])?;
                (ratio / bound, f64::NAN)
            }
            Inequality::L2Markov => {
                let w = self
                    .options
                    .weight
                    .clone()
                    .unwrap_or_else(|| Weight::unweighted(set));
                let ratio = l2_pair_ratio(set, &w, &basis, &c, L2Mode::Markov)?;
                let bound = self.constants[0] * nf * nf;
                (ratio / bound, f64::NAN)
            }
            other => unreachable!("{other:?} is not a real-line inequality"),
        };
        Ok(Trial {
            degree: n,
            ratio,
            point,
            coefficients: c,
        })
    }

    fn complex_trial(&self, n: usize, normal: &mut dyn FnMut() -> f64) -> Result<Trial> {
        let (center, radius) = match &self.set {
            SetDescription::Circle(c) => (c.center, c.radius),
            _ => (Complex64::new(0.0, 0.0), 1.0),
        };
        let nf = n as f64;
        let per = self.options.probes_per_band;
        if self.inequality == Inequality::TrigBernstein {
            // trigonometric polynomial of degree n over a full period
            let basis = PolyBasis::trigonometric(n)?;
            let c: Vec<f64> = (0..basis.len()).map(|_| normal()).collect();
            let period = [(-PI, PI)];
            let (norm, _) = sup_norm(&|x| basis.eval(&c, x), &period, scan_grid(n));
            let (d, x) = sup_norm(&|x| basis.eval_derivative(&c, x, 1), &period, scan_grid(n));
            return Ok(Trial {
                degree: n,
                ratio: d / (nf * norm),
                point: x,
                coefficients: c,
            });
        }
        let poly = ComplexPoly {
            coeffs: (0..=n)
                .map(|_| Complex64::new(normal(), normal()))
                .collect(),
            center,
            radius,
        };
        let (ratio, point) = match (&self.set, self.inequality) {
            (SetDescription::Circle(circle), Inequality::Riesz) => {
                let z = |t: f64| circle.center + Complex64::from_polar(circle.radius, t);
                let period = [(-PI, PI)];
                let (norm, _) = sup_norm(&|t| poly.eval(z(t)).0.norm(), &period, scan_grid(n));
                let (d, t) = sup_norm(&|t| poly.eval(z(t)).1.norm(), &period, scan_grid(n));
                (d * circle.radius / (nf * norm), t)
            }
            (SetDescription::Arcs(arcs), Inequality::CircleSubset) => {
                let bands: Vec<(f64, f64)> = arcs.arcs().collect();
                let z = |t: f64| Complex64::from_polar(1.0, t);
                let (norm, _) = sup_norm(&|t| poly.eval(z(t)).0.norm(), &bands, scan_grid(n));
                worst_over(&probe_points(&bands, per), |t| {
                    poly.eval(z(t)).1.norm() / (0.5 * nf * (1.0 + 2.0 * PI * self.omega(t)) * norm)
                })
            }
            (SetDescription::Lemniscate(l), Inequality::RieszCurve) => {
                let density = EquilibriumDensity::lemniscate(l);
                let mut pts = Vec::new();
                let count = 8 * scan_grid(n);
                for i in 0..count {
                    let phi = -PI + 2.0 * PI * i as f64 / count as f64;
                    pts.extend(lemniscate_level_points(l, phi)?);
                }
                let norm = pts
                    .iter()
                    .map(|&z| poly.eval(z).0.norm())
                    .fold(0.0, f64::max);
                let mut best = (f64::NEG_INFINITY, f64::NAN);
                for &z in &pts {
                    let w = density.evaluate_complex(z)? * self.scale();
                    if w < 1e-6 {
                        continue;
                    }
                    let r = poly.eval(z).1.norm() / (nf * 2.0 * PI * w * norm);
                    if r > best.0 {
                        best = (r, z.arg());
                    }
                }
                best
            }
            (set, ineq) => {
                return Err(Error::invalid(format!(
                    "{ineq:?} cannot be checked on a {}",
                    set.kind_name()
                )))
            }
        };
        Ok(Trial {
            degree: n,
            ratio,
            point,
            coefficients: poly.flat(),
        })
    }
}

/// `√(cᵀAc / cᵀBc)` for the sampled coefficients.
fn l2_pair_ratio(
    set: &IntervalUnion,
    weight: &Weight,
    basis: &PolyBasis,
    c: &[f64],
    mode: L2Mode,
) -> Result<f64> {
    let (a, b) = pencil(set, weight, basis, mode)?;
    let quad = |m: &crate::numerics::Matrix| dot(c, &m.mul_vec(c));
    Ok((quad(&a) / quad(&b)).sqrt())
}

fn check_set(inequality: Inequality, set: &SetDescription) -> Result<Option<EquilibriumDensity>> {
    let needs_density = matches!(
        inequality,
        Inequality::BernsteinAlg
            | Inequality::BernsteinSzego
            | Inequality::Videnskii
            | Inequality::CircleSubset
    );
    let ok = inequality.accepts(set);
    if !ok {
        return Err(Error::invalid(format!(
            "{inequality:?} cannot be checked on a {}",
            set.kind_name()
        )));
    }
    if needs_density {
        Ok(Some(EquilibriumDensity::from_description(set)?))
    } else {
        Ok(None)
    }
}

/// Runs `options.trials` random polynomials through one inequality.
pub fn verify_inequality(
    inequality: Inequality,
    set: Option<&SetDescription>,
    options: &VerifyOptions,
) -> Result<VerifyReport> {
    if options.trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if options.max_degree == 0 || options.probes_per_band < 3 {
        return Err(Error::invalid(
            "max_degree must be positive and probes_per_band at least 3",
        ));
    }
    let set = set.cloned().unwrap_or_else(|| inequality.default_set());
    let density = check_set(inequality, &set)?;
    let constants = match (&set, inequality) {
        (SetDescription::Intervals(s), Inequality::MarkovLocal) => (0..s.endpoints().len())
            .map(|j| markov_local(s, j).map(|f| f.value))
            .collect::<Result<Vec<_>>>()?,
        (SetDescription::Periodic(p), Inequality::MarkovTrig) => (0..p.base().endpoints().len())
            .map(|j| markov_trig(p, j).map(|f| f.value))
            .collect::<Result<Vec<_>>>()?,
        (SetDescription::Intervals(s), Inequality::L2Markov) => {
            let w = options
                .weight
                .clone()
                .unwrap_or_else(|| Weight::unweighted(s));
            vec![l2_markov_constant(s, &w)?.value]
        }
        _ => Vec::new(),
    };
    let ctx = Context {
        inequality,
        set,
        options: options.clone(),
        density,
        constants,
    };
    let trials: Vec<Result<Trial>> = (0..options.trials)
        .into_par_iter()
        .map(|i| ctx.run_trial(i))
        .collect();
    let exact = inequality.is_exact();
    let limit = 1.0 + Tolerances::DEFAULT.violation;
    let mut worst: Option<Violation> = None;
    let mut violations = Vec::new();
    let mut count = 0;
    for (i, t) in trials.into_iter().enumerate() {
        let t = t?;
        let v = Violation {
            trial: i,
            degree: t.degree,
            ratio: t.ratio,
            point: t.point,
            coefficients: t.coefficients,
        };
        if exact && t.ratio > limit {
            count += 1;
            if violations.len() < 10 {
                violations.push(v.clone());
            }
        }
        if worst.as_ref().is_none_or(|w| v.ratio > w.ratio) {
            worst = Some(v);
        }
    }
    let witness = witness_check(inequality, &ctx.set, options.density_scale)?;
    Ok(VerifyReport {
        inequality,
        exact,
        set: ctx.set.to_json_value(),
        seed: options.seed,
        trials: options.trials,
        worst_ratio: worst.as_ref().map_or(f64::NAN, |w| w.ratio),
        worst,
        violation_count: count,
        violations,
        witness,
    })
}

const WITNESS_DEGREE: usize = 10;

/// Ratio attained by the classical extremal polynomial, where there is one.
fn witness_check(
    inequality: Inequality,
    set: &SetDescription,
    scale: f64,
) -> Result<Option<WitnessCheck>> {
    let n = WITNESS_DEGREE;
    let nf = n as f64;
    let unit = matches!(set, SetDescription::Intervals(s) if s.endpoints() == [-1.0, 1.0]);
    let tn = |x: f64, k: usize| chebyshev::derivatives(n, k, x)[n];
    let out = match inequality {
        Inequality::TrigBernstein => {
            let period = [(-PI, PI)];
            let (d, _) = sup_norm(&|t| nf * (nf * t).cos(), &period, 4096);
            Some(("sin(nt)".to_string(), d / nf))
        }
        Inequality::Riesz => {
            let unit_circle = matches!(set, SetDescription::Circle(c) if *c == Circle::unit());
            unit_circle.then(|| {
                let zn = ComplexPoly {
                    coeffs: (0..=n)
                        .map(|j| Complex64::new(if j == n { 1.0 } else { 0.0 }, 0.0))
                        .collect(),
                    center: Complex64::new(0.0, 0.0),
                    radius: 1.0,
                };
                let period = [(-PI, PI)];
                let z = |t: f64| Complex64::from_polar(1.0, t);
                let (d, _) = sup_norm(&|t| zn.eval(z(t)).1.norm(), &period, 256);
                let (p, _) = sup_norm(&|t| zn.eval(z(t)).0.norm(), &period, 256);
                ("z^n on the unit circle".to_string(), d / (nf * p))
            })
        }
        Inequality::BernsteinInterval => {
            let x = (PI / (2.0 * nf)).cos();
            Some((
                "T_n at its largest zero".to_string(),
                tn(x, 1).abs() * (1.0 - x * x).sqrt() / nf,
            ))
        }
        Inequality::BernsteinAlg if unit => {
            let x = (PI / (2.0 * nf)).cos();
            let w = scale / (PI * (1.0 - x * x).sqrt());
            Some((
                "T_n at its largest zero".to_string(),
                tn(x, 1).abs() / (nf * PI * w),
            ))
        }
        Inequality::MarkovInterval => Some(("T_n at x = 1".to_string(), tn(1.0, 1) / (nf * nf))),
        Inequality::VaMarkov => Some((
            "T_n'' at x = 1".to_string(),
            tn(1.0, 2) / va_markov_exact(n as u32, 2)?,
        )),
        Inequality::Szego => {
            let residual = (0..=2000)
                .map(|i| {
                    let x = -1.0 + 2.0 * i as f64 / 2000.0;
                    let a = tn(x, 1) * (1.0 - x * x).sqrt();
                    ((a * a + nf * nf * tn(x, 0).powi(2)) / (nf * nf) - 1.0).abs()
                })
                .fold(0.0f64, f64::max);
            Some((
                "T_n identity, max |LHS/RHS - 1|".to_string(),
                1.0 + residual,
            ))
        }
        _ => None,
    };
    Ok(out.map(|(description, ratio)| WitnessCheck { description, ratio }))
}
