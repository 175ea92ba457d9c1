//! Gaussian quadrature rules on [-1, 1].

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::linalg::tridiagonal_eigen;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    GaussLegendre,
    GaussChebyshev,
    GolubWelschCustom,
}

/// Nodes (strictly increasing) and positive weights of an interpolatory rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Applies the rule to `f` on its native interval.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Applies the rule on `[a, b]` through the affine map from `[-1, 1]`.
    /// Only meaningful for rules whose measure is Lebesgue measure.
    pub fn integrate_on<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        h * self.integrate(|s| f(c + h * s))
    }
}

/// Classical Gauss-Legendre rule, nodes by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > 10_000 {
        return Err(Error::invalid(format!(
            "Gauss-Legendre size must be in 1..=10000, got {n}"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        kind: RuleKind::GaussLegendre,
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let prev = if n == 0 { 0.0 } else { p0 };
    let d = n as f64 * (x * p - prev) / (x * x - 1.0);
    (p, d)
}

/// Gauss-Chebyshev rule of the first kind: integrates f(s)/sqrt(1-s^2).
pub fn gauss_chebyshev(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::invalid("Gauss-Chebyshev size must be positive"));
    }
    let nodes = (0..n)
        .map(|i| -((2 * i + 1) as f64 * PI / (2 * n) as f64).cos())
        .collect();
    Ok(QuadratureRule {
        nodes,
        weights: vec![PI / n as f64; n],
        kind: RuleKind::GaussChebyshev,
    })
}

/// Three-term recurrence of monic orthogonal polynomials
/// `p_{k+1}(x) = (x - a_k) p_k(x) - b_k^2 p_{k-1}(x)` together with the
/// total mass of the measure.
#[derive(Debug, Clone, PartialEq)]
pub enum Recurrence {
    Legendre,
    ChebyshevFirst,
    /// Weight `(1-x)^alpha (1+x)^beta`.
    Jacobi {
        alpha: f64,
        beta: f64,
    },
    /// Explicit coefficients: `diagonal[k] = a_k`, `off_diagonal[k] = b_{k+1}`.
    Custom {
        diagonal: Vec<f64>,
        off_diagonal: Vec<f64>,
        mass: f64,
    },
}

impl Recurrence {
    pub fn mass(&self) -> f64 {
        match self {
            Recurrence::Legendre => 2.0,
            Recurrence::ChebyshevFirst => PI,
            Recurrence::Jacobi { alpha, beta } => {
                let (a, b) = (*alpha, *beta);
                (2f64).powf(a + b + 1.0) * libm::tgamma(a + 1.0) * libm::tgamma(b + 1.0)
                    / libm::tgamma(a + b + 2.0)
            }
            Recurrence::Custom { mass, .. } => *mass,
        }
    }

    /// Jacobi matrix of size n: diagonal and the n-1 off-diagonal entries.
    pub fn jacobi_matrix(&self, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let off = n.saturating_sub(1);
        match self {
            Recurrence::Legendre => {
                let offd = (1..=off)
                    .map(|k| {
                        let k = k as f64;
                        k / (4.0 * k * k - 1.0).sqrt()
                    })
                    .collect();
                Ok((vec![0.0; n], offd))
            }
            Recurrence::ChebyshevFirst => {
                let offd = (1..=off)
                    .map(|k| if k == 1 { 0.5f64.sqrt() } else { 0.5 })
                    .collect();
                Ok((vec![0.0; n], offd))
            }
            Recurrence::Jacobi { alpha, beta } => {
                let (a, b) = (*alpha, *beta);
                if !(a > -1.0 && b > -1.0) {
                    return Err(Error::invalid(format!(
                        "Jacobi exponents must exceed -1, got ({a}, {b})"
                    )));
                }
                let ab = a + b;
                let diag = (0..n)
                    .map(|k| {
                        if k == 0 {
                            (b - a) / (ab + 2.0)
                        } else {
                            let s = 2.0 * k as f64 + ab;
                            (b * b - a * a) / (s * (s + 2.0))
                        }
                    })
                    .collect();
                let offd = (1..=off)
                    .map(|k| {
                        let kf = k as f64;
                        let s = 2.0 * kf + ab;
                        let sq = if k == 1 {
                            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
                        } else {
                            4.0 * kf * (kf + a) * (kf + b) * (kf + ab)
                                / (s * s * (s + 1.0) * (s - 1.0))
                        };
                        sq.sqrt()
                    })
                    .collect();
                Ok((diag, offd))
            }
            Recurrence::Custom {
                diagonal,
                off_diagonal,
                ..
            } => {
                if diagonal.len() < n || off_diagonal.len() < off {
                    return Err(Error::invalid(format!(
                        "custom recurrence too short for {n} nodes"
                    )));
                }
                Ok((diagonal[..n].to_vec(), off_diagonal[..off].to_vec()))
            }
        }
    }
}

/// Gauss rule for the measure behind `recurrence` via the eigen-decomposition
/// of its symmetric tridiagonal Jacobi matrix.
pub fn golub_welsch(recurrence: &Recurrence, n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::invalid("Golub-Welsch size must be positive"));
    }
    let (mut diag, offd) = recurrence.jacobi_matrix(n)?;
    if let Some(bad) = offd.iter().find(|&&b| !(b > 0.0) || !b.is_finite()) {
        return Err(Error::invalid(format!(
            "recurrence off-diagonal must be positive, got {bad}"
        )));
    }
    let mut e = offd;
    e.push(0.0);
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiagonal_eigen(&mut diag, &mut e, &mut first)?;
    let mass = recurrence.mass();
    let mut pairs: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(first)
        .map(|(x, v)| (x, mass * v * v))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(QuadratureRule {
        nodes,
        weights,
        kind: RuleKind::GolubWelschCustom,
    })
}

/// Gauss-Legendre integration of `f` over [a, b], doubling the rule from
/// `start` points until two successive values agree to `rel_tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    start: usize,
    rel_tol: f64,
) -> Result<f64> {
    let mut n = start.max(2);
    let mut prev = gauss_legendre(n)?.integrate_on(a, b, &f);
    while n <= 4096 {
        n *= 2;
        let cur = gauss_legendre(n)?.integrate_on(a, b, &f);
        if (cur - prev).abs() <= rel_tol * cur.abs().max(1e-300) || (cur - prev).abs() < 1e-300 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::numeric(format!(
        "quadrature did not converge on [{a}, {b}]"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule_is_midpoint() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule() {
        let r = gauss_legendre(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + x).abs() < 1e-15 && (r.nodes[1] - x).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-14 && (r.weights[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn three_point_rule_integrates_quartic_exactly() {
        let r = gauss_legendre(3).unwrap();
        assert!((r.integrate(|x| x.powi(4)) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn legendre_rejects_bad_sizes() {
        assert!(matches!(gauss_legendre(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            gauss_legendre(10_001),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn legendre_masses_and_ordering() {
        for n in [1, 2, 5, 17, 64, 200, 1000] {
            let r = gauss_legendre(n).unwrap();
            assert!((r.total_weight() - 2.0).abs() < 1e-13, "n={n}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(r.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn legendre_exactness_degree() {
        let r = gauss_legendre(6).unwrap();
        for k in 0..=11 {
            let exact = if k % 2 == 1 {
                0.0
            } else {
                2.0 / (k as f64 + 1.0)
            };
            assert!((r.integrate(|x| x.powi(k)) - exact).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn chebyshev_recurrence_gives_equal_weights() {
        let r = golub_welsch(&Recurrence::ChebyshevFirst, 4).unwrap();
        for w in &r.weights {
            assert!((w - PI / 4.0).abs() < 1e-14);
        }
        let direct = gauss_chebyshev(4).unwrap();
        for (a, b) in r.nodes.iter().zip(&direct.nodes) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn legendre_recurrence_matches_newton_rule() {
        let gw = golub_welsch(&Recurrence::Legendre, 3).unwrap();
        let gl = gauss_legendre(3).unwrap();
        for i in 0..3 {
            assert!((gw.nodes[i] - gl.nodes[i]).abs() < 1e-13);
            assert!((gw.weights[i] - gl.weights[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn non_positive_off_diagonal_rejected() {
        let rec = Recurrence::Custom {
            diagonal: vec![0.0; 3],
            off_diagonal: vec![0.5, -0.1],
            mass: 1.0,
        };
        assert!(matches!(
            golub_welsch(&rec, 3),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn jacobi_rule_mass() {
        let rec = Recurrence::Jacobi {
            alpha: 0.5,
            beta: -0.3,
        };
        let r = golub_welsch(&rec, 20).unwrap();
        assert!((r.total_weight() - rec.mass()).abs() < 1e-12);
    }
}
