use std::f64::consts::PI;

use eqmeasure::equilibrium::Support;
use eqmeasure::factors::{
    bernstein_factor, bernstein_factor_circle_subset, double_factorial_odd, l2_bernstein_jacobi,
    l2_markov_constant, markov_global, markov_higher, markov_local, riesz_factor, va_markov_exact,
    videnskii_factor, videnskii_markov, FactorKind, Weight,
};
use eqmeasure::numerics::chebyshev;
use eqmeasure::sets::{affine_image, ArcUnion, Circle, IntervalUnion};
use eqmeasure::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn set(e: &[f64]) -> IntervalUnion {
    IntervalUnion::new(e.to_vec()).unwrap()
}

#[test]
fn bernstein_factor_on_the_unit_interval() {
    let e = set(&[-1.0, 1.0]);
    for x in [-0.9, -0.3, 0.0, 0.5, 0.99] {
        let f = bernstein_factor(&e, x).unwrap();
        assert_eq!(f.kind, FactorKind::BernsteinAlg);
        assert!(!f.asymptotic && f.degree_power == 1);
        assert!((f.value - 1.0 / (1.0 - x * x).sqrt()).abs() < 1e-13);
    }
    assert!(matches!(bernstein_factor(&e, 1.0), Err(Error::Domain(_))));
}

#[test]
fn markov_factors_of_a_symmetric_pair() {
    let e = set(&[-1.0, -0.5, 0.5, 1.0]);
    assert!((markov_global(&e).unwrap().value - 4.0 / 3.0).abs() < 1e-12);
    assert!((markov_local(&e, 1).unwrap().value - 2.0 / 3.0).abs() < 1e-12);
    assert!(markov_local(&e, 4).is_err());
}

#[test]
fn higher_order_markov_divides_by_double_factorial() {
    assert_eq!(double_factorial_odd(1), 1.0);
    assert_eq!(double_factorial_odd(4), 105.0);
    let e = set(&[-1.0, 1.0]);
    for k in 1..5u32 {
        let m = markov_higher(&e, 1, k).unwrap();
        assert!((m.value - 1.0 / double_factorial_odd(k)).abs() < 1e-14);
        assert_eq!(m.degree_power, 2 * k);
    }
}

#[test]
fn exact_markov_matches_chebyshev_endpoint_derivatives() {
    for n in 1..12usize {
        for k in 1..=n.min(5) {
            let oracle = chebyshev::derivatives(n, k, 1.0)[n];
            let got = va_markov_exact(n as u32, k as u32).unwrap();
            assert!(
                (got - oracle).abs() < 1e-12 * oracle.abs().max(1.0),
                "n={n} k={k}"
            );
        }
    }
    assert!(va_markov_exact(3, 4).is_err());
    assert_eq!(va_markov_exact(6, 3).unwrap(), 2688.0);
}

#[test]
fn videnskii_closed_forms() {
    for beta in [0.5, 1.0, 2.0, 3.0] {
        let f = videnskii_factor(beta, 0.0).unwrap();
        assert!((f.value - 1.0 / (0.5 * beta).sin()).abs() < 1e-12);
        let m = videnskii_markov(beta).unwrap();
        assert!((m.value - 2.0 / (0.5 * beta).tan()).abs() < 1e-14);
        assert!(m.asymptotic && m.degree_power == 2);
    }
    assert!(videnskii_markov(PI).is_err());
}

#[test]
fn circle_and_arc_factors() {
    let c = Circle::new(2.5, Complex64::new(1.0, -1.0)).unwrap();
    let z = c.center + Complex64::from_polar(c.radius, 0.7);
    let r = riesz_factor(&Support::Circle(c), z).unwrap();
    assert!((r.value - 0.4).abs() < 1e-14 && !r.asymptotic);

    // a symmetric arc: 2πω(e^{it}) from the closed form, so the factor is exact
    let arc = ArcUnion::symmetric(2.0).unwrap();
    let f = bernstein_factor_circle_subset(&arc, 0.0).unwrap();
    let w = 2.0 * PI * 1.0 / (2.0 * PI * 1f64.sin());
    assert!((f.value - 0.5 * (1.0 + w)).abs() < 1e-12);
    assert!(bernstein_factor_circle_subset(&arc, 2.0).is_err());
}

#[test]
fn l2_markov_constants() {
    let e = set(&[-1.0, 1.0]);
    let plain = l2_markov_constant(&e, &Weight::unweighted(&e)).unwrap();
    assert!((plain.value - 1.0 / PI).abs() < 1e-12);
    // exponent 2 at both ends: ν_2 = π (first zero of J_{1/2})
    let w = Weight::jacobi(2.0, 2.0).unwrap();
    let v = l2_markov_constant(&e, &w).unwrap();
    assert!((v.value - 0.5 / PI).abs() < 1e-11, "{}", v.value);
    assert!((l2_bernstein_jacobi(7, 0.5, -0.3).unwrap() - (7.0f64 * 8.2).sqrt()).abs() < 1e-13);
}

#[test]
fn weight_validation() {
    let e = set(&[-1.0, 1.0]);
    assert!(Weight::new(vec![-1.0, 0.0]).is_err());
    assert!(Weight::jacobi(0.0, 0.0)
        .unwrap()
        .validate(&set(&[0.0, 1.0, 2.0, 3.0]))
        .is_err());
    let w = Weight::from_json(r#"{"exponents": [0.5, 0.5], "h": [2.0, 1.0]}"#).unwrap();
    assert!(w.validate(&e).is_ok());
    assert!((w.eval(&e, 0.0) - 2.0).abs() < 1e-15);
    let negative_h = Weight::jacobi(0.0, 0.0).unwrap().with_h(vec![0.5, 1.0]);
    assert!(negative_h.validate(&e).is_err());
    assert!(Weight::from_json(r#"{"exponents": [0], "extra": 1}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn markov_factors_scale_inversely_with_the_set(
        w1 in 0.2f64..1.5, g in 0.1f64..1.0, w2 in 0.2f64..1.5, c in 0.3f64..4.0, shift in -2.0f64..2.0,
    ) {
        let e = set(&[0.0, w1, w1 + g, w1 + g + w2]);
        let e2 = affine_image(&e, c, shift).unwrap();
        for j in 0..4 {
            let m = markov_local(&e, j).unwrap().value;
            let m2 = markov_local(&e2, j).unwrap().value;
            prop_assert!((m2 - m / c).abs() < 1e-10 * m / c);
        }
        let x = 0.5 * w1;
        let b = bernstein_factor(&e, x).unwrap().value;
        let b2 = bernstein_factor(&e2, c * x + shift).unwrap().value;
        prop_assert!((b2 - b / c).abs() < 1e-10 * b / c);
    }
}
