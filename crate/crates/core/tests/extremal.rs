use std::f64::consts::PI;

use eqmeasure::extremal::{
    l2_ratio_numeric, l2_ratio_with_basis, markov_constant_numeric, pointwise_derivative_sup,
    verify_inequality, videnskii_check, Domain, Inequality, L2Mode, PolyBasis, VerifyOptions,
};
use eqmeasure::factors::{markov_trig, Weight};
use eqmeasure::sets::{IntervalUnion, PeriodicSet, SetDescription};
use eqmeasure::Error;

fn set(e: &[f64]) -> IntervalUnion {
    IntervalUnion::new(e.to_vec()).unwrap()
}

#[test]
fn endpoint_extremal_value_is_the_markov_bound() {
    let e = set(&[-1.0, 1.0]);
    for n in [3usize, 5, 9] {
        let r = pointwise_derivative_sup(
            &Domain::Intervals(e.clone()),
            &PolyBasis::algebraic_for(&e, n).unwrap(),
            1.0,
            1,
        )
        .unwrap();
        let n2 = (n * n) as f64;
        assert!((r.value - n2).abs() < 1e-4 * n2, "n={n}: {}", r.value);
        assert!(r.certified_norm <= 1.0 + 1e-6);
    }
}

#[test]
fn scaled_interval_markov_constant() {
    // [0, 4] is [-1, 1] stretched by 2, so the constant halves
    let e = set(&[0.0, 4.0]);
    let r = markov_constant_numeric(
        &Domain::Intervals(e.clone()),
        &PolyBasis::algebraic_for(&e, 6).unwrap(),
        1,
    )
    .unwrap();
    assert!((r.value - 18.0).abs() < 1e-3, "{}", r.value);
    assert!((r.normalized.unwrap() - 0.5).abs() < 1e-4);
}

#[test]
fn points_off_the_set_are_rejected() {
    let e = set(&[-1.0, -0.3, 0.2, 1.0]);
    let basis = PolyBasis::algebraic_for(&e, 4).unwrap();
    let err = pointwise_derivative_sup(&Domain::Intervals(e), &basis, 0.0, 1).unwrap_err();
    assert!(matches!(err, Error::Domain(_)));
    let p = PeriodicSet::symmetric(1.0).unwrap();
    assert!(pointwise_derivative_sup(&Domain::Periodic(p), &basis, 0.0, 1).is_err());
}

#[test]
fn trigonometric_lp_stays_well_conditioned_at_high_degree() {
    let p = PeriodicSet::new(vec![-2.5, -0.4, 0.3, 2.0]).unwrap();
    let basis = PolyBasis::trigonometric_for(&p, 32).unwrap();
    let r = pointwise_derivative_sup(&Domain::Periodic(p), &basis, 1.0, 1).unwrap();
    assert!(r.certified_norm <= 1.0 + 1e-6);
    assert!(r.value > 0.0);
}

#[test]
fn single_arc_markov_constant_matches_cotangent_bound() {
    let report = videnskii_check(2.0, 6, &[0.0, 1.0, -1.5]).unwrap();
    assert!(
        (report.markov_ratio - 1.0).abs() < 1e-6,
        "{}",
        report.markov_ratio
    );
    for pt in &report.points {
        assert!(pt.ratio <= 1.0 + 1e-6 && pt.ratio > 0.8, "{pt:?}");
    }
    let p = PeriodicSet::symmetric(2.0).unwrap();
    let m = markov_trig(&p, 0).unwrap().value;
    assert!((m - 2.0 / 1f64.tan()).abs() < 1e-7);
}

#[test]
fn legendre_l2_markov_ratio_at_degree_one() {
    // P = a + b x on [-1, 1]: ‖P'‖² = 2b², ‖P‖² = 2a² + 2b²/3, so the maximum ratio is √3
    let e = set(&[-1.0, 1.0]);
    let r = l2_ratio_numeric(&e, &Weight::unweighted(&e), 1, L2Mode::Markov).unwrap();
    assert!((r - 3f64.sqrt()).abs() < 1e-12);
    let g = l2_ratio_numeric(
        &e,
        &Weight::jacobi(0.5, -0.3).unwrap(),
        1,
        L2Mode::GradientBernstein,
    )
    .unwrap();
    assert!((g - 2.2f64.sqrt()).abs() < 1e-10);
}

#[test]
fn l2_ratio_trend_approaches_bessel_constant() {
    let e = set(&[-1.0, 1.0]);
    let w = Weight::unweighted(&e);
    let gap = |n: usize| {
        (l2_ratio_numeric(&e, &w, n, L2Mode::Markov).unwrap() / (n * n) as f64 * PI - 1.0).abs()
    };
    let (g10, g20, g40) = (gap(10), gap(20), gap(40));
    assert!(g40 < g20 && g20 < g10, "{g10} {g20} {g40}");
}

#[test]
fn l2_rejects_bad_inputs() {
    let two = set(&[-1.0, -0.3, 0.2, 1.0]);
    let w = Weight::unweighted(&two);
    assert!(l2_ratio_numeric(&two, &w, 4, L2Mode::GradientBernstein).is_err());
    let basis = PolyBasis::algebraic_for(&two, 101).unwrap();
    assert!(matches!(
        l2_ratio_with_basis(&two, &w, &basis, L2Mode::Markov),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn verification_is_deterministic_per_seed() {
    let options = VerifyOptions {
        trials: 60,
        seed: 11,
        ..VerifyOptions::default()
    };
    let a = verify_inequality(Inequality::BernsteinAlg, None, &options).unwrap();
    let b = verify_inequality(Inequality::BernsteinAlg, None, &options).unwrap();
    assert_eq!(a, b);
    let c = verify_inequality(
        Inequality::BernsteinAlg,
        None,
        &VerifyOptions {
            seed: 12,
            ..options
        },
    )
    .unwrap();
    assert_ne!(a.worst_ratio, c.worst_ratio);
    assert_eq!(a.violation_count, 0);
}

#[test]
fn corrupted_density_is_caught_with_a_witness() {
    let options = VerifyOptions {
        trials: 50,
        density_scale: 0.2,
        ..VerifyOptions::default()
    };
    let r = verify_inequality(Inequality::BernsteinAlg, None, &options).unwrap();
    assert!(r.exact && r.violation_count > 0);
    let worst = r.worst.unwrap();
    assert!(worst.ratio > 1.0 && !worst.coefficients.is_empty());
}

#[test]
fn witnesses_attain_equality() {
    let options = VerifyOptions {
        trials: 20,
        ..VerifyOptions::default()
    };
    for ineq in [
        Inequality::TrigBernstein,
        Inequality::Riesz,
        Inequality::MarkovInterval,
        Inequality::VaMarkov,
    ] {
        let r = verify_inequality(ineq, None, &options).unwrap();
        let w = r.witness.expect("witness");
        assert!((w.ratio - 1.0).abs() < 1e-9, "{ineq:?}: {}", w.ratio);
    }
}

#[test]
fn inequalities_reject_unsuitable_sets() {
    let circle = SetDescription::from_json(r#"{"type": "circle", "r": 1}"#).unwrap();
    assert!(!Inequality::MarkovInterval.accepts(&circle));
    let options = VerifyOptions {
        trials: 5,
        ..VerifyOptions::default()
    };
    assert!(verify_inequality(Inequality::MarkovInterval, Some(&circle), &options).is_err());
    let shifted = SetDescription::Intervals(set(&[0.0, 2.0]));
    assert!(!Inequality::VaMarkov.accepts(&shifted));
    assert!(Inequality::BernsteinAlg.accepts(&shifted));
}
