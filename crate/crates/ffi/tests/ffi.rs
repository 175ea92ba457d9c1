use std::f64::consts::PI;
use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use eqmeasure_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(eqm_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn make_set(json: &str) -> *mut EqmSet {
    let text = CString::new(json).unwrap();
    let mut set = ptr::null_mut();
    assert_eq!(
        unsafe { eqm_set_from_json(text.as_ptr(), &mut set) },
        EqmStatus::Ok
    );
    assert!(!set.is_null());
    set
}

#[test]
fn density_round_trip_through_handles() {
    let set = make_set(r#"{"type":"intervals","endpoints":[-1,-0.3,0.2,1]}"#);
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(eqm_density_new(set, &mut d), EqmStatus::Ok);
        let mut mass = 0.0;
        assert_eq!(eqm_density_mass(d, &mut mass), EqmStatus::Ok);
        assert!((mass - 1.0).abs() < 1e-8);
        let mut spread = 1.0;
        assert_eq!(eqm_density_frostman_spread(d, &mut spread), EqmStatus::Ok);
        assert!(spread < 1e-6);

        let mut count = 0usize;
        assert_eq!(eqm_density_xi_count(d, &mut count), EqmStatus::Ok);
        assert_eq!(count, 1);
        let mut xi = [0.0f64; 1];
        assert_eq!(eqm_density_xi(d, xi.as_mut_ptr(), 1), EqmStatus::Ok);
        assert!(-0.3 < xi[0] && xi[0] < 0.2);
        assert_eq!(
            eqm_density_xi(d, xi.as_mut_ptr(), 0),
            EqmStatus::InvalidArgument
        );

        let mut w = 0.0;
        assert_eq!(eqm_density_eval(d, 0.5, &mut w), EqmStatus::Ok);
        assert!(w > 0.0);
        assert_eq!(eqm_density_eval(d, 0.0, &mut w), EqmStatus::Domain);
        assert!(last_error().contains("not"), "{}", last_error());

        eqm_density_free(d);
        eqm_set_free(set);
    }
}

#[test]
fn factors_on_the_unit_interval() {
    let set = make_set(r#"{"type":"intervals","endpoints":[-1,1]}"#);
    unsafe {
        let mut v = 0.0;
        assert_eq!(eqm_markov_local(set, 0, &mut v), EqmStatus::Ok);
        assert!((v - 1.0).abs() < 1e-14);
        assert_eq!(eqm_markov_global(set, &mut v), EqmStatus::Ok);
        assert!((v - 1.0).abs() < 1e-14);
        assert_eq!(eqm_bernstein_factor(set, 0.6, &mut v), EqmStatus::Ok);
        assert!((v - 1.25).abs() < 1e-13);
        assert_eq!(
            eqm_l2_markov_constant(set, ptr::null(), &mut v),
            EqmStatus::Ok
        );
        assert!((v - 1.0 / PI).abs() < 1e-12);
        let w = CString::new(r#"{"exponents":[2,2]}"#).unwrap();
        assert_eq!(
            eqm_l2_markov_constant(set, w.as_ptr(), &mut v),
            EqmStatus::Ok
        );
        assert!((v - 0.5 / PI).abs() < 1e-11);

        let mut d = ptr::null_mut();
        assert_eq!(eqm_density_new(set, &mut d), EqmStatus::Ok);
        assert_eq!(eqm_omega_limit(d, 1, &mut v), EqmStatus::Ok);
        assert!((v - 1.0 / (PI * 2f64.sqrt())).abs() < 1e-13);
        eqm_density_free(d);
        eqm_set_free(set);
    }
    let mut v = 0.0;
    assert_eq!(unsafe { eqm_va_markov_exact(6, 3, &mut v) }, EqmStatus::Ok);
    assert_eq!(v, 2688.0);
}

#[test]
fn periodic_and_circle_factors() {
    let periodic = make_set(r#"{"type":"periodic","endpoints":[-2,2]}"#);
    let circle = make_set(r#"{"type":"circle","r":2}"#);
    unsafe {
        let mut v = 0.0;
        assert_eq!(eqm_bernstein_factor(periodic, 0.0, &mut v), EqmStatus::Ok);
        assert!((v - 1.0 / 1f64.sin()).abs() < 1e-12);
        assert_eq!(eqm_bernstein_factor(circle, 1.0, &mut v), EqmStatus::Ok);
        assert!((v - 0.5).abs() < 1e-14);
        assert_eq!(
            eqm_markov_global(circle, &mut v),
            EqmStatus::InvalidArgument
        );
        assert_eq!(
            eqm_markov_local(circle, 0, &mut v),
            EqmStatus::InvalidArgument
        );
        eqm_set_free(periodic);
        eqm_set_free(circle);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut set = ptr::null_mut();
        assert_eq!(
            eqm_set_from_json(ptr::null(), &mut set),
            EqmStatus::NullPointer
        );
        let bad = CString::new(r#"{"type":"intervals","endpoints":[1,0]}"#).unwrap();
        assert_eq!(
            eqm_set_from_json(bad.as_ptr(), &mut set),
            EqmStatus::InvalidArgument
        );
        assert!(!last_error().is_empty());
        assert!(set.is_null());

        let invalid_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(
            eqm_set_from_json(invalid_utf8.as_ptr().cast(), &mut set),
            EqmStatus::Utf8
        );

        let good = CString::new(r#"{"type":"intervals","endpoints":[0,1]}"#).unwrap();
        assert_eq!(
            eqm_set_from_json(good.as_ptr(), ptr::null_mut()),
            EqmStatus::NullPointer
        );

        let mut v = 0.0;
        assert_eq!(
            eqm_density_mass(ptr::null(), &mut v),
            EqmStatus::NullPointer
        );
        assert_eq!(
            eqm_va_markov_exact(2, 5, &mut v),
            EqmStatus::InvalidArgument
        );
        assert_eq!(eqm_va_markov_exact(2, 1, &mut v), EqmStatus::Ok);
        assert_eq!(last_error(), "");

        eqm_set_free(ptr::null_mut());
        eqm_density_free(ptr::null_mut());
    }
    let version = unsafe { CStr::from_ptr(eqm_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn generated_header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/eqmeasure.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "eqm_set_from_json",
        "eqm_density_new",
        "eqm_va_markov_exact",
        "EQM_STATUS_PANIC",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use_header.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{}\"\nint main(void) {{ EqmSet *s = 0; double v; return eqm_markov_global(s, &v) == EQM_STATUS_OK; }}\n",
            header.display()
        ),
    )
    .unwrap();
    match Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror"])
        .arg(&src)
        .status()
    {
        Ok(status) => assert!(status.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler found; header compile check skipped"),
    }
}
