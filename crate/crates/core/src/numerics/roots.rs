use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Root of `f` inside `[lo, hi]` given a sign change, by bisection with
/// secant steps accepted whenever they land inside the current bracket.
pub fn find_root_bracketed<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(Error::invalid(format!(
            "no sign change on [{a}, {b}]: f = {fa}, {fb}"
        )));
    }
    let tol = Tolerances::DEFAULT.root;
    let mut use_secant = true;
    for _ in 0..500 {
        let width = b - a;
        if width <= tol.max(4.0 * f64::EPSILON * a.abs().max(b.abs())) {
            break;
        }
        let mid = 0.5 * (a + b);
        let mut x = mid;
        if use_secant {
            let s = b - fb * (b - a) / (fb - fa);
            if s > a && s < b {
                x = s;
            }
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fa * fx < 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
        // Alternate so that a stalled secant side cannot keep the bracket wide.
        use_secant = !use_secant || (b - a) < 0.5 * width;
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}
