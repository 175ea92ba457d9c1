//! Equilibrium measure from the Frostman condition alone: the density is
//! sought per band as `f_k(s)/√(1-s²)` with `f_k` a Chebyshev polynomial, and
//! the coefficients are fixed by requiring a constant log-potential at
//! Chebyshev points of every band plus unit total mass.

use std::f64::consts::PI;

use crate::config::{Tolerances, COLLOCATION_DEGREE};
use crate::error::{Error, Result};
use crate::numerics::chebyshev;
use crate::numerics::linalg::{condition_number, Lu, Matrix};

use super::bands::{Band, BandSystem, Geometry};

pub(crate) const MAX_BANDS: usize = 8;

fn solve_at_degree(
    geometry: Geometry,
    spans: &[(f64, f64)],
    n: usize,
) -> Result<(BandSystem, f64)> {
    let k_count = spans.len();
    let per = n + 1;
    let size = k_count * per + 1;
    let template = BandSystem {
        geometry,
        bands: spans
            .iter()
            .map(|&(lo, hi)| Band {
                lo,
                hi,
                coeffs: Vec::new(),
            })
            .collect(),
    };
    let mut a = Matrix::zeros(size, size);
    let local = chebyshev::points_first_kind(per);
    let mut row = 0;
    for band in &template.bands {
        for &s in &local {
            let x = band.center() + band.half_width() * s;
            let r = a.row_mut(row);
            for k in 0..k_count {
                let mom = template.kernel_moments(k, x, per);
                r[k * per..(k + 1) * per].copy_from_slice(&mom);
            }
            r[size - 1] = -1.0;
            row += 1;
        }
    }
    let r = a.row_mut(row);
    for k in 0..k_count {
        r[k * per] = PI;
    }
    let mut rhs = vec![0.0; size];
    rhs[size - 1] = 1.0;
    let lu = Lu::new(&a)?;
    let cond = condition_number(&a, &lu);
    let x = lu.solve(&rhs);
    let bands = template
        .bands
        .into_iter()
        .enumerate()
        .map(|(k, b)| Band {
            coeffs: x[k * per..(k + 1) * per].to_vec(),
            ..b
        })
        .collect();
    Ok((BandSystem { geometry, bands }, cond))
}

/// Solves the collocation system at degree `n`, doubling once when the
/// system is ill-conditioned.
pub(crate) fn collocate(geometry: Geometry, spans: &[(f64, f64)], n: usize) -> Result<BandSystem> {
    if spans.is_empty() || spans.len() > MAX_BANDS {
        return Err(Error::invalid(format!(
            "collocation supports 1 to {MAX_BANDS} bands, got {}",
            spans.len()
        )));
    }
    if n == 0 {
        return Err(Error::invalid("collocation degree must be positive"));
    }
    let limit = Tolerances::DEFAULT.collocation_condition;
    let mut last = f64::NAN;
    for degree in [n, 2 * n] {
        match solve_at_degree(geometry, spans, degree) {
            Ok((sys, cond)) if cond <= limit => return Ok(sys),
            Ok((_, cond)) => last = cond,
            Err(_) => last = f64::INFINITY,
        }
    }
    Err(Error::numeric(format!(
        "collocation matrix ill-conditioned (condition estimate {last:.3e} at degree {}); \
         try a larger degree or fewer bands",
        2 * n
    )))
}

pub(crate) fn default_degree() -> usize {
    COLLOCATION_DEGREE
}
