use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::config::SAMPLES_PER_BAND;
use crate::equilibrium::{lemniscate_level_points, EquilibriumDensity, Support};
use crate::error::{Error, Result};
use crate::extremal::{
    l2_ratio_with_basis, markov_constant_numeric, pointwise_derivative_sup, verify_inequality,
    Domain, Inequality, L2Mode, PolyBasis, VerifyOptions,
};
use crate::factors::{
    bernstein_factor, bernstein_factor_circle_subset, bernstein_factor_trig, bernstein_higher,
    l2_bernstein_jacobi, l2_markov_constant, markov_arc_endpoint, markov_global, markov_higher,
    markov_local, markov_local_arc, markov_trig, riesz_factor, va_markov_exact, videnskii_factor,
    videnskii_markov, FactorKind, FactorReport, Weight,
};
use crate::sets::{wrap_angle, IntervalUnion, PeriodicSet, SetDescription};

use super::{Output, RunConfig, EXIT_OK, EXIT_VIOLATION};

/// Shortest round-trip decimal, in exponent form for very large or small
/// magnitudes.
pub(crate) fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn kebab<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

/// Midpoints of `m` equal cells of each band: a uniform interior grid.
fn interior_grid(bands: &[(f64, f64)], m: usize) -> Vec<f64> {
    bands
        .iter()
        .flat_map(|&(a, b)| (0..m).map(move |i| a + (b - a) * (i as f64 + 0.5) / m as f64))
        .collect()
}

pub(crate) fn eqdensity(cfg: &RunConfig) -> Result<Output> {
    let set = cfg.require_set()?;
    let density = EquilibriumDensity::from_description(set)?;
    let m = cfg.grid.unwrap_or(SAMPLES_PER_BAND);
    let meta = json!({
        "set": set.to_json_value(),
        "method": density.method(),
        "xi": density.xi(),
        "mass": density.mass(),
        "frostman_spread": density.frostman_spread(),
        "samples_per_band": m,
    });

    let mut csv = String::new();
    let samples: Vec<serde_json::Value> = if let SetDescription::Lemniscate(l) = set {
        csv.push_str("re,im,omega\n");
        let mut rows = Vec::new();
        for i in 0..m {
            // midpoints keep clear of φ = π, where z² - 1 has its double point
            let phi = 2.0 * PI * (i as f64 + 0.5) / m as f64;
            for z in lemniscate_level_points(l, phi)? {
                let w = density.evaluate_complex(z)?;
                writeln!(csv, "{},{},{}", num(z.re), num(z.im), num(w)).expect("string write");
                rows.push(json!({"re": z.re, "im": z.im, "omega": w}));
            }
        }
        rows
    } else {
        let bands: Vec<(f64, f64)> = match set {
            SetDescription::Intervals(s) => s.bands().collect(),
            SetDescription::Periodic(p) => p.base().bands().collect(),
            SetDescription::Arcs(a) => a.arcs().collect(),
            _ => vec![(-PI, PI)],
        };
        csv.push_str("t,omega\n");
        let mut rows = Vec::new();
        for t in interior_grid(&bands, m) {
            let w = density.evaluate(t)?;
            writeln!(csv, "{},{}", num(t), num(w)).expect("string write");
            rows.push(json!({"t": t, "omega": w}));
        }
        rows
    };

    let mut json = meta.clone();
    json["samples"] = serde_json::Value::Array(samples);
    let mut meta_text = serde_json::to_string_pretty(&meta).expect("JSON values serialize");
    meta_text.push('\n');
    Ok(Output {
        json,
        csv,
        sidecars: vec![(".meta.json".to_string(), meta_text)],
        exit: EXIT_OK,
    })
}

#[derive(Debug, Clone, Serialize)]
struct FactorEntry {
    #[serde(flatten)]
    report: FactorReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    endpoint: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<f64>,
    /// `value · n^degree_power` when a degree was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    scaled: Option<f64>,
}

fn symmetric_beta(p: &PeriodicSet) -> Option<f64> {
    match p.base().endpoints() {
        [a, b] if *a == -*b => Some(*b),
        _ => None,
    }
}

fn interval_factors(
    s: &IntervalUnion,
    cfg: &RunConfig,
    n: Option<usize>,
) -> Result<Vec<FactorEntry>> {
    let k = cfg.k as u32;
    let entry = |report, endpoint, point| FactorEntry {
        report,
        endpoint,
        point,
        scaled: None,
    };
    let mut out = Vec::new();
    for j in 0..s.endpoints().len() {
        out.push(entry(markov_local(s, j)?, Some(j), None));
        if k > 1 {
            out.push(entry(markov_higher(s, j, k)?, Some(j), None));
        }
    }
    out.push(entry(markov_global(s)?, None, None));
    if let Some(x) = cfg.point {
        let b = bernstein_factor(s, x)?;
        if k > 1 {
            out.push(entry(bernstein_higher(&b, k)?, None, Some(x)));
        }
        out.insert(0, entry(b, None, Some(x)));
    }
    let weight = cfg.weight.clone().unwrap_or_else(|| Weight::unweighted(s));
    out.push(entry(l2_markov_constant(s, &weight)?, None, None));
    if let (Some(n), [a, b]) = (n, s.endpoints()) {
        // exact k-th derivative Markov constant, rescaled from [-1, 1]
        let va = va_markov_exact(n as u32, k)? * (2.0 / (b - a)).powi(k as i32);
        out.push(entry(
            FactorReport::new(FactorKind::VaMarkov, va, 0, false)?,
            None,
            None,
        ));
        if weight.exponents.len() == 2 && weight.has_unit_h() {
            let g = l2_bernstein_jacobi(n as u32, weight.exponents[0], weight.exponents[1])?;
            out.push(entry(
                FactorReport::new(FactorKind::L2BernsteinJacobi, g, 0, false)?,
                None,
                None,
            ));
        }
    }
    Ok(out)
}

pub(crate) fn factors(cfg: &RunConfig) -> Result<Output> {
    let set = cfg.require_set()?;
    let n = cfg.degrees.first().copied();
    let k = cfg.k as u32;
    let entry = |report, endpoint, point| FactorEntry {
        report,
        endpoint,
        point,
        scaled: None,
    };
    let mut entries = match set {
        SetDescription::Intervals(s) => interval_factors(s, cfg, n)?,
        SetDescription::Periodic(p) => {
            let mut out = Vec::new();
            for j in 0..p.base().endpoints().len() {
                out.push(entry(markov_trig(p, j)?, Some(j), None));
            }
            if let Some(theta) = cfg.point {
                let b = bernstein_factor_trig(p, theta)?;
                if k > 1 {
                    out.push(entry(bernstein_higher(&b, k)?, None, Some(theta)));
                }
                out.insert(0, entry(b, None, Some(theta)));
            }
            if let Some(beta) = cfg.beta.or_else(|| symmetric_beta(p)) {
                if let Some(theta) = cfg.point {
                    out.push(entry(videnskii_factor(beta, theta)?, None, Some(theta)));
                }
                out.push(entry(videnskii_markov(beta)?, None, None));
            }
            out
        }
        SetDescription::Arcs(a) => {
            let support = Support::Arcs(a.clone());
            let mut out = Vec::new();
            for j in 0..a.angles().len() {
                out.push(entry(markov_local_arc(a, j)?, Some(j), None));
                if k > 1 {
                    out.push(entry(
                        markov_arc_endpoint(&support, Some(j), k)?,
                        Some(j),
                        None,
                    ));
                }
            }
            if let Some(t) = cfg.point {
                out.insert(
                    0,
                    entry(bernstein_factor_circle_subset(a, t)?, None, Some(t)),
                );
            }
            out
        }
        SetDescription::Circle(c) => {
            let t = cfg.point.unwrap_or(0.0);
            let z = c.point_at(t);
            vec![entry(riesz_factor(&Support::Circle(*c), z)?, None, Some(t))]
        }
        SetDescription::Lemniscate(l) => {
            let phi = cfg.point.unwrap_or(0.0);
            let z = lemniscate_level_points(l, phi)?[0];
            vec![entry(
                riesz_factor(&Support::Lemniscate(l.clone()), z)?,
                None,
                Some(phi),
            )]
        }
    };
    if let Some(n) = n {
        for e in &mut entries {
            e.scaled = Some(e.report.scaled(n));
        }
    }

    let mut csv = String::from("kind,value,degree_power,asymptotic,endpoint,point,scaled\n");
    for e in &entries {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            kebab(&e.report.kind),
            num(e.report.value),
            e.report.degree_power,
            e.report.asymptotic,
            e.endpoint.map(|j| j.to_string()).unwrap_or_default(),
            opt(e.point),
            opt(e.scaled)
        )
        .expect("string write");
    }
    Ok(Output {
        json: json!({
            "set": set.to_json_value(),
            "n": n,
            "k": cfg.k,
            "factors": entries,
        }),
        csv,
        sidecars: Vec::new(),
        exit: EXIT_OK,
    })
}

/// The factor an extremal value is compared against.
fn reference_factor(
    set: &SetDescription,
    point: Option<f64>,
    k: u32,
) -> Result<Option<FactorReport>> {
    let max_of = |reports: Vec<FactorReport>| {
        reports
            .into_iter()
            .fold(None::<FactorReport>, |best, r| match best {
                Some(b) if b.value >= r.value => Some(b),
                _ => Some(r),
            })
    };
    Ok(match set {
        SetDescription::Intervals(s) => match point {
            Some(x) => match s.endpoints().iter().position(|&e| e == x) {
                Some(j) if k == 1 => Some(markov_local(s, j)?),
                Some(j) => Some(markov_higher(s, j, k)?),
                None if k == 1 => Some(bernstein_factor(s, x)?),
                None => Some(bernstein_higher(&bernstein_factor(s, x)?, k)?),
            },
            None if k == 1 => Some(markov_global(s)?),
            None => max_of(
                (0..s.endpoints().len())
                    .map(|j| markov_higher(s, j, k))
                    .collect::<Result<_>>()?,
            ),
        },
        SetDescription::Periodic(p) => {
            let ends = p.base().endpoints();
            match point {
                Some(t) => match ends.iter().position(|&e| e == wrap_angle(t)) {
                    Some(j) if k == 1 => Some(markov_trig(p, j)?),
                    Some(_) => None,
                    None if k == 1 => Some(bernstein_factor_trig(p, t)?),
                    None => Some(bernstein_higher(&bernstein_factor_trig(p, t)?, k)?),
                },
                None if k == 1 => max_of(
                    (0..ends.len())
                        .map(|j| markov_trig(p, j))
                        .collect::<Result<_>>()?,
                ),
                None => None,
            }
        }
        _ => None,
    })
}

pub(crate) fn extremal(cfg: &RunConfig) -> Result<Output> {
    let set = cfg.require_set()?;
    let degrees = cfg.require_degrees()?;
    let domain = match set {
        SetDescription::Intervals(s) => Domain::Intervals(s.clone()),
        SetDescription::Periodic(p) => Domain::Periodic(p.clone()),
        other => {
            return Err(Error::InvalidArgument(format!(
                "extremal problems need an interval or periodic set, got {}",
                other.kind_name()
            )))
        }
    };
    let factor = reference_factor(set, cfg.point, cfg.k as u32)?;

    let mut rows = Vec::new();
    let mut last = None;
    let mut csv =
        String::from("n,value,normalized,factor_scaled,ratio,point,refinements,certified_norm\n");
    for &n in degrees {
        let basis = match set {
            SetDescription::Periodic(p) => PolyBasis::trigonometric_for(p, n)?,
            SetDescription::Intervals(s) => PolyBasis::algebraic_for(s, n)?,
            _ => unreachable!("checked above"),
        };
        let r = match cfg.point {
            Some(x) => pointwise_derivative_sup(&domain, &basis, x, cfg.k)?,
            None => markov_constant_numeric(&domain, &basis, cfg.k)?,
        };
        let scaled = factor.as_ref().map(|f| f.scaled(n));
        let ratio = scaled.map(|s| r.value / s);
        writeln!(
            csv,
            "{n},{},{},{},{},{},{},{}",
            num(r.value),
            opt(r.normalized),
            opt(scaled),
            opt(ratio),
            num(r.point),
            r.refinements,
            num(r.certified_norm)
        )
        .expect("string write");
        rows.push(json!({
            "n": n,
            "value": r.value,
            "normalized": r.normalized,
            "factor_scaled": scaled,
            "ratio": ratio,
            "point": r.point,
            "refinements": r.refinements,
            "certified_norm": r.certified_norm,
            "grid_size": r.grid.len(),
            "lp_iterations": r.lp_iterations,
        }));
        last = Some(r);
    }

    let mut json = json!({
        "set": set.to_json_value(),
        "k": cfg.k,
        "point": cfg.point,
        "factor": factor,
    });
    if cfg.sweep {
        let ratios: Vec<f64> = rows.iter().filter_map(|r| r["ratio"].as_f64()).collect();
        json["rows"] = json!(rows);
        json["nondecreasing"] =
            json!((ratios.len() == rows.len()).then(|| ratios.windows(2).all(|w| w[1] >= w[0])));
    } else {
        let r = last.expect("one degree");
        json["ratio"] = rows[0]["ratio"].clone();
        json["result"] = json!(r);
    }
    Ok(Output {
        json,
        csv,
        sidecars: Vec::new(),
        exit: EXIT_OK,
    })
}

pub(crate) fn verify(cfg: &RunConfig) -> Result<Output> {
    let defaults = VerifyOptions::default();
    let options = VerifyOptions {
        trials: cfg.trials.unwrap_or(defaults.trials),
        seed: cfg.seed,
        probes_per_band: cfg.grid.unwrap_or(defaults.probes_per_band),
        density_scale: cfg.corrupt_density.unwrap_or(1.0),
        weight: cfg.weight.clone(),
        ..defaults
    };
    let suite: Vec<Inequality> = if !cfg.inequalities.is_empty() {
        cfg.inequalities.clone()
    } else if let Some(set) = &cfg.set {
        let s: Vec<Inequality> = Inequality::ALL
            .into_iter()
            .filter(|i| i.accepts(set))
            .collect();
        if s.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "no inequality applies to a {}",
                set.kind_name()
            )));
        }
        s
    } else {
        Inequality::ALL.to_vec()
    };

    let mut reports = Vec::with_capacity(suite.len());
    for ineq in suite {
        reports.push(verify_inequality(ineq, cfg.set.as_ref(), &options)?);
    }

    let mut hard = 0;
    let mut csv = String::from("inequality,exact,worst_ratio,violation_count,witness_ratio\n");
    for r in &reports {
        writeln!(
            csv,
            "{},{},{},{},{}",
            kebab(&r.inequality),
            r.exact,
            num(r.worst_ratio),
            r.violation_count,
            opt(r.witness.as_ref().map(|w| w.ratio))
        )
        .expect("string write");
        if r.exact && r.violation_count > 0 {
            hard += r.violation_count;
            if let Some(w) = &r.worst {
                eprintln!(
                    "eqm: {} violated in {} of {} trials; worst ratio {} at degree {}, point {}, witness coefficients {:?}",
                    kebab(&r.inequality),
                    r.violation_count,
                    r.trials,
                    w.ratio,
                    w.degree,
                    w.point,
                    w.coefficients
                );
            }
        }
    }
    Ok(Output {
        json: json!({
            "seed": cfg.seed,
            "trials": options.trials,
            "hard_violations": hard,
            "reports": reports,
        }),
        csv,
        sidecars: Vec::new(),
        exit: if hard > 0 { EXIT_VIOLATION } else { EXIT_OK },
    })
}

pub(crate) fn l2(cfg: &RunConfig) -> Result<Output> {
    let set = match cfg.require_set()? {
        SetDescription::Intervals(s) => s,
        other => {
            return Err(Error::InvalidArgument(format!(
                "L² ratios need an interval set, got {}",
                other.kind_name()
            )))
        }
    };
    let degrees = cfg.require_degrees()?;
    let weight = cfg
        .weight
        .clone()
        .unwrap_or_else(|| Weight::unweighted(set));
    weight.validate(set)?;
    let markov = match cfg.mode {
        L2Mode::Markov => Some(l2_markov_constant(set, &weight)?),
        _ => None,
    };
    let jacobi = cfg.mode == L2Mode::GradientBernstein
        && set.band_count() == 1
        && weight.exponents.len() == 2
        && weight.has_unit_h();

    let mut rows = Vec::new();
    let mut last = None;
    let mut csv = String::from("n,ratio,lambda,reference,relative\n");
    for &n in degrees {
        let r = l2_ratio_with_basis(set, &weight, &PolyBasis::algebraic_for(set, n)?, cfg.mode)?;
        let reference = match (&markov, jacobi) {
            (Some(f), _) => Some(f.scaled(n)),
            (None, true) => Some(l2_bernstein_jacobi(
                n as u32,
                weight.exponents[0],
                weight.exponents[1],
            )?),
            _ => None,
        };
        let relative = reference.map(|v| r.ratio / v);
        writeln!(
            csv,
            "{n},{},{},{},{}",
            num(r.ratio),
            num(r.lambda),
            opt(reference),
            opt(relative)
        )
        .expect("string write");
        rows.push(json!({
            "n": n,
            "ratio": r.ratio,
            "lambda": r.lambda,
            "reference": reference,
            "relative": relative,
        }));
        last = Some(r);
    }
    let mut json = json!({
        "set": SetDescription::Intervals(set.clone()).to_json_value(),
        "mode": cfg.mode,
        "weight": weight,
        "constant": markov,
        "rows": rows,
    });
    if !cfg.sweep {
        json["coefficients"] = json!(last.expect("one degree").coefficients);
    }
    Ok(Output {
        json,
        csv,
        sidecars: Vec::new(),
        exit: EXIT_OK,
    })
}
