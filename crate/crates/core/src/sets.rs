//! Compact sets: unions of real intervals, unions of circular arcs, circles,
//! polynomial lemniscates and 2π-periodic interval unions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// `∪ [a_{2i}, a_{2i+1}]` with strictly increasing endpoints (0-based).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalUnion {
    endpoints: Vec<f64>,
}

impl IntervalUnion {
    pub fn new(endpoints: Vec<f64>) -> Result<Self> {
        validate_increasing(&endpoints, "interval endpoints")?;
        Ok(IntervalUnion { endpoints })
    }

    /// Single band `[a, b]`.
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn endpoints(&self) -> &[f64] {
        &self.endpoints
    }

    pub fn band_count(&self) -> usize {
        self.endpoints.len() / 2
    }

    pub fn bands(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.endpoints.chunks_exact(2).map(|c| (c[0], c[1]))
    }

    pub fn gaps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.endpoints[1..self.endpoints.len() - 1]
            .chunks_exact(2)
            .map(|c| (c[0], c[1]))
    }

    /// Smallest interval containing the set.
    pub fn hull(&self) -> (f64, f64) {
        (self.endpoints[0], *self.endpoints.last().expect("nonempty"))
    }

    pub fn total_length(&self) -> f64 {
        self.bands().map(|(a, b)| b - a).sum()
    }

    /// Band index containing `x`, if any.
    pub fn band_of(&self, x: f64) -> Option<usize> {
        self.bands().position(|(a, b)| a <= x && x <= b)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.endpoints.len();
        (0..n).all(|i| (self.endpoints[i] + self.endpoints[n - 1 - i]).abs() <= tol)
    }
}

/// Arcs `{e^{it} : t ∈ [α_{2k}, α_{2k+1}]}` with `-π ≤ α_0 < … < α_{2m-1} < π`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcUnion {
    angles: Vec<f64>,
}

impl ArcUnion {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        validate_increasing(&angles, "arc angles")?;
        if angles[0] < -PI || *angles.last().expect("nonempty") >= PI {
            return Err(Error::invalid(
                "arc angles must lie in [-π, π); the full circle is a Circle, not an ArcUnion",
            ));
        }
        Ok(ArcUnion { angles })
    }

    /// Symmetric single arc from `e^{-iβ}` to `e^{iβ}`.
    pub fn symmetric(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < PI) {
            return Err(Error::invalid(format!(
                "arc half-angle must lie in (0, π), got {beta}"
            )));
        }
        Self::new(vec![-beta, beta])
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn arc_count(&self) -> usize {
        self.angles.len() / 2
    }

    pub fn arcs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.angles.chunks_exact(2).map(|c| (c[0], c[1]))
    }

    pub fn endpoint(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.angles[j])
    }

    /// Arc index containing angle `t` (taken modulo 2π).
    pub fn arc_of(&self, t: f64) -> Option<usize> {
        let t = wrap_angle(t);
        self.arcs().position(|(a, b)| a <= t && t <= b)
    }

    pub fn total_angle(&self) -> f64 {
        self.arcs().map(|(a, b)| b - a).sum()
    }
}

/// Circle of radius `radius` around `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Circle {
    pub radius: f64,
    pub center: Complex64,
}

impl Circle {
    pub fn new(radius: f64, center: Complex64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid(format!(
                "circle radius must be positive, got {radius}"
            )));
        }
        Ok(Circle { radius, center })
    }

    pub fn unit() -> Self {
        Circle {
            radius: 1.0,
            center: Complex64::new(0.0, 0.0),
        }
    }

    /// `center + r·e^{it}`.
    pub fn point_at(&self, t: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, t)
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        ((z - self.center).norm() - self.radius).abs() <= tol * self.radius.max(1.0)
    }
}

/// Level set `{z : |T(z)| = 1}` of a polynomial given by ascending coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemniscate {
    coeffs: Vec<Complex64>,
}

impl Lemniscate {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let mut coeffs = coeffs;
        if coeffs.len() < 2 {
            return Err(Error::invalid(
                "lemniscate polynomial must have degree at least 1",
            ));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::invalid("lemniscate coefficients must be finite"));
        }
        if coeffs.last().is_none_or(|c| c.norm() == 0.0) {
            return Err(Error::invalid(
                "lemniscate leading coefficient must be nonzero",
            ));
        }
        coeffs.shrink_to_fit();
        Ok(Lemniscate { coeffs })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `(T(z), T'(z))` by Horner.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            d = d * z + p;
            p = p * z + c;
        }
        (p, d)
    }
}

/// A 2π-periodic set given by one period in `[-π, π)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicSet {
    base: IntervalUnion,
}

impl PeriodicSet {
    pub fn new(endpoints: Vec<f64>) -> Result<Self> {
        // same constraints as the arc image
        ArcUnion::new(endpoints.clone())?;
        Ok(PeriodicSet {
            base: IntervalUnion::new(endpoints)?,
        })
    }

    /// `[-β, β]`.
    pub fn symmetric(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < PI) {
            return Err(Error::invalid(format!(
                "periodic half-width must lie in (0, π), got {beta}"
            )));
        }
        Self::new(vec![-beta, beta])
    }

    pub fn base(&self) -> &IntervalUnion {
        &self.base
    }
}

/// Γ_E: the image of a periodic set on the unit circle under t ↦ e^{it}.
pub fn gamma_of(periodic: &PeriodicSet) -> ArcUnion {
    ArcUnion {
        angles: periodic.base.endpoints.clone(),
    }
}

/// Endpoints mapped by `x ↦ scale·x + shift`, reordered when `scale < 0`.
pub fn affine_image(set: &IntervalUnion, scale: f64, shift: f64) -> Result<IntervalUnion> {
    if scale == 0.0 || !scale.is_finite() || !shift.is_finite() {
        return Err(Error::invalid("affine scale must be finite and nonzero"));
    }
    let mut e: Vec<f64> = set.endpoints.iter().map(|&a| scale * a + shift).collect();
    if scale < 0.0 {
        e.reverse();
    }
    IntervalUnion::new(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Location {
    Interior,
    /// 0-based endpoint index.
    Endpoint(usize),
    Gap,
    Outside,
}

pub fn locate(set: &IntervalUnion, x: f64) -> Location {
    if let Some(j) = set.endpoints.iter().position(|&a| a == x) {
        return Location::Endpoint(j);
    }
    let (lo, hi) = set.hull();
    if x < lo || x > hi {
        Location::Outside
    } else if set.band_of(x).is_some() {
        Location::Interior
    } else {
        Location::Gap
    }
}

/// The part of the set strictly closer to endpoint `j` than to any other endpoint.
///
/// For intervals the result is a list of `[lo, hi]` pieces; for arcs the
/// pieces are angle ranges (possibly extending past ±π) and the distance is
/// chordal, which orders points exactly as angular distance does.
pub fn nearest_endpoint_region_intervals(set: &IntervalUnion, j: usize) -> Result<Vec<(f64, f64)>> {
    let e = &set.endpoints;
    if j >= e.len() {
        return Err(Error::invalid(format!("endpoint index {j} out of range")));
    }
    let lo = if j == 0 {
        f64::NEG_INFINITY
    } else {
        0.5 * (e[j - 1] + e[j])
    };
    let hi = if j + 1 == e.len() {
        f64::INFINITY
    } else {
        0.5 * (e[j] + e[j + 1])
    };
    Ok(set
        .bands()
        .filter_map(|(a, b)| {
            let (l, h) = (a.max(lo), b.min(hi));
            (l < h).then_some((l, h))
        })
        .collect())
}

pub fn nearest_endpoint_region_arcs(set: &ArcUnion, j: usize) -> Result<Vec<(f64, f64)>> {
    let a = &set.angles;
    let n = a.len();
    if j >= n {
        return Err(Error::invalid(format!("endpoint index {j} out of range")));
    }
    let prev = a[(j + n - 1) % n];
    let next = a[(j + 1) % n];
    let lo = a[j] - 0.5 * (a[j] - prev).rem_euclid(TWO_PI);
    let hi = a[j] + 0.5 * (next - a[j]).rem_euclid(TWO_PI);
    let mut out = Vec::new();
    for (s, e) in set.arcs() {
        for shift in [-TWO_PI, 0.0, TWO_PI] {
            let (l, h) = ((s + shift).max(lo), (e + shift).min(hi));
            if l < h {
                out.push((l, h));
            }
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(out)
}

/// Angle reduced to `[-π, π)`.
pub fn wrap_angle(t: f64) -> f64 {
    if (-PI..PI).contains(&t) {
        // avoid round-off on values already in range
        return t;
    }
    (t + PI).rem_euclid(TWO_PI) - PI
}

fn validate_increasing(v: &[f64], what: &str) -> Result<()> {
    if v.len() < 2 || !v.len().is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "{what}: need an even, nonzero number of values, got {}",
            v.len()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("{what}: values must be finite")));
    }
    if let Some(w) = v.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::invalid(format!(
            "{what}: must be strictly increasing ({} then {}); touching bands are not merged",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Any of the supported set descriptions, in the JSON form
/// `{"type": "intervals" | "arcs" | "circle" | "lemniscate" | "periodic", ...}`.
#[derive(Debug, Clone, PartialEq)]
pub enum SetDescription {
    Intervals(IntervalUnion),
    Arcs(ArcUnion),
    Circle(Circle),
    Lemniscate(Lemniscate),
    Periodic(PeriodicSet),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffJson {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum SetJson {
    Intervals {
        endpoints: Vec<f64>,
    },
    Arcs {
        angles: Vec<f64>,
    },
    Circle {
        r: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<[f64; 2]>,
    },
    Lemniscate {
        coeffs: Vec<CoeffJson>,
    },
    Periodic {
        endpoints: Vec<f64>,
    },
}

impl SetDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SetJson = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("bad set description: {e}")))?;
        Self::from_raw(raw)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        let raw: SetJson = serde_json::from_value(value)
            .map_err(|e| Error::invalid(format!("bad set description: {e}")))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: SetJson) -> Result<Self> {
        Ok(match raw {
            SetJson::Intervals { endpoints } => Self::Intervals(IntervalUnion::new(endpoints)?),
            SetJson::Arcs { angles } => Self::Arcs(ArcUnion::new(angles)?),
            SetJson::Circle { r, center } => {
                let c = center.map_or(Complex64::new(0.0, 0.0), |[x, y]| Complex64::new(x, y));
                Self::Circle(Circle::new(r, c)?)
            }
            SetJson::Lemniscate { coeffs } => Self::Lemniscate(Lemniscate::new(
                coeffs
                    .into_iter()
                    .map(|c| match c {
                        CoeffJson::Real(x) => Complex64::new(x, 0.0),
                        CoeffJson::Complex([x, y]) => Complex64::new(x, y),
                    })
                    .collect(),
            )?),
            SetJson::Periodic { endpoints } => Self::Periodic(PeriodicSet::new(endpoints)?),
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let raw = match self {
            Self::Intervals(s) => SetJson::Intervals {
                endpoints: s.endpoints.clone(),
            },
            Self::Arcs(s) => SetJson::Arcs {
                angles: s.angles.clone(),
            },
            Self::Circle(c) => SetJson::Circle {
                r: c.radius,
                center: (c.center.norm() != 0.0).then_some([c.center.re, c.center.im]),
            },
            Self::Lemniscate(l) => SetJson::Lemniscate {
                coeffs: l
                    .coeffs
                    .iter()
                    .map(|c| {
                        if c.im == 0.0 {
                            CoeffJson::Real(c.re)
                        } else {
                            CoeffJson::Complex([c.re, c.im])
                        }
                    })
                    .collect(),
            },
            Self::Periodic(p) => SetJson::Periodic {
                endpoints: p.base.endpoints.clone(),
            },
        };
        serde_json::to_value(raw).expect("set descriptions serialize")
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Intervals(_) => "intervals",
            Self::Arcs(_) => "arcs",
            Self::Circle(_) => "circle",
            Self::Lemniscate(_) => "lemniscate",
            Self::Periodic(_) => "periodic",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_touching_and_unsorted() {
        assert!(IntervalUnion::new(vec![0.0, 1.0, 1.0, 2.0]).is_err());
        assert!(IntervalUnion::new(vec![1.0, 0.0]).is_err());
        assert!(IntervalUnion::new(vec![0.0, 1.0, 2.0]).is_err());
        assert!(IntervalUnion::new(vec![]).is_err());
    }

    #[test]
    fn gamma_of_symmetric_interval() {
        let p = PeriodicSet::symmetric(PI / 2.0).unwrap();
        let g = gamma_of(&p);
        assert_eq!(g.angles(), &[-PI / 2.0, PI / 2.0]);
        assert!((g.endpoint(1) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn full_period_rejected() {
        assert!(PeriodicSet::new(vec![-PI, PI]).is_err());
    }

    #[test]
    fn two_symmetric_arcs() {
        let p = PeriodicSet::new(vec![-1.0, -0.5, 0.5, 1.0]).unwrap();
        let g = gamma_of(&p);
        assert_eq!(g.arc_count(), 2);
        assert!((g.endpoint(0).conj() - g.endpoint(3)).norm() < 1e-15);
    }

    #[test]
    fn affine_examples() {
        let e = IntervalUnion::interval(-1.0, 1.0).unwrap();
        assert_eq!(
            affine_image(&e, 2.0, 0.0).unwrap().endpoints(),
            &[-2.0, 2.0]
        );
        let u = IntervalUnion::interval(0.0, 1.0).unwrap();
        assert_eq!(
            affine_image(&u, -1.0, 0.0).unwrap().endpoints(),
            &[-1.0, -0.0]
        );
        let two = IntervalUnion::new(vec![0.0, 1.0, 2.0, 4.0]).unwrap();
        let s = affine_image(&two, 3.0, 0.0).unwrap();
        assert_eq!(s.gaps().next().unwrap(), (3.0, 6.0));
        assert!(affine_image(&two, 0.0, 1.0).is_err());
    }

    #[test]
    fn locate_examples() {
        let e = IntervalUnion::interval(-1.0, 1.0).unwrap();
        assert_eq!(locate(&e, 0.0), Location::Interior);
        assert_eq!(locate(&e, 1.0), Location::Endpoint(1));
        assert_eq!(locate(&e, 3.0), Location::Outside);
        let two = IntervalUnion::new(vec![-1.0, -0.5, 0.5, 1.0]).unwrap();
        assert_eq!(locate(&two, 0.0), Location::Gap);
    }

    #[test]
    fn nearest_region_examples() {
        let e = IntervalUnion::interval(-1.0, 1.0).unwrap();
        assert_eq!(
            nearest_endpoint_region_intervals(&e, 0).unwrap(),
            vec![(-1.0, 0.0)]
        );
        let two = IntervalUnion::new(vec![0.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!(
            nearest_endpoint_region_intervals(&two, 2).unwrap(),
            vec![(2.0, 3.0)]
        );
        let arc = ArcUnion::symmetric(1.2).unwrap();
        let r = nearest_endpoint_region_arcs(&arc, 1).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].0.abs() < 1e-15 && (r[0].1 - 1.2).abs() < 1e-15);
    }

    #[test]
    fn json_roundtrip() {
        for text in [
            r#"{"type":"intervals","endpoints":[-1,-0.5,0.5,1]}"#,
            r#"{"type":"arcs","angles":[-2,2]}"#,
            r#"{"type":"circle","r":2}"#,
            r#"{"type":"lemniscate","coeffs":[0,0,1]}"#,
            r#"{"type":"periodic","endpoints":[-1,1]}"#,
        ] {
            let s = SetDescription::from_json(text).unwrap();
            let back = SetDescription::from_value(s.to_json_value()).unwrap();
            assert_eq!(s, back);
        }
        assert!(SetDescription::from_json(r#"{"type":"intervals","endpoints":[1,0]}"#).is_err());
        assert!(SetDescription::from_json(r#"{"type":"blob"}"#).is_err());
    }
}
