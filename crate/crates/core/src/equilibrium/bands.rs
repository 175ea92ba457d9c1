//! Measures on a finite union of bands written per band as
//! `dμ = f_k(s) ds / √(1 - s²)`, where `s ∈ [-1, 1]` is the band's normalized
//! parameter and `f_k` is a Chebyshev series. The parameter is the real
//! coordinate on a line or the angle on the unit circle.

use std::f64::consts::{LN_2, PI};

use crate::numerics::chebyshev;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Line,
    UnitCircle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    /// Chebyshev coefficients of `f_k`.
    pub coeffs: Vec<f64>,
}

impl Band {
    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn to_local(&self, x: f64) -> f64 {
        (x - self.center()) / self.half_width()
    }

    pub fn weight(&self, s: f64) -> f64 {
        chebyshev::clenshaw(&self.coeffs, s)
    }

    /// Density with respect to the parameter (length or angle).
    pub fn density(&self, x: f64) -> f64 {
        let s = self.to_local(x);
        self.weight(s) / (self.half_width() * (1.0 - s * s).sqrt())
    }

    pub fn mass(&self) -> f64 {
        PI * self.coeffs.first().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandSystem {
    pub geometry: Geometry,
    pub bands: Vec<Band>,
}

/// Chebyshev interpolation of `f` on [-1, 1], doubling the sample count
/// until the trailing coefficients fall below `1e-15` of the largest one.
pub fn interpolate<F: Fn(f64) -> f64>(f: F) -> Vec<f64> {
    let mut m = 32;
    loop {
        let pts = chebyshev::points_first_kind(m);
        let samples: Vec<f64> = pts.iter().map(|&s| f(s)).collect();
        let c = chebyshev::coefficients_from_first_kind(&samples);
        let scale = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let tail = c[m - 4..].iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if tail <= 1e-15 * scale || m >= 2048 {
            let mut keep = m;
            while keep > 1 && c[keep - 1].abs() <= 1e-17 * scale {
                keep -= 1;
            }
            return c[..keep].to_vec();
        }
        m *= 2;
    }
}

/// Distance between two points given by parameters.
fn distance(geometry: Geometry, x: f64, t: f64) -> f64 {
    match geometry {
        Geometry::Line => (x - t).abs(),
        Geometry::UnitCircle => 2.0 * (0.5 * (x - t)).sin().abs(),
    }
}

/// Distance in parameter space from `x` to the band, periodic on the circle.
fn parameter_gap(geometry: Geometry, x: f64, band: &Band) -> f64 {
    let d = |y: f64| {
        if y < band.lo {
            band.lo - y
        } else if y > band.hi {
            y - band.hi
        } else {
            0.0
        }
    };
    match geometry {
        Geometry::Line => d(x),
        Geometry::UnitCircle => [-2.0 * PI, 0.0, 2.0 * PI]
            .iter()
            .map(|s| d(x + s))
            .fold(f64::INFINITY, f64::min),
    }
}

fn nodes_for(relative_gap: f64) -> usize {
    let m = 32.0 + 14.0 / relative_gap.max(1e-12).sqrt();
    (m.ceil() as usize).clamp(64, 1 << 14)
}

enum Split {
    /// `x` lies in the band at local coordinate `sx`; `nodes` for the smooth
    /// correction on the circle (zero on the line).
    Own {
        sx: f64,
        nodes: usize,
    },
    Other {
        nodes: usize,
    },
}

/// Gauss-Chebyshev node `cos((2i+1)π/(2m))`.
fn node(i: usize, m: usize) -> f64 {
    ((2 * i + 1) as f64 * PI / (2 * m) as f64).cos()
}

/// `log(2 sin(|d|/2) / |d|)`, the smooth part of the chordal log-distance.
fn circle_smooth_log(d: f64) -> f64 {
    if d == 0.0 {
        0.0
    } else {
        (2.0 * (0.5 * d).sin().abs() / d.abs()).ln()
    }
}

fn fill_values(t: &mut [f64], s: f64) {
    if let Some(first) = t.first_mut() {
        *first = 1.0;
    }
    if t.len() > 1 {
        t[1] = s;
    }
    for j in 2..t.len() {
        t[j] = 2.0 * s * t[j - 1] - t[j - 2];
    }
}

impl BandSystem {
    /// Whether `x` lies in band `k`, handling angles modulo 2π.
    fn local_in(&self, k: usize, x: f64) -> Option<f64> {
        let b = &self.bands[k];
        let shifts: &[f64] = match self.geometry {
            Geometry::Line => &[0.0],
            Geometry::UnitCircle => &[0.0, -2.0 * PI, 2.0 * PI],
        };
        shifts
            .iter()
            .map(|s| x + s)
            .find(|&y| b.lo <= y && y <= b.hi)
            .map(|y| b.to_local(y))
    }

    /// `∫ log(1/|x - z_k(s)|) T_j(s) ds/√(1-s²)` for `j = 0..count`.
    pub fn kernel_moments(&self, k: usize, x: f64, count: usize) -> Vec<f64> {
        let mut out = vec![0.0; count];
        let mut tj = vec![0.0; count];
        let add = |out: &mut [f64], tj: &mut [f64], s: f64, val: f64| {
            fill_values(tj, s);
            for (o, t) in out.iter_mut().zip(tj.iter()) {
                *o += val * t;
            }
        };
        match self.split(k, x) {
            Split::Own { sx, nodes } => {
                let h = self.bands[k].half_width();
                fill_values(&mut tj, sx);
                for (j, o) in out.iter_mut().enumerate() {
                    *o = if j == 0 {
                        PI * (LN_2 - h.ln())
                    } else {
                        PI / j as f64 * tj[j]
                    };
                }
                for i in 0..nodes {
                    let s = node(i, nodes);
                    let val = -circle_smooth_log(h * (sx - s)) * PI / nodes as f64;
                    add(&mut out, &mut tj, s, val);
                }
            }
            Split::Other { nodes } => {
                for i in 0..nodes {
                    let s = node(i, nodes);
                    let val = self.far_log(k, x, s) * PI / nodes as f64;
                    add(&mut out, &mut tj, s, val);
                }
            }
        }
        out
    }

    /// Contribution of band `k` to the potential at `x`.
    pub fn band_potential(&self, k: usize, x: f64) -> f64 {
        let band = &self.bands[k];
        match self.split(k, x) {
            Split::Own { sx, nodes } => {
                let h = band.half_width();
                let c = &band.coeffs;
                let mut tj = vec![0.0; c.len()];
                fill_values(&mut tj, sx);
                let mut u = c.first().copied().unwrap_or(0.0) * PI * (LN_2 - h.ln());
                for j in 1..c.len() {
                    u += c[j] * PI / j as f64 * tj[j];
                }
                for i in 0..nodes {
                    let s = node(i, nodes);
                    u -= circle_smooth_log(h * (sx - s)) * band.weight(s) * PI / nodes as f64;
                }
                u
            }
            Split::Other { nodes } => {
                (0..nodes)
                    .map(|i| {
                        let s = node(i, nodes);
                        self.far_log(k, x, s) * band.weight(s)
                    })
                    .sum::<f64>()
                    * PI
                    / nodes as f64
            }
        }
    }

    fn far_log(&self, k: usize, x: f64, s: f64) -> f64 {
        let b = &self.bands[k];
        -distance(self.geometry, x, b.center() + b.half_width() * s).ln()
    }

    fn split(&self, k: usize, x: f64) -> Split {
        let band = &self.bands[k];
        let h = band.half_width();
        match self.local_in(k, x) {
            Some(sx) => {
                let nodes = match self.geometry {
                    Geometry::Line => 0,
                    Geometry::UnitCircle => {
                        let reach = h * (1.0 + sx.abs());
                        nodes_for(((2.0 * PI - reach) / h).max(1e-12))
                    }
                };
                Split::Own { sx, nodes }
            }
            None => Split::Other {
                nodes: nodes_for(parameter_gap(self.geometry, x, band) / h),
            },
        }
    }

    /// Logarithmic potential `∫ log(1/|x - t|) dμ(t)` at parameter `x`.
    pub fn potential(&self, x: f64) -> f64 {
        (0..self.bands.len())
            .map(|k| self.band_potential(k, x))
            .sum()
    }

    pub fn mass(&self) -> f64 {
        self.bands.iter().map(Band::mass).sum()
    }

    pub fn band_containing(&self, x: f64) -> Option<(usize, f64)> {
        (0..self.bands.len()).find_map(|k| self.local_in(k, x).map(|s| (k, s)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_measure_potential_is_log_two() {
        let sys = BandSystem {
            geometry: Geometry::Line,
            bands: vec![Band {
                lo: -1.0,
                hi: 1.0,
                coeffs: vec![1.0 / PI],
            }],
        };
        for x in [-0.9, -0.1, 0.0, 0.5, 0.99] {
            assert!((sys.potential(x) - LN_2).abs() < 1e-14);
        }
        // off the set the potential drops below log 2
        assert!(sys.potential(1.5) < LN_2);
        assert!((sys.mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn off_band_moments_match_direct_quadrature() {
        let sys = BandSystem {
            geometry: Geometry::Line,
            bands: vec![Band {
                lo: 0.0,
                hi: 1.0,
                coeffs: vec![1.0],
            }],
        };
        // ∫_0^π -log|x - (0.5 + 0.5 cos θ)| cos(2θ) dθ with a fine midpoint sum
        let x = 1.3;
        let n = 200_000;
        let direct: f64 = (0..n)
            .map(|i| {
                let th = (i as f64 + 0.5) * PI / n as f64;
                -(x - 0.5 - 0.5 * th.cos()).abs().ln() * (2.0 * th).cos() * PI / n as f64
            })
            .sum();
        let m = sys.kernel_moments(0, x, 3);
        assert!((m[2] - direct).abs() < 1e-9);
    }
}
