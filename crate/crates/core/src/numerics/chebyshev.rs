//! Chebyshev polynomial utilities.

use std::f64::consts::PI;

/// `T_0(x), …, T_n(x)`.
pub fn values(n: usize, x: f64) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(1.0);
    if n >= 1 {
        t.push(x);
    }
    for j in 2..=n {
        t.push(2.0 * x * t[j - 1] - t[j - 2]);
    }
    t
}

/// k-th derivatives `T_0^{(k)}(x), …, T_n^{(k)}(x)` from the differentiated
/// recurrence `T_{j+1}^{(k)} = 2x T_j^{(k)} + 2k T_j^{(k-1)} - T_{j-1}^{(k)}`.
pub fn derivatives(n: usize, k: usize, x: f64) -> Vec<f64> {
    let mut lower = values(n, x);
    for order in 1..=k {
        let mut cur = vec![0.0; n + 1];
        if n >= 1 {
            cur[1] = if order == 1 { 1.0 } else { 0.0 };
        }
        for j in 1..n {
            cur[j + 1] = 2.0 * x * cur[j] + 2.0 * order as f64 * lower[j] - cur[j - 1];
        }
        lower = cur;
    }
    lower
}

/// Evaluates `Σ c_j T_j(x)` by Clenshaw's recurrence.
pub fn clenshaw(coeffs: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coeffs.first().copied().unwrap_or(0.0) + x * b1 - b2
}

/// First-kind Chebyshev points `cos((2i+1)π/(2m))`, increasing.
pub fn points_first_kind(m: usize) -> Vec<f64> {
    (0..m)
        .map(|i| -(((2 * i + 1) as f64) * PI / (2 * m) as f64).cos())
        .collect()
}

/// Chebyshev-Lobatto points `-cos(iπ/(m-1))`, increasing, endpoints included.
pub fn points_lobatto(m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![0.0];
    }
    (0..m)
        .map(|i| -(i as f64 * PI / (m - 1) as f64).cos())
        .collect()
}

/// Interpolation coefficients from samples at [`points_first_kind`]`(m)`.
pub fn coefficients_from_first_kind(samples: &[f64]) -> Vec<f64> {
    let m = samples.len();
    let mf = m as f64;
    // sample i sits at angle π - (2i+1)π/(2m); cos(jθ_i) only takes the
    // values cos(πr/(2m)), r = 0..4m
    let table: Vec<f64> = (0..4 * m)
        .map(|r| (r as f64 * PI / (2.0 * mf)).cos())
        .collect();
    (0..m)
        .map(|j| {
            let s: f64 = samples
                .iter()
                .enumerate()
                .map(|(i, &f)| {
                    let r = (j * (2 * m - 2 * i - 1)) % (4 * m);
                    f * table[r]
                })
                .sum();
            if j == 0 {
                s / mf
            } else {
                2.0 * s / mf
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_recurrence_matches_closed_forms() {
        // T_3 = 4x^3 - 3x, T_3' = 12x^2 - 3, T_3'' = 24x, T_3''' = 24
        let x = 0.37;
        assert!((derivatives(3, 1, x)[3] - (12.0 * x * x - 3.0)).abs() < 1e-14);
        assert!((derivatives(3, 2, x)[3] - 24.0 * x).abs() < 1e-14);
        assert!((derivatives(3, 3, x)[3] - 24.0).abs() < 1e-13);
        // T_n'(1) = n^2
        let d = derivatives(10, 1, 1.0);
        for (j, v) in d.iter().enumerate() {
            assert!((v - (j * j) as f64).abs() < 1e-11);
        }
    }

    #[test]
    fn interpolation_roundtrip() {
        let f = |x: f64| (2.0 * x).exp() / (2.0 + x);
        let pts = points_first_kind(40);
        let c = coefficients_from_first_kind(&pts.iter().map(|&x| f(x)).collect::<Vec<_>>());
        for &x in &[-0.9, -0.2, 0.0, 0.55, 1.0] {
            assert!((clenshaw(&c, x) - f(x)).abs() < 1e-13);
        }
    }
}
