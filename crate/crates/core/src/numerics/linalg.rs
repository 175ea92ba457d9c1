//! Small dense linear algebra: LU, Cholesky, cyclic Jacobi, tridiagonal QL.

use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged matrix rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scaled(&self, c: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..i).all(|j| {
                    let (a, b) = (self[(i, j)], self[(j, i)]);
                    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
                })
            })
    }

    fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn new(a: &Matrix) -> Result<Self> {
        if a.rows != a.cols {
            return Err(Error::invalid("LU needs a square matrix"));
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].abs().total_cmp(&lu[(j, k)].abs()))
                .unwrap_or(k);
            if lu[(p, k)] == 0.0 {
                return Err(Error::numeric("singular matrix in LU"));
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(p * n + j, k * n + j);
                }
                perm.swap(p, k);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu.data[i * n + j] -= f * lu.data[k * n + j];
                    }
                }
            }
        }
        Ok(Lu { lu, perm, sign })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s = dot(&self.lu.row(i)[..i], &x[..i]);
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s = dot(&self.lu.row(i)[i + 1..], &x[i + 1..]);
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        x
    }

    pub fn determinant(&self) -> f64 {
        (0..self.lu.rows).fold(self.sign, |acc, i| acc * self.lu[(i, i)])
    }

    pub fn inverse(&self) -> Matrix {
        let n = self.lu.rows;
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// 1-norm condition number through an explicit inverse.
pub fn condition_number(a: &Matrix, lu: &Lu) -> f64 {
    a.norm_one() * lu.inverse().norm_one()
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(b: &Matrix) -> Result<Matrix> {
    if b.rows != b.cols {
        return Err(Error::invalid("Cholesky needs a square matrix"));
    }
    let n = b.rows;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let d = b[(j, j)] - dot(&l.row(j)[..j], &l.row(j)[..j]);
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::invalid(
                "matrix is not positive definite (Cholesky failed)",
            ));
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let s = b[(i, j)] - dot(&l.row(i)[..j], &l.row(j)[..j]);
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Eigenvalues (and optionally eigenvectors as columns) of a symmetric
/// matrix by cyclic Jacobi rotations.
pub fn jacobi_eigen(a: &Matrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Matrix>)> {
    if a.rows != a.cols {
        return Err(Error::invalid("Jacobi eigensolver needs a square matrix"));
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut v = want_vectors.then(|| Matrix::identity(n));
    let scale: f64 = m.data.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            let eig = (0..n).map(|i| m[(i, i)]).collect();
            return Ok((eig, v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    Err(Error::numeric("Jacobi eigensolver did not converge"))
}

/// Implicit QL on a symmetric tridiagonal matrix. `diag` receives the
/// eigenvalues, `off[i]` couples i and i+1 (last entry ignored), and
/// `first` (initially e_0) receives the first components of the
/// normalized eigenvectors.
pub fn tridiagonal_eigen(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::numeric("tridiagonal QL did not converge"));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let f2 = first[i + 1];
                first[i + 1] = s * first[i] + c * f2;
                first[i] = c * first[i] - s * f2;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Largest generalized eigenvalue of the pencil (A, B) with B symmetric
/// positive definite, plus its B-normalized eigenvector.
pub fn symmetric_eig_max_pair(a: &Matrix, b: &Matrix) -> Result<(f64, Vec<f64>)> {
    if a.rows != a.cols || b.rows != b.cols || a.rows != b.rows {
        return Err(Error::invalid(
            "pencil matrices must be square and equal size",
        ));
    }
    let n = a.rows;
    if n == 0 {
        return Err(Error::invalid("empty pencil"));
    }
    let l = cholesky(b)?;
    // C = L^{-1} A L^{-T}
    let mut x = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let s = a[(i, j)] - (0..i).map(|k| l[(i, k)] * x[(k, j)]).sum::<f64>();
            x[(i, j)] = s / l[(i, i)];
        }
    }
    let mut c = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s = x[(i, j)] - (0..j).map(|k| c[(i, k)] * l[(j, k)]).sum::<f64>();
            c[(i, j)] = s / l[(j, j)];
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (c[(i, j)] + c[(j, i)]);
            c[(i, j)] = avg;
            c[(j, i)] = avg;
        }
    }
    let (eig, vecs) = jacobi_eigen(&c, true)?;
    let (imax, &lmax) = eig
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::numeric("no eigenvalues"))?;
    let vecs = vecs.expect("vectors requested");
    let y: Vec<f64> = (0..n).map(|i| vecs[(i, imax)]).collect();
    // back-substitute L^T v = y
    let mut v = vec![0.0; n];
    for i in (0..n).rev() {
        let s = y[i] - (i + 1..n).map(|k| l[(k, i)] * v[k]).sum::<f64>();
        v[i] = s / l[(i, i)];
    }
    Ok((lmax, v))
}

/// Largest λ with det(A − λB) = 0.
pub fn symmetric_eig_max(a: &Matrix, b: &Matrix) -> Result<f64> {
    symmetric_eig_max_pair(a, b).map(|(l, _)| l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_pencil() {
        let i = Matrix::identity(4);
        assert!((symmetric_eig_max(&i, &i).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_pencil() {
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let b = Matrix::identity(2);
        assert!((symmetric_eig_max(&a, &b).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn indefinite_b_rejected() {
        let a = Matrix::identity(2);
        let b = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            symmetric_eig_max(&a, &b),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn lu_solves_and_determinant() {
        let a = Matrix::from_rows(&[
            vec![0.0, 2.0, 1.0],
            vec![1.0, 1.0, 0.0],
            vec![3.0, 0.0, 1.0],
        ])
        .unwrap();
        let lu = Lu::new(&a).unwrap();
        let x = lu.solve(&[3.0, 2.0, 4.0]);
        for (xi, e) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert!((xi - e).abs() < 1e-14);
        }
        assert!((lu.determinant() - (-5.0)).abs() < 1e-13);
    }

    #[test]
    fn tridiagonal_matches_jacobi() {
        let d = [2.0, -1.0, 0.5, 3.0];
        let e = [0.3, 0.7, 1.1];
        let full = Matrix::from_fn(4, 4, |i, j| {
            if i == j {
                d[i]
            } else if i + 1 == j {
                e[i]
            } else if j + 1 == i {
                e[j]
            } else {
                0.0
            }
        });
        let (mut ej, vj) = jacobi_eigen(&full, true).unwrap();
        let vj = vj.unwrap();
        let mut dd = d.to_vec();
        let mut ee = e.to_vec();
        ee.push(0.0);
        let mut first = vec![1.0, 0.0, 0.0, 0.0];
        tridiagonal_eigen(&mut dd, &mut ee, &mut first).unwrap();
        let mut pairs: Vec<_> = dd
            .iter()
            .copied()
            .zip(first.iter().map(|v| v * v))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut jp: Vec<_> = (0..4).map(|i| (ej[i], vj[(0, i)].powi(2))).collect();
        jp.sort_by(|a, b| a.0.total_cmp(&b.0));
        ej.sort_by(f64::total_cmp);
        for (p, q) in pairs.iter().zip(&jp) {
            assert!((p.0 - q.0).abs() < 1e-13);
            assert!((p.1 - q.1).abs() < 1e-13);
        }
    }
}
