//! Minimal dense matrix support: products, LU solves with partial pivoting,
//! and a Perron-root estimate. Everything here stays at paper-example sizes
//! (a few thousand unknowns at most), so a plain dense implementation is the
//! right tool.

use crate::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Mat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = self[(i, k)];
                if v == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += v * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&other.data) {
            *o += v;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Mat {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= s;
        }
        out
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_diff(&self, other: &Mat) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `x * M` for a row vector `x`.
    pub fn row_vec_mul(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for j in 0..self.cols {
                out[j] += xi * self[(i, j)];
            }
        }
        out
    }

    /// `M * y` for a column vector `y`.
    pub fn mat_vec_mul(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * y[j]).sum())
            .collect()
    }

    /// Solves `self * x = b` by LU with partial pivoting. Returns the
    /// solution and a crude condition estimate (max |pivot| / min |pivot|).
    pub fn solve(&self, b: &[f64]) -> Result<(Vec<f64>, f64)> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut x = b.to_vec();
        let mut max_piv: f64 = 0.0;
        let mut min_piv = f64::INFINITY;
        for col in 0..n {
            let (prow, pval) = (col..n)
                .map(|r| (r, a[r * n + col].abs()))
                .fold((col, 0.0), |acc, it| if it.1 > acc.1 { it } else { acc });
            if pval == 0.0 {
                return Err(Error::SingularSystem);
            }
            max_piv = max_piv.max(pval);
            min_piv = min_piv.min(pval);
            if prow != col {
                for j in 0..n {
                    a.swap(prow * n + j, col * n + j);
                }
                x.swap(prow, col);
            }
            let piv = a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / piv;
                if f == 0.0 {
                    continue;
                }
                a[r * n + col] = 0.0;
                for j in col + 1..n {
                    a[r * n + j] -= f * a[col * n + j];
                }
                x[r] -= f * x[col];
            }
        }
        for col in (0..n).rev() {
            x[col] /= a[col * n + col];
            let xc = x[col];
            for r in 0..col {
                x[r] -= a[r * n + col] * xc;
            }
        }
        Ok((x, max_piv / min_piv))
    }

    /// Perron-root estimate for a nonnegative matrix by power iteration.
    pub fn spectral_radius_nonneg(&self, tol: f64, max_iter: usize) -> f64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 0.0;
        }
        let mut v = vec![1.0; n];
        let mut lambda = 0.0;
        for _ in 0..max_iter {
            let w = self.mat_vec_mul(&v);
            let norm: f64 = w.iter().map(|x| x.abs()).sum();
            if norm == 0.0 {
                return 0.0;
            }
            // Rayleigh-style estimate against the one-norm.
            let next = norm / v.iter().map(|x| x.abs()).sum::<f64>();
            let done = (next - lambda).abs() < tol;
            lambda = next;
            v = w.iter().map(|x| x / norm).collect();
            if done {
                break;
            }
        }
        lambda
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `pi * Q = 0` with `sum(pi * weight) = 1` by replacing the last
/// equation of the transposed system with the normalization row.
///
/// `weights` defaults to all ones when `None`. Returns `(pi, condition)`.
pub fn left_null_normalized(q: &Mat, weights: Option<&[f64]>) -> Result<(Vec<f64>, f64)> {
    assert_eq!(q.rows, q.cols);
    let n = q.rows;
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(j, i)] = q[(i, j)];
        }
    }
    for i in 0..n {
        a[(n - 1, i)] = weights.map_or(1.0, |w| w[i]);
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    a.solve(&b)
}
