//! Small dense matrix kernels shared by the exterior and manifold layers.
//! Everything is generic over [`Scalar`]; pivot selection takes the entry
//! of largest magnitude so the same code is stable in floats and merely
//! pivot-agnostic in exact arithmetic.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: Vec<Vec<S>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = Mat::zeros(r, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Mat<S> {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn matmul(&self, other: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a.clone() * other[(k, j)].clone();
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    acc += self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    pub fn max_abs(&self) -> S {
        let mut m = S::zero();
        for v in &self.data {
            let a = v.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let mut piv = col;
            let mut best = a[(col, col)].abs();
            for r in col + 1..n {
                let cand = a[(r, col)].abs();
                if cand > best {
                    best = cand;
                    piv = r;
                }
            }
            if a[(piv, col)].is_zero() {
                return S::zero();
            }
            if piv != col {
                a.swap_rows(piv, col);
                det = -det;
            }
            let d = a[(col, col)].clone();
            det *= d.clone();
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone() / d.clone();
                for c in col..n {
                    let sub = f.clone() * a[(col, c)].clone();
                    a[(r, c)] -= sub;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse. Errors when a pivot is negligible relative to
    /// the matrix scale.
    pub fn inverse(&self, rel_tol: f64) -> Result<Mat<S>> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let scale = {
            let m = self.max_abs();
            if m.is_zero() {
                S::one()
            } else {
                m
            }
        };
        let mut a = self.clone();
        let mut inv: Mat<S> = Mat::identity(n);
        for col in 0..n {
            let mut piv = col;
            let mut best = a[(col, col)].abs();
            for r in col + 1..n {
                let cand = a[(r, col)].abs();
                if cand > best {
                    best = cand;
                    piv = r;
                }
            }
            if a[(piv, col)].is_negligible(&scale, rel_tol) {
                return Err(Error::SingularPoint(format!(
                    "matrix is singular at pivot column {col}"
                )));
            }
            if piv != col {
                a.swap_rows(piv, col);
                inv.swap_rows(piv, col);
            }
            let d = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = a[(col, c)].clone() / d.clone();
                inv[(col, c)] = inv[(col, c)].clone() / d.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for c in 0..n {
                    let s1 = f.clone() * a[(col, c)].clone();
                    a[(r, c)] -= s1;
                    let s2 = f.clone() * inv[(col, c)].clone();
                    inv[(r, c)] -= s2;
                }
            }
        }
        Ok(inv)
    }

    /// Numerical rank via row echelon with the shared negligibility rule.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let scale = {
            let m = self.max_abs();
            if m.is_zero() {
                return 0;
            }
            m
        };
        let mut a = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..self.cols {
            let mut piv = None;
            let mut best = S::zero();
            for r in row..self.rows {
                let cand = a[(r, col)].abs();
                if !cand.is_negligible(&scale, rel_tol) && cand > best {
                    best = cand;
                    piv = Some(r);
                }
            }
            let Some(piv) = piv else { continue };
            a.swap_rows(piv, row);
            let d = a[(row, col)].clone();
            for r in row + 1..self.rows {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone() / d.clone();
                for c in col..self.cols {
                    let sub = f.clone() * a[(row, c)].clone();
                    a[(r, c)] -= sub;
                }
            }
            rank += 1;
            row += 1;
            if row == self.rows {
                break;
            }
        }
        rank
    }

    /// Basis of the null space (columns), with the shared negligibility rule.
    pub fn null_space(&self, rel_tol: f64) -> Vec<Vec<S>> {
        let scale = {
            let m = self.max_abs();
            if m.is_zero() {
                return (0..self.cols)
                    .map(|j| {
                        let mut v = vec![S::zero(); self.cols];
                        v[j] = S::one();
                        v
                    })
                    .collect();
            }
            m
        };
        let mut a = self.clone();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let mut piv = None;
            let mut best = S::zero();
            for r in row..self.rows {
                let cand = a[(r, col)].abs();
                if !cand.is_negligible(&scale, rel_tol) && cand > best {
                    best = cand;
                    piv = Some(r);
                }
            }
            let Some(piv) = piv else { continue };
            a.swap_rows(piv, row);
            let d = a[(row, col)].clone();
            for c in col..self.cols {
                a[(row, c)] = a[(row, c)].clone() / d.clone();
            }
            for r in 0..self.rows {
                if r == row || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for c in col..self.cols {
                    let sub = f.clone() * a[(row, c)].clone();
                    a[(r, c)] -= sub;
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<S: Scalar> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S: Scalar> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Gram-Schmidt orthonormalization of the columns; drops negligible columns.
pub fn orthonormalize(cols: &[Vec<f64>], rel_tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let scale = cols
        .iter()
        .flat_map(|c| c.iter().map(|v| v.abs()))
        .fold(0.0_f64, f64::max)
        .max(1e-300);
    for col in cols {
        let mut v = col.clone();
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(a, b)| a * b).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > rel_tol * scale {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            basis.push(v);
        }
    }
    basis
}
