//! Small dense linear algebra: row-major matrices and LU with partial pivoting.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `self * x`.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `selfᵀ * y`.
    pub fn tr_mul_vec(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + a * yi;
            }
        }
        out
    }

    /// Copy with row and column `k` removed.
    pub fn without(&self, k: usize) -> Self {
        let keep_r: Vec<usize> = (0..self.rows).filter(|&i| i != k).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|&j| j != k).collect();
        let mut m = Self::zeros(keep_r.len(), keep_c.len());
        for (a, &i) in keep_r.iter().enumerate() {
            for (b, &j) in keep_c.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        m
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization `P A = L U` of a square matrix.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    factors: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    /// Factorizes `a`; fails when a pivot falls below `tol` times the largest entry.
    pub fn new(a: &Matrix<T>, tol: T) -> Result<Self> {
        assert_eq!(a.rows, a.cols, "LU needs a square matrix");
        let n = a.rows;
        let mut f = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = f.data.iter().fold(T::zero(), |m, v| m.max(v.abs())).max(T::one());
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, f[(i, k)].abs()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= tol * scale {
                return Err(Error::Singular { column: k, pivot: pivot.as_f64() });
            }
            if p != k {
                for j in 0..n {
                    f.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let d = f[(k, k)];
            for i in k + 1..n {
                let l = f[(i, k)] / d;
                f[(i, k)] = l;
                if l != T::zero() {
                    for j in k + 1..n {
                        let u = f[(k, j)];
                        f[(i, j)] = f[(i, j)] - l * u;
                    }
                }
            }
        }
        Ok(Lu { factors: f, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let f = &self.factors;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - f[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - f[(i, j)] * x[j];
            }
            x[i] = s / f[(i, i)];
        }
        x
    }

    /// Solves `Aᵀ y = c`.
    pub fn solve_transposed(&self, c: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(c.len(), n);
        let f = &self.factors;
        // Uᵀ z = c
        let mut z = c.to_vec();
        for i in 0..n {
            let mut s = z[i];
            for j in 0..i {
                s = s - f[(j, i)] * z[j];
            }
            z[i] = s / f[(i, i)];
        }
        // Lᵀ w = z
        for i in (0..n).rev() {
            let mut s = z[i];
            for j in i + 1..n {
                s = s - f[(j, i)] * z[j];
            }
            z[i] = s;
        }
        let mut y = vec![T::zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            y[p] = z[k];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample() -> Matrix<f64> {
        Matrix::from_rows(&[
            vec![0.0, 2.0, 1.0],
            vec![1.0, -1.0, 4.0],
            vec![3.0, 0.5, -2.0],
        ])
    }

    #[test]
    fn solves_with_row_exchange() {
        let a = sample();
        let lu = Lu::new(&a, 1e-12).unwrap();
        let b = [1.0, 2.0, 3.0];
        let x = lu.solve(&b);
        for (got, want) in a.mul_vec(&x).iter().zip(b) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        let y = lu.solve_transposed(&b);
        for (got, want) in a.tr_mul_vec(&y).iter().zip(b) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_singular() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(Lu::new(&a, 1e-12), Err(Error::Singular { column: 1, .. })));
    }

    #[test]
    fn without_drops_row_and_column() {
        let m = sample().without(0);
        assert_eq!(m.to_rows(), vec![vec![-1.0, 4.0], vec![0.5, -2.0]]);
    }
}
