//! Dense reference routines.
//!
//! Small row-major matrices with plain Gaussian elimination. The banded
//! operators are never expanded in production paths; these routines back
//! `to_dense` and serve as independent cross-checks for the structured
//! solver and the schemes in the test suites.

use crate::error::{Error, Result};
use crate::scalar::{dot, norm_2, Real};

/// Dense row-major matrix.
#[derive(Debug, Clone)]
pub struct Dense<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Dense<T> {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = T::one();
        }
        m
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at `(i, j)`.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    /// Mutable entry at `(i, j)`.
    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    /// Matrix-matrix product.
    pub fn matmul(&self, other: &Dense<T>) -> Dense<T> {
        assert_eq!(self.cols, other.rows);
        let mut out = Dense::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                for j in 0..other.cols {
                    *out.at_mut(i, j) += a * other.at(k, j);
                }
            }
        }
        out
    }

    /// Transposed copy.
    pub fn transpose(&self) -> Dense<T> {
        let mut out = Dense::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j);
            }
        }
        out
    }

    /// Infinity norm.
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .fold(T::zero(), |acc, &x| acc + x.abs())
            })
            .fold(T::zero(), T::max)
    }
}

/// Solves `A x = rhs` by Gaussian elimination with partial pivoting.
pub fn solve<T: Real>(a: &Dense<T>, rhs: &[T]) -> Result<Vec<T>> {
    let n = a.rows();
    assert_eq!(a.cols(), n);
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let mut m = a.clone();
    let mut b = rhs.to_vec();
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| m.at(i, k).abs().partial_cmp(&m.at(j, k).abs()).unwrap())
            .unwrap();
        if m.at(pivot_row, k).abs() <= T::epsilon() * T::of(16.0) * a.norm_inf() {
            return Err(Error::NumericalFailure(format!(
                "singular pivot at column {k}"
            )));
        }
        if pivot_row != k {
            for j in 0..n {
                let tmp = m.at(k, j);
                *m.at_mut(k, j) = m.at(pivot_row, j);
                *m.at_mut(pivot_row, j) = tmp;
            }
            b.swap(k, pivot_row);
        }
        for i in k + 1..n {
            let factor = m.at(i, k) / m.at(k, k);
            if factor != T::zero() {
                for j in k..n {
                    let v = m.at(k, j);
                    *m.at_mut(i, j) -= factor * v;
                }
                b[i] = b[i] - factor * b[k];
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= m.at(k, j) * x[j];
        }
        x[k] = s / m.at(k, k);
    }
    Ok(x)
}

/// Null vector of a matrix with rank deficiency exactly one, unit 2-norm.
///
/// Full-pivot elimination; the free column at the zero pivot seeds the
/// back-substitution. Fails if the matrix has full rank or deficiency >= 2.
pub fn null_vector<T: Real>(a: &Dense<T>) -> Result<Vec<T>> {
    let n = a.rows();
    assert_eq!(a.cols(), n);
    let mut m = a.clone();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let scale = a.norm_inf().max(T::one());
    let tol = T::epsilon() * T::of(1e4) * scale;

    let mut rank = 0;
    for k in 0..n {
        // full pivoting over the trailing block
        let mut best = (k, k, T::zero());
        for i in k..n {
            for j in k..n {
                if m.at(i, j).abs() > best.2 {
                    best = (i, j, m.at(i, j).abs());
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        let (pi, pj, _) = best;
        if pi != k {
            for j in 0..n {
                let tmp = m.at(k, j);
                *m.at_mut(k, j) = m.at(pi, j);
                *m.at_mut(pi, j) = tmp;
            }
        }
        if pj != k {
            for i in 0..n {
                let tmp = m.at(i, k);
                *m.at_mut(i, k) = m.at(i, pj);
                *m.at_mut(i, pj) = tmp;
            }
            col_perm.swap(k, pj);
        }
        for i in k + 1..n {
            let factor = m.at(i, k) / m.at(k, k);
            for j in k..n {
                let v = m.at(k, j);
                *m.at_mut(i, j) -= factor * v;
            }
        }
        rank += 1;
    }
    if rank != n - 1 {
        return Err(Error::NumericalFailure(format!(
            "expected rank deficiency 1, found deficiency {}",
            n - rank
        )));
    }

    // Free variable (permuted index n-1) set to one; back-substitute.
    let mut y = vec![T::zero(); n];
    y[n - 1] = T::one();
    for k in (0..n - 1).rev() {
        let mut s = T::zero();
        for j in k + 1..n {
            s += m.at(k, j) * y[j];
        }
        y[k] = -s / m.at(k, k);
    }
    let mut x = vec![T::zero(); n];
    for k in 0..n {
        x[col_perm[k]] = y[k];
    }
    let norm = norm_2(&x);
    let mut x: Vec<T> = x.into_iter().map(|v| v / norm).collect();
    crate::solver::fix_sign(&mut x);
    Ok(x)
}

/// Solves the bordered system `[[A, k0], [k0^T, 0]] [x; lambda] = [rhs; 0]`
/// with a dense elimination on the `(n+1) x (n+1)` block. Returns `(x, lambda)`.
pub fn bordered_solve<T: Real>(a: &Dense<T>, k0: &[T], rhs: &[T]) -> Result<(Vec<T>, T)> {
    let n = a.rows();
    assert_eq!(a.cols(), n);
    assert_eq!(k0.len(), n);
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let mut big = Dense::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            *big.at_mut(i, j) = a.at(i, j);
        }
        *big.at_mut(i, n) = k0[i];
        *big.at_mut(n, i) = k0[i];
    }
    let mut b = rhs.to_vec();
    b.push(T::zero());
    let sol = solve(&big, &b)?;
    let lambda = sol[n];
    Ok((sol[..n].to_vec(), lambda))
}
