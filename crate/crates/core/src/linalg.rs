//! Dense matrices, partial-pivoting LU and a 1-norm condition estimate.
//!
//! Sizes here stay at desk scale (a few hundred unknowns at most), so a plain
//! row-major `Vec` and textbook Doolittle elimination are all that is needed.

use std::ops::{Index, IndexMut};

use crate::error::Error;
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, Error> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension {
                expected: cols,
                actual: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `v^T A`, i.e. `A^T v`.
    pub fn tmul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows, "matrix-vector dimension mismatch");
        let mut out = vec![T::zero(); self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + a * vi;
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, Error> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                actual: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// `max_i |v_i|`.
pub fn norm_inf<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// `sum_i |v_i|`.
pub fn norm_1<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|x| x.abs()).sum()
}

/// Packed LU factors of `P A = L U` with unit-diagonal `L`.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    factors: Matrix<T>,
    perm: Vec<usize>,
    norm_1: T,
}

impl<T: Scalar> Lu<T> {
    /// Factorizes with partial (row) pivoting.
    ///
    /// A pivot whose magnitude is below `n * eps * max|A|` is reported as
    /// singular, naming the elimination column.
    pub fn factor(a: &Matrix<T>) -> Result<Self, Error> {
        if !a.is_square() {
            return Err(Error::Dimension {
                expected: a.rows(),
                actual: a.cols(),
            });
        }
        let n = a.rows();
        let scale = a.as_slice().iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let threshold = T::from_count(n.max(1)) * T::epsilon() * scale;
        let norm_1 = a.norm_1();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (p, pivot_abs) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].abs()))
                    .fold(
                        (k, -T::one()),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if !(pivot_abs > threshold) || scale == T::zero() {
                return Err(Error::SingularMatrix { column: k });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == T::zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    lu[(i, j)] = lu[(i, j)] - factor * lu[(k, j)];
                }
            }
        }
        Ok(Self {
            factors: lu,
            perm,
            norm_1,
        })
    }

    pub fn dim(&self) -> usize {
        self.factors.rows()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>, Error> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::Dimension {
                expected: n,
                actual: b.len(),
            });
        }
        let lu = &self.factors;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s = s - lu[(i, j)] * x[j];
            }
            x[i] = s / lu[(i, i)];
        }
        Ok(x)
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[T]) -> Result<Vec<T>, Error> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::Dimension {
                expected: n,
                actual: b.len(),
            });
        }
        let lu = &self.factors;
        // A^T = U^T L^T P, so solve U^T w = b, L^T v = w, x = P^T v.
        let mut w = b.to_vec();
        for i in 0..n {
            let mut s = w[i];
            for j in 0..i {
                s = s - lu[(j, i)] * w[j];
            }
            w[i] = s / lu[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = w[i];
            for j in (i + 1)..n {
                s = s - lu[(j, i)] * w[j];
            }
            w[i] = s;
        }
        let mut x = vec![T::zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = w[k];
        }
        Ok(x)
    }

    /// 1-norm of the matrix that was factored.
    pub fn matrix_norm_1(&self) -> T {
        self.norm_1
    }

    /// Estimate of `||A^{-1}||_1` (Hager's method with Higham's
    /// alternating-sign safeguard).
    pub fn inverse_norm_1_estimate(&self) -> T {
        let n = self.dim();
        if n == 0 {
            return T::zero();
        }
        let nf = T::from_count(n);
        let mut x = vec![T::one() / nf; n];
        let mut est = T::zero();
        for iter in 0..5 {
            let y = match self.solve(&x) {
                Ok(y) => y,
                Err(_) => return T::infinity(),
            };
            let new_est = norm_1(&y);
            if iter > 0 && new_est <= est {
                break;
            }
            est = new_est;
            let xi: Vec<T> = y
                .iter()
                .map(|&v| if v >= T::zero() { T::one() } else { -T::one() })
                .collect();
            let z = match self.solve_transpose(&xi) {
                Ok(z) => z,
                Err(_) => return T::infinity(),
            };
            let (jmax, zmax) = z.iter().enumerate().fold((0, -T::one()), |best, (i, v)| {
                if v.abs() > best.1 {
                    (i, v.abs())
                } else {
                    best
                }
            });
            let ztx: T = z.iter().zip(&x).map(|(&a, &b)| a * b).sum();
            if iter > 0 && zmax <= ztx {
                break;
            }
            x = vec![T::zero(); n];
            x[jmax] = T::one();
        }
        // Higham's extra test vector guards against the classic
        // counterexamples where the power-style iteration stalls.
        let alt: Vec<T> = (0..n)
            .map(|i| {
                let mag = T::one()
                    + if n > 1 {
                        T::from_count(i) / T::from_count(n - 1)
                    } else {
                        T::zero()
                    };
                if i % 2 == 0 {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        if let Ok(y) = self.solve(&alt) {
            let alt_est = T::lit(2.0) * norm_1(&y) / (T::lit(3.0) * nf);
            est = est.max(alt_est);
        }
        est
    }

    /// `κ_1(A) ≈ ||A||_1 · est(||A^{-1}||_1)`.
    pub fn condition_estimate_1norm(&self) -> T {
        self.norm_1 * self.inverse_norm_1_estimate()
    }
}

/// Solves `A x = rhs` by partial-pivoting LU.
pub fn lu_solve<T: Scalar>(a: &Matrix<T>, rhs: &[T]) -> Result<Vec<T>, Error> {
    Lu::factor(a)?.solve(rhs)
}

/// Convenience wrapper around [`Lu::condition_estimate_1norm`].
pub fn condition_estimate_1norm<T: Scalar>(lu: &Lu<T>) -> T {
    lu.condition_estimate_1norm()
}
