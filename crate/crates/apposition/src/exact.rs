//! Exact integer and rational dense matrices.
//!
//! The combinatorial layer (reflection matrices, Coxeter elements, Cartan
//! matrices, Killing solves on the Cartan subalgebra) works over `i64` or
//! `BigRational` so the reflection-group identities can be asserted exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense row-major `i64` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IMat {
    pub n: usize,
    pub data: Vec<i64>,
}

impl IMat {
    pub fn zeros(n: usize) -> Self {
        IMat { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n);
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IMat) -> IMat {
        assert_eq!(self.n, other.n);
        IMat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IMat) -> IMat {
        assert_eq!(self.n, other.n);
        IMat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: i64) -> IMat {
        IMat { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn transpose(&self) -> IMat {
        let n = self.n;
        let mut out = IMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> IMat {
        let mut out = IMat::identity(self.n);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn is_identity(&self) -> bool {
        *self == IMat::identity(self.n)
    }

    /// Apply to an integer coordinate column vector.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Apply to a complex coordinate column vector.
    pub fn apply_complex(&self, v: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| v[j] * self[(i, j)] as f64)
                    .sum()
            })
            .collect()
    }

    /// Apply to a real coordinate column vector.
    pub fn apply_real(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] as f64 * v[j]).sum())
            .collect()
    }

    /// Multiplicative order, searched up to `max`.
    pub fn order(&self, max: usize) -> Option<usize> {
        let mut p = self.clone();
        for k in 1..=max {
            if p.is_identity() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.n + j]
    }
}

pub fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Dense row-major `BigRational` matrix (square or rectangular).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigRational>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_imat(m: &IMat) -> Self {
        QMat {
            rows: m.n,
            cols: m.n,
            data: m.data.iter().map(|&v| big(v)).collect(),
        }
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    /// Solve `self * x = b` by Gauss–Jordan elimination. `None` if singular.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut aug = self.clone();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[(r, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let tmp = aug[(pivot, j)].clone();
                    aug[(pivot, j)] = aug[(col, j)].clone();
                    aug[(col, j)] = tmp;
                }
                rhs.swap(pivot, col);
            }
            let inv = aug[(col, col)].clone();
            for j in 0..n {
                aug[(col, j)] = &aug[(col, j)] / &inv;
            }
            rhs[col] = &rhs[col] / &inv;
            for r in 0..n {
                if r == col || aug[(r, col)].is_zero() {
                    continue;
                }
                let f = aug[(r, col)].clone();
                for j in 0..n {
                    let t = &f * &aug[(col, j)];
                    aug[(r, j)] -= t;
                }
                let t = &f * &rhs[col];
                rhs[r] -= t;
            }
        }
        Some(rhs)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(rat_to_f64).collect()
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    let numer = r.numer();
    let denom = r.denom();
    // Exact for the small rationals this crate produces.
    let n: f64 = numer.to_string().parse().unwrap();
    let d: f64 = denom.to_string().parse().unwrap();
    n / d
}

/// Exact rational `p/q` from a pair of `i64`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    assert!(q != 0);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn is_integer(r: &BigRational) -> bool {
    r.denom().abs() == BigInt::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn imat_mul_identity() {
        let a = IMat::from_rows(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(a.mul(&IMat::identity(2)), a);
        assert_eq!(a.trace(), 4);
    }

    #[test]
    fn imat_order_of_rotation() {
        // 90-degree rotation has order 4
        let r = IMat::from_rows(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(r.order(10), Some(4));
    }

    #[test]
    fn qmat_solve_small() {
        let a = QMat::from_imat(&IMat::from_rows(&[vec![2, -1], vec![-1, 2]]));
        let b = vec![big(1), big(1)];
        let x = a.solve(&b).unwrap();
        assert_eq!(x, vec![big(1), big(1)]);
    }

    #[test]
    fn qmat_singular_detected() {
        let a = QMat::from_imat(&IMat::from_rows(&[vec![1, 1], vec![1, 1]]));
        assert!(a.solve(&[big(1), big(0)]).is_none());
    }
}
