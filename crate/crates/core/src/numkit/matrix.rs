//! Dense matrices over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Field, C64};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<T: Field> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn scalar(x: T) -> Self {
        Self { rows: 1, cols: 1, data: vec![x] }
    }

    pub fn diagonal(entries: Vec<T>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in entries.into_iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_c64(&self) -> Matrix<C64> {
        self.map(Field::to_c64)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, x: &T) -> Self {
        self.map(|e| e.clone() * x.clone())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    let prod = a.clone() * other.get(k, j).clone();
                    out.data[idx] = std::mem::replace(&mut out.data[idx], T::zero()) + prod;
                }
            }
        }
        Ok(out)
    }

    /// Frobenius norm, an upper bound for the operator 2-norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).magnitude()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Frobenius distance; exact matrices return `0.0` only on equality.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.distance(b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Equality, exact in exact mode and within `tol` (Frobenius) otherwise.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return false;
        }
        if T::EXACT {
            self == other
        } else {
            self.distance(other) <= tol
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&Self::identity(self.rows), tol)
    }

    pub fn is_scalar_multiple_of_identity(&self, tol: f64) -> bool {
        self.is_square()
            && self.approx_eq(&Self::identity(self.rows).scale(self.get(0, 0)), tol)
    }

    /// Row echelon reduction; returns `(rank, determinant sign-adjusted product of pivots)`.
    fn eliminate(&mut self, tol: f64) -> (usize, T) {
        let (rows, cols) = (self.rows, self.cols);
        let mut det = T::one();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let pivot = (rank..rows)
                .filter(|&r| !self.get(r, col).is_zero_within(tol))
                .max_by(|&a, &b| {
                    self.get(a, col).magnitude().total_cmp(&self.get(b, col).magnitude())
                });
            let Some(p) = pivot else {
                det = T::zero();
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    self.data.swap(p * cols + j, rank * cols + j);
                }
                det = -det;
            }
            let inv = self.get(rank, col).checked_inv().expect("nonzero pivot");
            det = det * self.get(rank, col).clone();
            for r in rank + 1..rows {
                let factor = self.get(r, col).clone() * inv.clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..cols {
                    let v = self.get(r, j).clone() - factor.clone() * self.get(rank, j).clone();
                    self.set(r, j, v);
                }
            }
            rank += 1;
        }
        if rank < rows {
            det = T::zero();
        }
        (rank, det)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.clone().eliminate(tol).0
    }

    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        Ok(self.clone().eliminate(0.0).1)
    }

    /// Invertible iff the determinant is nonzero (exact) or `|det| > tol` (float).
    pub fn is_invertible(&self, tol: f64) -> bool {
        self.determinant().is_ok_and(|d| !d.is_zero_within(tol))
    }

    /// Gauss–Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.norm().max(f64::MIN_POSITIVE);
        let singular_tol = if T::EXACT { 0.0 } else { scale * 1e-14 };
        for col in 0..n {
            let p = (col..n)
                .max_by(|&x, &y| a.get(x, col).magnitude().total_cmp(&a.get(y, col).magnitude()))
                .expect("non-empty range");
            if a.get(p, col).is_zero_within(singular_tol) {
                return Err(Error::Singular);
            }
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                    inv.data.swap(p * n + j, col * n + j);
                }
            }
            let pinv = a.get(col, col).checked_inv().ok_or(Error::Singular)?;
            for j in 0..n {
                a.set(col, j, a.get(col, j).clone() * pinv.clone());
                inv.set(col, j, inv.get(col, j).clone() * pinv.clone());
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, a.get(r, j).clone() - f.clone() * a.get(col, j).clone());
                    inv.set(r, j, inv.get(r, j).clone() - f.clone() * inv.get(col, j).clone());
                }
            }
        }
        Ok(inv)
    }

    /// Basis of the right null space `{x : self·x = 0}` as column vectors.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<T>> {
        let (rref, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -rref.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows)
                .filter(|&i| !a.get(i, c).is_zero_within(tol))
                .max_by(|&x, &y| a.get(x, c).magnitude().total_cmp(&a.get(y, c).magnitude()))
            else {
                continue;
            };
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
            let pinv = a.get(r, c).checked_inv().expect("nonzero pivot");
            for j in 0..cols {
                a.set(r, j, a.get(r, j).clone() * pinv.clone());
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = a.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    a.set(i, j, a.get(i, j).clone() - f.clone() * a.get(r, j).clone());
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone())
            })
            .collect()
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Self) -> Result<Self> {
        g.checked_mul(self)?.checked_mul(&g.inverse()?)
    }

    /// `self^k` by repeated squaring; negative `k` uses the inverse.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)?
            .checked_mul(&self.inverse()?)?
            .checked_mul(&other.inverse()?)
    }
}

impl<T: Field> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<T: Field> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<T: Field> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<T: Field> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::scalar::{gi, gq, GaussianRational};

    fn m(rows: &[&[i64]]) -> Matrix<GaussianRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| gq(x, 1)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn product_matches_hand_computation() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let b = m(&[&[1, 0], &[1, 1]]);
        assert_eq!(&a * &b, m(&[&[2, 1], &[1, 1]]));
    }

    #[test]
    fn inverse_and_determinant() {
        let a = Matrix::from_rows(vec![vec![gi(1, 1), gq(2, 1)], vec![gq(0, 1), gi(0, 3)]]).unwrap();
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity(0.0));
        assert_eq!(a.determinant().unwrap(), gi(1, 1) * gi(0, 3));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(0.0), 1);
        let ns = a.nullspace(0.0);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.apply(&v).iter().all(num_traits::Zero::is_zero));
        }
    }

    #[test]
    fn float_rank_uses_tolerance() {
        let a = Matrix::from_rows(vec![
            vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
            vec![C64::new(1.0, 0.0), C64::new(1.0 + 1e-12, 0.0)],
        ])
        .unwrap();
        assert_eq!(a.rank(1e-9), 1);
        assert_eq!(a.rank(1e-15), 2);
    }

    #[test]
    fn rejects_ragged_and_empty() {
        assert!(Matrix::<C64>::from_rows(vec![vec![C64::new(1.0, 0.0)], vec![]]).is_err());
        assert!(Matrix::<C64>::new(0, 0, vec![]).is_err());
    }
}
