//! Integer matrices and the Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::matrix::Matrix;
use super::scalar::GaussianRational;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cols == 0 {
            return write!(f, "IntMatrix({}x0)", self.rows);
        }
        f.debug_list().entries(self.data.chunks(self.cols)).finish()
    }
}

/// Result of [`smith_normal_form`]: `left · m · right = diag(diagonal)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<i64>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// `left⁻¹`, tracked alongside the row operations.
    pub left_inverse: IntMatrix,
    /// `right⁻¹`, tracked alongside the column operations.
    pub right_inverse: IntMatrix,
}

impl SmithForm {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|&&d| d != 0).count()
    }
}

impl IntMatrix {
    /// Matrices with zero rows or columns are allowed; they stand for maps
    /// from or to the zero module.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    /// Exact determinant (square matrices only).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        if self.rows == 0 {
            return BigInt::from(1);
        }
        let det = self.to_gaussian().determinant().expect("square");
        det.re.to_integer()
    }

    pub fn to_gaussian(&self) -> Matrix<GaussianRational> {
        Matrix::new(
            self.rows,
            self.cols,
            self.data
                .iter()
                .map(|&x| {
                    GaussianRational::new(BigRational::from_integer(x.into()), BigRational::zero())
                })
                .collect(),
        )
        .expect("non-empty integer matrix")
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && {
            let d = self.determinant();
            d == BigInt::from(1) || d == BigInt::from(-1)
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        for j in 0..self.cols {
            let v = self.get(src, j);
            self.data[dst * self.cols + j] += k * v;
        }
    }

    /// col[dst] += k · col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        for i in 0..self.rows {
            let v = self.get(i, src);
            self.data[i * self.cols + dst] += k * v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self.data[r * self.cols + j] = -self.data[r * self.cols + j];
        }
    }
}

/// Row operations applied to `m` and recorded in `left` (and inversely in
/// `left_inv`); column operations likewise in `right` / `right_inv`.
struct Reducer {
    m: IntMatrix,
    left: IntMatrix,
    left_inv: IntMatrix,
    right: IntMatrix,
    right_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.left.swap_rows(a, b);
        self.left_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.right.swap_cols(a, b);
        self.right_inv.swap_rows(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        self.m.add_row(dst, src, k);
        self.left.add_row(dst, src, k);
        self.left_inv.add_col(src, dst, -k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        self.m.add_col(dst, src, k);
        self.right.add_col(dst, src, k);
        self.right_inv.add_row(src, dst, -k);
    }

    fn negate_row(&mut self, r: usize) {
        self.m.negate_row(r);
        self.left.negate_row(r);
        let n = self.left_inv.rows;
        for i in 0..n {
            let v = self.left_inv.get(i, r);
            self.left_inv.set(i, r, -v);
        }
    }

    /// Position of the nonzero entry of least absolute value in the trailing block.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, i64)> = None;
        for i in t..self.m.rows {
            for j in t..self.m.cols {
                let v = self.m.get(i, j).abs();
                if v != 0 && best.is_none_or(|(_, _, b)| v < b) {
                    best = Some((i, j, v));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

/// Smith normal form over ℤ.
///
/// Returns unimodular `left`, `right` with `left · m · right` diagonal and
/// `d₁ | d₂ | …` (nonnegative, zeros last).
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut r = Reducer {
        m: m.clone(),
        left: IntMatrix::identity(rows),
        left_inv: IntMatrix::identity(rows),
        right: IntMatrix::identity(cols),
        right_inv: IntMatrix::identity(cols),
    };
    let steps = rows.min(cols);
    for t in 0..steps {
        let Some((pi, pj)) = r.min_entry(t) else { break };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let pivot = r.m.get(t, t);
            let mut dirty = false;
            for i in t + 1..rows {
                let q = r.m.get(i, t).div_euclid(pivot);
                if q != 0 {
                    r.add_row(i, t, -q);
                }
                if r.m.get(i, t) != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = r.m.get(t, j).div_euclid(pivot);
                if q != 0 {
                    r.add_col(j, t, -q);
                }
                if r.m.get(t, j) != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // a remainder is now smaller than the pivot; move it into place
                let (bi, bj) = smallest_in_cross(&r.m, t);
                r.swap_rows(t, bi);
                r.swap_cols(t, bj);
                continue;
            }
            // row and column cleared; enforce divisibility on the trailing block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| r.m.get(i, j) % pivot != 0);
            match bad {
                Some((i, _)) => r.add_row(t, i, 1),
                None => break,
            }
        }
        if r.m.get(t, t) < 0 {
            r.negate_row(t);
        }
    }
    let diagonal = (0..steps).map(|i| r.m.get(i, i)).collect();
    SmithForm {
        diagonal,
        left: r.left,
        right: r.right,
        left_inverse: r.left_inv,
        right_inverse: r.right_inv,
    }
}

fn smallest_in_cross(m: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t, m.get(t, t).abs());
    for i in t..m.rows {
        let v = m.get(i, t).abs();
        if v != 0 && v < best.2 {
            best = (i, t, v);
        }
    }
    for j in t..m.cols {
        let v = m.get(t, j).abs();
        if v != 0 && v < best.2 {
            best = (t, j, v);
        }
    }
    (best.0, best.1)
}

/// Converts a rational matrix with integral entries into an [`IntMatrix`].
pub fn integral_entries(m: &Matrix<GaussianRational>) -> Option<IntMatrix> {
    let mut out = IntMatrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m.get(i, j);
            if !z.im.is_zero() || !z.re.is_integer() {
                return None;
            }
            out.set(i, j, z.re.to_integer().to_i64()?);
        }
    }
    Some(out)
}
