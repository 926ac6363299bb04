//! Eigenvalues of small matrices through the characteristic polynomial.

use super::matrix::Matrix;
use super::scalar::{Field, C64};
use crate::error::{Error, Result};

pub const MAX_EIGEN_DIM: usize = 4;

/// Coefficients `c₀..c_n` (with `c_n = 1`) of `det(λ − m)` by Faddeev–LeVerrier.
pub fn characteristic_polynomial<T: Field>(m: &Matrix<T>) -> Result<Vec<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("characteristic polynomial needs a square matrix".into()));
    }
    let n = m.rows();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut mk = Matrix::<T>::zeros(n, n);
    for k in 1..=n {
        // M_k = m · M_{k-1} + c_{n-k+1} I
        let mut next = m.checked_mul(&mk)?;
        for i in 0..n {
            let v = next.get(i, i).clone() + coeffs[n - k + 1].clone();
            next.set(i, i, v);
        }
        let tr = m.checked_mul(&next)?.trace();
        coeffs[n - k] = -(tr / T::from_i64(k as i64));
        mk = next;
    }
    Ok(coeffs)
}

/// Roots of the characteristic polynomial (with multiplicity) for `rows ≤ 4`.
pub fn eigenvalues<T: Field>(m: &Matrix<T>, tol: f64) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("eigenvalues need a square matrix".into()));
    }
    if m.rows() > MAX_EIGEN_DIM {
        return Err(Error::DimensionTooLarge(m.rows()));
    }
    let coeffs: Vec<C64> = characteristic_polynomial(m)?.iter().map(Field::to_c64).collect();
    Ok(polynomial_roots(&coeffs, tol))
}

/// Roots of a monic polynomial given by ascending coefficients.
pub fn polynomial_roots(coeffs: &[C64], tol: f64) -> Vec<C64> {
    let n = coeffs.len() - 1;
    match n {
        0 => vec![],
        1 => vec![-coeffs[0]],
        2 => quadratic_roots(coeffs[1], coeffs[0]),
        _ => aberth(coeffs, tol),
    }
}

/// Roots of `λ² + bλ + c`, avoiding cancellation.
fn quadratic_roots(b: C64, c: C64) -> Vec<C64> {
    let disc = (b * b - 4.0 * c).sqrt();
    let plus = -b + disc;
    let minus = -b - disc;
    let q = if plus.norm() >= minus.norm() { plus } else { minus } / 2.0;
    if q.norm() == 0.0 {
        return vec![C64::new(0.0, 0.0); 2];
    }
    vec![q, c / q]
}

fn horner(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Aberth–Ehrlich simultaneous iteration followed by Newton polishing.
fn aberth(coeffs: &[C64], tol: f64) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius * 0.5, std::f64::consts::TAU * (k as f64 + 0.25) / n as f64))
        .collect();
    let stop = (tol * 1e-3).max(1e-15);
    for _ in 0..500 {
        let mut largest = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                largest = largest.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if largest < stop {
            break;
        }
    }
    for root in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(coeffs, *root);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            let candidate = *root - step;
            if horner(coeffs, candidate).0.norm() < p.norm() {
                *root = candidate;
            } else {
                break;
            }
        }
    }
    z
}

/// Smallest total distance between two multisets of equal size, over all
/// matchings (sizes up to [`MAX_EIGEN_DIM`]); returns the max pair distance
/// of the best matching.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets of different size");
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let worst = (0..n).map(|i| (a[i] - b[p[i]]).norm()).fold(0.0, f64::max);
        best = best.min(worst);
    });
    best
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::scalar::{gi, gq, GaussianRational};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_case() {
        let m = Matrix::diagonal(vec![gq(2, 1), gi(0, 3)]);
        let ev = eigenvalues(&m, 1e-12).unwrap();
        assert!(multiset_distance(&ev, &[c(2.0, 0.0), c(0.0, 3.0)]) < 1e-12);
    }

    #[test]
    fn jordan_block_double_root() {
        let m = Matrix::from_rows(vec![vec![gq(1, 1), gq(1, 1)], vec![gq(0, 1), gq(1, 1)]]).unwrap();
        let ev = eigenvalues(&m, 1e-12).unwrap();
        assert!(multiset_distance(&ev, &[c(1.0, 0.0), c(1.0, 0.0)]) < 1e-12);
    }

    #[test]
    fn swap_matrix_matches_char_poly_roots() {
        let m: Matrix<GaussianRational> =
            Matrix::from_rows(vec![vec![gq(0, 1), gq(1, 1)], vec![gq(1, 1), gq(0, 1)]]).unwrap();
        // char poly λ² − 1
        assert_eq!(characteristic_polynomial(&m).unwrap(), vec![gq(-1, 1), gq(0, 1), gq(1, 1)]);
        let ev = eigenvalues(&m, 1e-12).unwrap();
        assert!(multiset_distance(&ev, &[c(1.0, 0.0), c(-1.0, 0.0)]) < 1e-12);
    }

    #[test]
    fn four_by_four_companion() {
        // roots 1, 2, i, -i: (λ-1)(λ-2)(λ²+1) = λ⁴ - 3λ³ + 3λ² - 3λ + 2
        let mut m = Matrix::<C64>::zeros(4, 4);
        for i in 0..3 {
            m.set(i + 1, i, c(1.0, 0.0));
        }
        for (i, v) in [-2.0, 3.0, -3.0, 3.0].into_iter().enumerate() {
            m.set(i, 3, c(v, 0.0));
        }
        let ev = eigenvalues(&m, 1e-12).unwrap();
        let expect = [c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
        assert!(multiset_distance(&ev, &expect) < 1e-10, "{ev:?}");
    }

    #[test]
    fn too_large_is_rejected() {
        let m = Matrix::<C64>::identity(5);
        assert_eq!(eigenvalues(&m, 1e-9), Err(Error::DimensionTooLarge(5)));
    }
}
