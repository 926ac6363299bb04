use super::matrix::Matrix;
use super::scalar::C64;
use crate::error::{Error, Result};

/// Matrix exponential by scaling and squaring of the Taylor series.
///
/// The series is summed on `m / 2ˢ` (with `‖m / 2ˢ‖₁ ≤ 1/2`) until the next
/// term falls below `tol`, then squared `s` times.
pub fn mat_exp(m: &Matrix<C64>, tol: f64) -> Result<Matrix<C64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("exponential of a non-square matrix".into()));
    }
    let n = m.rows();
    let norm = m.norm_one();
    if !norm.is_finite() {
        return Err(Error::DimensionMismatch("non-finite matrix entries".into()));
    }
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m.scale(&C64::new(0.5f64.powi(squarings), 0.0));
    let cutoff = (tol * 1e-3).max(f64::EPSILON * 1e-2);
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=60 {
        term = (&term * &scaled).scale(&C64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
        if term.norm() < cutoff {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}
