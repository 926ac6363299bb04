//! Exact and floating complex arithmetic shared by every construction.
//!
//! Two scalar fields implement [`Field`]: exact Gaussian rationals
//! ([`GaussianRational`]) and double-precision complex numbers ([`C64`]).
//! Generic code is monomorphised per field, so the two modes never mix inside
//! a computation. [`Scalar`] and [`AnyMatrix`] carry the mode at runtime for
//! I/O and reject mixed-mode arithmetic explicitly.

mod eigen;
mod expm;
mod intmatrix;
mod matrix;
mod scalar;

pub use eigen::{characteristic_polynomial, eigenvalues, multiset_distance, polynomial_roots, MAX_EIGEN_DIM};
pub use expm::mat_exp;
pub use intmatrix::{integral_entries, smith_normal_form, IntMatrix, SmithForm};
pub use matrix::Matrix;
pub use scalar::{
    exp_turns, format_rational, gaussian, gaussian_is_integer, gi, gq, log_turns, parse_rational, rat_to_f64,
    rational, rationalize, Field, GaussianRational, Rational, C64, DEFAULT_SNAP,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(GaussianRational),
    Float(C64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            Scalar::Exact(z) => z.to_c64(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(Error::ModeMismatch),
        }
    }
}

/// A matrix whose arithmetic mode is known only at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Exact(Matrix<GaussianRational>),
    Float(Matrix<C64>),
}

impl AnyMatrix {
    pub fn mode(&self) -> Mode {
        match self {
            AnyMatrix::Exact(_) => Mode::Exact,
            AnyMatrix::Float(_) => Mode::Float,
        }
    }

    pub fn checked_mul(&self, other: &AnyMatrix) -> Result<AnyMatrix> {
        match (self, other) {
            (AnyMatrix::Exact(a), AnyMatrix::Exact(b)) => Ok(AnyMatrix::Exact(a.checked_mul(b)?)),
            (AnyMatrix::Float(a), AnyMatrix::Float(b)) => Ok(AnyMatrix::Float(a.checked_mul(b)?)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn to_c64(&self) -> Matrix<C64> {
        match self {
            AnyMatrix::Exact(m) => m.to_c64(),
            AnyMatrix::Float(m) => m.clone(),
        }
    }
}
