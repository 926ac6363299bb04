//! Scalar fields: exact Gaussian rationals ℚ(i) and double-precision complex numbers.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type GaussianRational = Complex<BigRational>;
pub type C64 = Complex64;

/// Distance below which a float is replaced by a nearby simple rational.
pub const DEFAULT_SNAP: f64 = 1e-12;

/// Coefficient field for matrices and cochains.
///
/// Exact fields ignore every tolerance argument; floating fields compare
/// through the tolerance only.
pub trait Field: Num + Neg<Output = Self> + Clone + fmt::Debug + Send + Sync + 'static {
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;
    fn from_c64(z: C64) -> Self;
    /// Exact for `ℚ(i)`, rounded for floating fields.
    fn from_gaussian(q: &GaussianRational) -> Self;
    fn to_c64(&self) -> C64;
    /// Modulus used for pivot selection and norms.
    fn magnitude(&self) -> f64;

    fn is_zero_within(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }

    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    /// `0` when equal (exactly, in exact mode), otherwise the modulus of the difference.
    fn distance(&self, other: &Self) -> f64 {
        (self.clone() - other.clone()).magnitude()
    }
}

impl Field for C64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn from_c64(z: C64) -> Self {
        z
    }
    fn from_gaussian(q: &GaussianRational) -> Self {
        q.to_c64()
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Field for GaussianRational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn from_c64(z: C64) -> Self {
        Complex::new(
            rationalize(z.re, DEFAULT_SNAP).unwrap_or_else(BigRational::zero),
            rationalize(z.im, DEFAULT_SNAP).unwrap_or_else(BigRational::zero),
        )
    }
    fn from_gaussian(q: &GaussianRational) -> Self {
        q.clone()
    }
    fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
}

pub fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gaussian(re: BigRational, im: BigRational) -> GaussianRational {
    Complex::new(re, im)
}

/// Gaussian rational `(n/d)` with zero imaginary part.
pub fn gq(n: i64, d: i64) -> GaussianRational {
    Complex::new(rational(n, d), BigRational::zero())
}

/// Gaussian rational `a + b·i` with integer parts.
pub fn gi(a: i64, b: i64) -> GaussianRational {
    Complex::new(rational(a, 1), rational(b, 1))
}

/// Best rational approximation of `x` within `snap`, by continued fractions.
///
/// Returns `None` for non-finite input.
pub fn rationalize(x: f64, snap: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let a_int = BigInt::from(a as i64);
        let h_next = &a_int * &h + &h_prev;
        let k_next = &a_int * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let approx = BigRational::new(h.clone(), k.clone());
        let frac = rest - a;
        if (rat_to_f64(&approx) - x).abs() <= snap || frac == 0.0 {
            return Some(approx);
        }
        rest = 1.0 / frac;
        if !rest.is_finite() || rest.abs() > 1e15 {
            return Some(approx);
        }
    }
    Some(BigRational::new(h, k))
}

/// Format a rational as `"p"` or `"p/q"`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `"p"`, `"p/q"` or a decimal literal such as `"0.25"` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::parse_bytes(n.trim().as_bytes(), 10)?;
        let d = BigInt::parse_bytes(d.trim().as_bytes(), 10)?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some(n) = BigInt::parse_bytes(s.as_bytes(), 10) {
        return Some(BigRational::from_integer(n));
    }
    // exact decimal expansion
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.')?;
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let q = BigRational::new(n, d);
    Some(if neg { -q } else { q })
}

/// Principal logarithm divided by 2πi, so that `exp(2πi·x) = z`.
pub fn log_turns(z: C64) -> C64 {
    z.ln() / C64::new(0.0, std::f64::consts::TAU)
}

/// `exp(2πi·x)`.
pub fn exp_turns(x: C64) -> C64 {
    (C64::new(0.0, std::f64::consts::TAU) * x).exp()
}

pub fn gaussian_is_integer(z: &GaussianRational) -> bool {
    z.re.is_integer() && z.im.is_integer()
}
