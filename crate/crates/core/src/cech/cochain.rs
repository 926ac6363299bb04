use std::fmt::Debug;

use super::nerve::CoverNerve;
use crate::numkit::{Field, IntMatrix};
use crate::error::{Error, Result};

/// Coefficient system of a cochain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientSystem {
    /// Integers.
    Z,
    /// Complex numbers (exact ℚ(i) or floating).
    C,
    /// Nonzero complex numbers under multiplication.
    Cx,
}

/// An abelian group written additively: `identity`, `combine`, `invert`.
pub trait Coefficient: Clone + Debug + PartialEq {
    fn identity() -> Self;
    fn combine(&self, other: &Self) -> Self;
    fn invert(&self) -> Self;
}

impl Coefficient for i64 {
    fn identity() -> Self {
        0
    }
    fn combine(&self, other: &Self) -> Self {
        self + other
    }
    fn invert(&self) -> Self {
        -self
    }
}

/// Additive coefficients in a field.
#[derive(Debug, Clone, PartialEq)]
pub struct Additive<T>(pub T);

impl<T: Field + PartialEq> Coefficient for Additive<T> {
    fn identity() -> Self {
        Additive(T::zero())
    }
    fn combine(&self, other: &Self) -> Self {
        Additive(self.0.clone() + other.0.clone())
    }
    fn invert(&self) -> Self {
        Additive(-self.0.clone())
    }
}

/// Units of a field under multiplication (the sheaf `𝒪^×` of locally
/// constant nonzero functions).
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplicative<T>(pub T);

impl<T: Field + PartialEq> Coefficient for Multiplicative<T> {
    fn identity() -> Self {
        Multiplicative(T::one())
    }
    fn combine(&self, other: &Self) -> Self {
        Multiplicative(self.0.clone() * other.0.clone())
    }
    fn invert(&self) -> Self {
        Multiplicative(self.0.checked_inv().expect("units are nonzero"))
    }
}

/// Values on the `p`-simplices of a nerve, stored on sorted tuples only
/// (in the order of [`CoverNerve::simplices`]). Values on other orderings
/// follow by sign (additive) or inverse (multiplicative).
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain<A> {
    degree: usize,
    values: Vec<A>,
}

impl<A: Coefficient> Cochain<A> {
    pub fn new(nerve: &CoverNerve, degree: usize, values: Vec<A>) -> Result<Self> {
        if values.len() != nerve.count(degree) {
            return Err(Error::DimensionMismatch(format!(
                "{}-cochain needs {} values, got {}",
                degree,
                nerve.count(degree),
                values.len()
            )));
        }
        Ok(Self { degree, values })
    }

    pub fn from_fn(nerve: &CoverNerve, degree: usize, f: impl FnMut(&[usize]) -> A) -> Self {
        let values = nerve.simplices(degree).iter().map(|s| s.as_slice()).map(f).collect();
        Self { degree, values }
    }

    pub(crate) fn from_values_unchecked(degree: usize, values: Vec<A>) -> Self {
        Self { degree, values }
    }

    pub fn zero(nerve: &CoverNerve, degree: usize) -> Self {
        Self { degree, values: vec![A::identity(); nerve.count(degree)] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[A] {
        &self.values
    }

    pub fn into_values(self) -> Vec<A> {
        self.values
    }

    /// Value on a sorted simplex.
    pub fn value(&self, nerve: &CoverNerve, simplex: &[usize]) -> Option<&A> {
        nerve.index_of(simplex).and_then(|i| self.values.get(i))
    }

    /// Value on an ordered edge `(i, j)`: `α_ij` or its inverse `α_ji⁻¹`.
    pub fn edge_value(&self, nerve: &CoverNerve, i: usize, j: usize) -> Option<A> {
        assert_eq!(self.degree, 1, "edge values need a 1-cochain");
        let v = self.value(nerve, &[i.min(j), i.max(j)])?;
        Some(if i < j { v.clone() } else { v.invert() })
    }

    pub fn combine(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        Self { degree: self.degree, values: self.values.iter().zip(&other.values).map(|(a, b)| a.combine(b)).collect() }
    }

    pub fn map<B: Coefficient>(&self, f: impl Fn(&A) -> B) -> Cochain<B> {
        Cochain { degree: self.degree, values: self.values.iter().map(f).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().all(|v| *v == A::identity())
    }
}

/// `(dα)_{i₀⋯i_{p+1}} = Σⱼ (−1)ʲ α_{i₀⋯îⱼ⋯i_{p+1}}`, written in the
/// coefficient group (an alternating product for multiplicative coefficients).
pub fn cech_differential<A: Coefficient>(nerve: &CoverNerve, c: &Cochain<A>) -> Cochain<A> {
    let p = c.degree;
    Cochain::from_fn(nerve, p + 1, |simplex| {
        let mut acc = A::identity();
        for j in 0..simplex.len() {
            let face: Vec<usize> = simplex.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect();
            let v = &c.values[nerve.index_of(&face).expect("nerve is closed under faces")];
            acc = if j % 2 == 0 { acc.combine(v) } else { acc.combine(&v.invert()) };
        }
        acc
    })
}

/// Matrix of `d : C^p(ℤ) → C^{p+1}(ℤ)` with rows indexed by `(p+1)`-simplices.
pub fn coboundary_matrix(nerve: &CoverNerve, p: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(nerve.count(p + 1), nerve.count(p));
    for (row, simplex) in nerve.simplices(p + 1).iter().enumerate() {
        for j in 0..simplex.len() {
            let face: Vec<usize> = simplex.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect();
            let col = nerve.index_of(&face).expect("closed under faces");
            m.set(row, col, if j % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes;
    use crate::numkit::{gq, GaussianRational, C64};

    fn triangle() -> CoverNerve {
        CoverNerve::from_triangulation(&complexes::filled_triangle())
    }

    #[test]
    fn constant_zero_cochain_has_zero_differential() {
        let n = triangle();
        let c = Cochain::from_fn(&n, 0, |_| Additive(gq(5, 3)));
        assert!(cech_differential(&n, &c).is_identity());
    }

    #[test]
    fn differential_of_vertex_function() {
        let n = triangle();
        let f = Cochain::new(&n, 0, vec![0i64, 1, 3]).unwrap();
        let df = cech_differential(&n, &f);
        // edges in order 01, 02, 12
        assert_eq!(df.values(), &[1, 3, 2]);
        assert_eq!(df.edge_value(&n, 2, 1), Some(-2));
        assert!(cech_differential(&n, &df).is_identity());
    }

    #[test]
    fn multiplicative_differential() {
        let n = triangle();
        let u = Cochain::new(&n, 1, vec![Multiplicative(C64::new(2.0, 0.0)), Multiplicative(C64::new(6.0, 0.0)), Multiplicative(C64::new(3.0, 0.0))]).unwrap();
        // (du)_{012} = u_12 · u_02⁻¹ · u_01 = 3 / 6 · 2
        let du = cech_differential(&n, &u);
        assert!((du.values()[0].0 - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn matrix_agrees_with_differential() {
        let n = CoverNerve::from_triangulation(&complexes::torus());
        let d0 = coboundary_matrix(&n, 0);
        let f: Vec<i64> = (0..7).map(|i| i * i - 3).collect();
        let via_matrix = d0.apply(&f);
        let via_op = cech_differential(&n, &Cochain::new(&n, 0, f).unwrap());
        assert_eq!(via_matrix, via_op.values());
        assert!(coboundary_matrix(&n, 1).mul(&d0).is_zero());
    }

    mod props {
        use super::*;
        use crate::numkit::{gaussian, rational};
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn d_squared_vanishes_for_all_coefficients(seed in prop::collection::vec(-7i64..=7, 60)) {
                for t in [complexes::torus(), complexes::projective_plane(), complexes::surface_of_genus(2)] {
                    let n = CoverNerve::from_triangulation(&t);
                    for p in 0..=1 {
                        let ints = Cochain::from_fn(&n, p, {
                            let mut k = 0;
                            let seed = &seed;
                            move |_| { k += 1; seed[k % seed.len()] }
                        });
                        prop_assert!(cech_differential(&n, &cech_differential(&n, &ints)).is_identity());
                        let adds = ints.map(|&v| Additive(gaussian(rational(v, 3), rational(v * v, 7))));
                        prop_assert!(cech_differential(&n, &cech_differential(&n, &adds)).is_identity());
                        let units = ints.map(|&v| Multiplicative::<GaussianRational>(gaussian(rational(v.abs() + 1, 2), rational(v, 5))));
                        prop_assert!(cech_differential(&n, &cech_differential(&n, &units)).is_identity());
                    }
                }
            }
        }
    }
}
