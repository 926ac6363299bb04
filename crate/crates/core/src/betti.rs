//! Finitely presented groups and their matrix representations.
//!
//! A [`Representation`] assigns an invertible `r × r` matrix to each
//! generator of an [`FpGroup`]. Words are evaluated left to right, so
//! evaluation is a homomorphism on concatenation. The conjugation action,
//! word traces (the computable class functions used as moduli coordinates)
//! and an exact reductivity test for rank ≤ 2 live here.

use std::fmt;

use crate::error::{Error, Result};
use crate::numkit::{Field, Matrix};

/// A generator or its inverse. Generators are numbered from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(generator: usize) -> Self {
        Self { generator, inverse: false }
    }

    pub fn inv(generator: usize) -> Self {
        Self { generator, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Self { inverse: !self.inverse, ..self }
    }

    pub fn exponent(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    /// Cancels adjacent `x x⁻¹` pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Generator-wise exponent sums (the image in the abelianization).
    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generators];
        for l in &self.0 {
            sums[l.generator] += i64::from(l.exponent());
        }
        sums
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "x{}", l.generator + 1)?;
            if l.inverse {
                write!(f, "⁻¹")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpGroup {
    generators: usize,
    relators: Vec<Word>,
}

impl FpGroup {
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self> {
        for w in &relators {
            if let Some(g) = w.max_generator().filter(|&g| g >= generators) {
                return Err(Error::IndexOutOfRange { index: g, generators });
            }
        }
        Ok(Self { generators, relators })
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Generators, products `xᵢxⱼ` for `i < j`, and every relator prefix of
    /// length 2 to 4. Separates conjugation orbits of the small cases used in
    /// this crate; it is not a separating family in general.
    pub fn standard_words(&self) -> Vec<Word> {
        let mut words: Vec<Word> = (0..self.generators).map(|g| Word::new(vec![Letter::gen(g)])).collect();
        for i in 0..self.generators {
            for j in i + 1..self.generators {
                words.push(Word::new(vec![Letter::gen(i), Letter::gen(j)]));
            }
        }
        for r in &self.relators {
            for len in 2..=r.len().min(4) {
                let prefix = Word::new(r.letters()[..len].to_vec());
                if !words.contains(&prefix) {
                    words.push(prefix);
                }
            }
        }
        words
    }
}

/// `⟨A₁, B₁, …, A_g, B_g | [A₁,B₁]⋯[A_g,B_g]⟩` with generators ordered
/// `A₁, B₁, A₂, B₂, …` and `[A,B] = ABA⁻¹B⁻¹`.
pub fn surface_group(genus: u32) -> Result<FpGroup> {
    if genus < 1 {
        return Err(Error::InvalidGenus(genus));
    }
    let g = genus as usize;
    let relator = (0..g)
        .flat_map(|i| {
            let (a, b) = (2 * i, 2 * i + 1);
            [Letter::gen(a), Letter::gen(b), Letter::inv(a), Letter::inv(b)]
        })
        .collect();
    FpGroup::new(2 * g, vec![relator])
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation<T> {
    group: FpGroup,
    rank: usize,
    images: Vec<Matrix<T>>,
    inverses: Vec<Matrix<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reductivity {
    Reductive,
    NonReductive,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductivityVerdict<T> {
    pub status: Reductivity,
    /// For `NonReductive`: a vector spanning an invariant line with no
    /// invariant complement.
    pub witness: Option<Vec<T>>,
}

impl<T: Field> Representation<T> {
    /// Builds a representation; every image must be square of the same size
    /// and invertible. Relators are not checked here (see
    /// [`Representation::check_relations`]).
    pub fn new(group: FpGroup, images: Vec<Matrix<T>>) -> Result<Self> {
        if images.len() != group.generators() {
            return Err(Error::DimensionMismatch(format!(
                "{} generators but {} images",
                group.generators(),
                images.len()
            )));
        }
        let rank = images.first().map_or(1, Matrix::rows);
        if images.iter().any(|m| !m.is_square() || m.rows() != rank) {
            return Err(Error::DimensionMismatch("images must be square of equal size".into()));
        }
        let inverses = images.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
        Ok(Self { group, rank, images, inverses })
    }

    pub fn trivial(group: FpGroup, rank: usize) -> Self {
        let images = vec![Matrix::identity(rank); group.generators()];
        Self { group, rank, inverses: images.clone(), images }
    }

    pub fn group(&self) -> &FpGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Matrix<T>] {
        &self.images
    }

    pub fn image(&self, l: Letter) -> &Matrix<T> {
        if l.inverse {
            &self.inverses[l.generator]
        } else {
            &self.images[l.generator]
        }
    }

    /// Ordered product of images (or inverses) of the letters of `w`.
    pub fn evaluate_word(&self, w: &Word) -> Result<Matrix<T>> {
        if let Some(g) = w.max_generator().filter(|&g| g >= self.group.generators()) {
            return Err(Error::IndexOutOfRange { index: g, generators: self.group.generators() });
        }
        Ok(w.letters().iter().fold(Matrix::identity(self.rank), |acc, &l| &acc * self.image(l)))
    }

    /// Every relator evaluates to the identity: exactly in exact mode,
    /// within `tol` (Frobenius norm, which bounds the operator norm) in float mode.
    pub fn check_relations(&self, tol: f64) -> bool {
        self.group
            .relators()
            .iter()
            .all(|r| self.evaluate_word(r).is_ok_and(|m| m.is_identity(tol)))
    }

    /// `g · ρ · g⁻¹`.
    pub fn conjugate(&self, g: &Matrix<T>) -> Result<Self> {
        if !g.is_square() || g.rows() != self.rank {
            return Err(Error::DimensionMismatch("conjugating matrix has the wrong size".into()));
        }
        let g_inv = g.inverse()?;
        let images = self.images.iter().map(|m| &(g * m) * &g_inv).collect();
        let inverses = self.inverses.iter().map(|m| &(g * m) * &g_inv).collect();
        Ok(Self { group: self.group.clone(), rank: self.rank, images, inverses })
    }

    pub fn trace_invariants(&self, words: &[Word]) -> Result<Vec<T>> {
        words.iter().map(|w| Ok(self.evaluate_word(w)?.trace())).collect()
    }

    /// Reductivity for rank ≤ 2.
    ///
    /// Rank 2 uses the associative algebra spanned by the images: dimension 4
    /// is irreducible (Burnside), dimension 1 is scalar, dimension 3 is a
    /// Borel algebra (one invariant line, no complement), and dimension 2 is
    /// `span{I, N}`, reductive iff `N` has two distinct eigenvalues.
    /// Rank ≥ 3 returns `Unknown`.
    pub fn reductivity(&self, tol: f64) -> ReductivityVerdict<T> {
        match self.rank {
            1 => ReductivityVerdict { status: Reductivity::Reductive, witness: None },
            2 => reductivity_rank2(&self.images, tol),
            _ => ReductivityVerdict { status: Reductivity::Unknown, witness: None },
        }
    }

    /// `true` if `v` is nonzero and spans a line preserved by every image.
    pub fn is_invariant_line(&self, v: &[T], tol: f64) -> bool {
        if v.len() != self.rank || v.iter().all(|x| x.is_zero_within(tol)) {
            return false;
        }
        self.images.iter().all(|m| {
            let mv = m.apply(v);
            let stacked = Matrix::new(2, self.rank, v.iter().chain(&mv).cloned().collect()).expect("shape");
            stacked.rank(tol) == 1
        })
    }
}

fn flatten<T: Field>(m: &Matrix<T>) -> Vec<T> {
    m.entries().to_vec()
}

/// Linear span of `I` and all words in the images, as a matrix basis.
pub fn generated_algebra<T: Field>(images: &[Matrix<T>], tol: f64) -> Vec<Matrix<T>> {
    let n = images.first().map_or(1, Matrix::rows);
    let full = n * n;
    let mut basis: Vec<Matrix<T>> = Vec::new();
    let mut stack: Vec<Matrix<T>> = Vec::new();
    let try_add = |basis: &mut Vec<Matrix<T>>, m: Matrix<T>| -> bool {
        let mut rows: Vec<T> = basis.iter().flat_map(flatten).collect();
        rows.extend(flatten(&m));
        let stacked = Matrix::new(basis.len() + 1, full, rows).expect("shape");
        if stacked.rank(tol) > basis.len() {
            basis.push(m);
            true
        } else {
            false
        }
    };
    let id = Matrix::identity(n);
    try_add(&mut basis, id.clone());
    stack.push(id);
    while let Some(x) = stack.pop() {
        if basis.len() == full {
            break;
        }
        for m in images {
            let y = m * &x;
            if try_add(&mut basis, y.clone()) {
                stack.push(y);
            }
        }
    }
    basis
}

fn largest_column<T: Field>(m: &Matrix<T>) -> Vec<T> {
    let col = (0..m.cols())
        .max_by(|&a, &b| {
            let na: f64 = (0..m.rows()).map(|i| m.get(i, a).magnitude()).sum();
            let nb: f64 = (0..m.rows()).map(|i| m.get(i, b).magnitude()).sum();
            na.total_cmp(&nb)
        })
        .unwrap_or(0);
    (0..m.rows()).map(|i| m.get(i, col).clone()).collect()
}

fn reductivity_rank2<T: Field>(images: &[Matrix<T>], tol: f64) -> ReductivityVerdict<T> {
    let reductive = ReductivityVerdict { status: Reductivity::Reductive, witness: None };
    let algebra = generated_algebra(images, tol);
    match algebra.len() {
        2 => {
            let n = &algebra[1];
            let tr = n.trace();
            let det = n.determinant().expect("square");
            let disc = tr.clone() * tr.clone() - T::from_i64(4) * det;
            let scale = 1.0 + n.norm().powi(2);
            if !disc.is_zero_within(tol * scale) {
                return reductive;
            }
            let half_trace = tr / T::from_i64(2);
            let nilpotent = n - &Matrix::identity(2).scale(&half_trace);
            ReductivityVerdict { status: Reductivity::NonReductive, witness: Some(largest_column(&nilpotent)) }
        }
        3 => {
            let (x, y) = (&algebra[1], &algebra[2]);
            let bracket = &(x * y) - &(y * x);
            ReductivityVerdict { status: Reductivity::NonReductive, witness: Some(largest_column(&bracket)) }
        }
        _ => reductive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{gi, gq, GaussianRational, C64};

    type Q = GaussianRational;

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| gq(x, 1)).collect()).collect()).unwrap()
    }

    fn unipotent() -> Matrix<Q> {
        m(&[&[1, 1], &[0, 1]])
    }

    #[test]
    fn genus_one_presentation() {
        let g = surface_group(1).unwrap();
        assert_eq!(g.generators(), 2);
        assert_eq!(
            g.relators(),
            &[Word::new(vec![Letter::gen(0), Letter::gen(1), Letter::inv(0), Letter::inv(1)])]
        );
        assert_eq!(surface_group(0), Err(Error::InvalidGenus(0)));
    }

    #[test]
    fn genus_two_relator_is_product_of_commutators() {
        let g = surface_group(2).unwrap();
        assert_eq!(g.generators(), 4);
        let r = &g.relators()[0];
        assert_eq!(r.len(), 8);
        assert_eq!(r.letters()[4..], [Letter::gen(2), Letter::gen(3), Letter::inv(2), Letter::inv(3)]);
        assert_eq!(r.exponent_sums(4), vec![0; 4]);
    }

    #[test]
    fn free_reduction_is_idempotent() {
        let w = Word::new(vec![Letter::gen(0), Letter::gen(1), Letter::inv(1), Letter::inv(0), Letter::gen(2)]);
        let r = w.free_reduce();
        assert_eq!(r, Word::new(vec![Letter::gen(2)]));
        assert_eq!(r.free_reduce(), r);
    }

    #[test]
    fn out_of_range_relator_rejected() {
        let bad = Word::new(vec![Letter::gen(3)]);
        assert_eq!(FpGroup::new(2, vec![bad]), Err(Error::IndexOutOfRange { index: 3, generators: 2 }));
    }

    #[test]
    fn evaluate_commutator_of_elementary_matrices() {
        let g = surface_group(1).unwrap();
        let rep = Representation::new(g.clone(), vec![unipotent(), m(&[&[1, 0], &[1, 1]])]).unwrap();
        // [A,B] = A B A⁻¹ B⁻¹
        assert_eq!(rep.evaluate_word(&g.relators()[0]).unwrap(), m(&[&[3, -1], &[1, 0]]));
        assert_eq!(rep.evaluate_word(&Word::empty()).unwrap(), Matrix::identity(2));
        assert!(!rep.check_relations(0.0));
        let bad = Word::new(vec![Letter::gen(5)]);
        assert!(matches!(rep.evaluate_word(&bad), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn unipotent_example_satisfies_relator() {
        for genus in 1..=3 {
            let g = surface_group(genus).unwrap();
            let rep = Representation::new(g.clone(), vec![unipotent(); 2 * genus as usize]).unwrap();
            assert!(rep.check_relations(0.0));
        }
    }

    #[test]
    fn abelian_rank_one_satisfies_relator() {
        let g = surface_group(1).unwrap();
        let rep = Representation::new(g, vec![Matrix::scalar(gq(2, 1)), Matrix::scalar(gi(0, 3))]).unwrap();
        assert!(rep.check_relations(0.0));
    }

    #[test]
    fn conjugation_by_permutation_swaps_diagonal() {
        let g = surface_group(1).unwrap();
        let rep = Representation::new(g, vec![m(&[&[2, 0], &[0, 3]]), m(&[&[5, 0], &[0, 7]])]).unwrap();
        let p = m(&[&[0, 1], &[1, 0]]);
        let c = rep.conjugate(&p).unwrap();
        assert_eq!(c.images()[0], m(&[&[3, 0], &[0, 2]]));
        assert_eq!(c.images()[1], m(&[&[7, 0], &[0, 5]]));
        assert_eq!(rep.conjugate(&Matrix::identity(2)).unwrap(), rep);
        assert_eq!(rep.conjugate(&m(&[&[1, 1], &[1, 1]])), Err(Error::Singular));
    }

    #[test]
    fn unipotent_traces_match_trivial() {
        let g = surface_group(2).unwrap();
        let rep = Representation::new(g.clone(), vec![unipotent(); 4]).unwrap();
        let words = g.standard_words();
        let trivial = Representation::<Q>::trivial(g, 2);
        assert_eq!(rep.trace_invariants(&words).unwrap(), trivial.trace_invariants(&words).unwrap());
        assert!(rep.trace_invariants(&words).unwrap().iter().all(|t| *t == gq(2, 1)));
    }

    #[test]
    fn reductivity_cases() {
        let g = surface_group(1).unwrap();
        let unip = Representation::new(g.clone(), vec![unipotent(), unipotent()]).unwrap();
        let v = unip.reductivity(0.0);
        assert_eq!(v.status, Reductivity::NonReductive);
        let w = v.witness.unwrap();
        assert_eq!(w, vec![gq(1, 1), gq(0, 1)]);
        assert!(unip.is_invariant_line(&w, 0.0));

        let diag = Representation::new(g.clone(), vec![m(&[&[2, 0], &[0, 3]]), m(&[&[5, 0], &[0, 7]])]).unwrap();
        assert_eq!(diag.reductivity(0.0).status, Reductivity::Reductive);

        // no common eigenvector: the swap has eigenlines (1,1), (1,-1); the
        // unipotent has only (1,0)
        let irreducible = Representation::new(g.clone(), vec![m(&[&[0, 1], &[1, 0]]), unipotent()]).unwrap();
        assert_eq!(generated_algebra(irreducible.images(), 0.0).len(), 4);
        assert_eq!(irreducible.reductivity(0.0).status, Reductivity::Reductive);

        // Borel: upper triangular, non-commuting
        let borel = Representation::new(g.clone(), vec![m(&[&[2, 1], &[0, 3]]), unipotent()]).unwrap();
        let v = borel.reductivity(0.0);
        assert_eq!(v.status, Reductivity::NonReductive);
        assert!(borel.is_invariant_line(&v.witness.unwrap(), 0.0));

        let scalar = Representation::new(g.clone(), vec![m(&[&[2, 0], &[0, 2]]), Matrix::identity(2)]).unwrap();
        assert_eq!(scalar.reductivity(0.0).status, Reductivity::Reductive);

        let rank1 = Representation::new(g.clone(), vec![Matrix::scalar(gq(2, 1)), Matrix::scalar(gq(3, 1))]).unwrap();
        assert_eq!(rank1.reductivity(0.0).status, Reductivity::Reductive);

        let rank3 = Representation::<Q>::trivial(g, 3);
        assert_eq!(rank3.reductivity(0.0).status, Reductivity::Unknown);
    }

    /// Oracle: common eigenvectors by intersecting eigenspaces over all
    /// eigenvalue choices (rational eigenvalues only).
    #[test]
    fn eigenspace_intersection_oracle_agrees() {
        let swap = m(&[&[0, 1], &[1, 0]]);
        let unip = unipotent();
        let mut common = 0;
        for l1 in [-1i64, 1] {
            let s1 = (&swap - &Matrix::identity(2).scale(&gq(l1, 1))).nullspace(0.0);
            let s2 = (&unip - &Matrix::identity(2)).nullspace(0.0);
            for a in &s1 {
                for b in &s2 {
                    let stacked = Matrix::new(2, 2, a.iter().chain(b).cloned().collect()).unwrap();
                    if stacked.rank(0.0) == 1 {
                        common += 1;
                    }
                }
            }
        }
        assert_eq!(common, 0);
    }

    #[test]
    fn float_mode_reductivity() {
        let c = |x: f64| C64::new(x, 0.0);
        let g = surface_group(1).unwrap();
        let u = Matrix::from_rows(vec![vec![c(1.0), c(1.0)], vec![c(0.0), c(1.0)]]).unwrap();
        let rep = Representation::new(g, vec![u.clone(), u]).unwrap();
        let v = rep.reductivity(1e-9);
        assert_eq!(v.status, Reductivity::NonReductive);
        assert!(rep.is_invariant_line(&v.witness.unwrap(), 1e-9));
    }

    mod props {
        use super::*;
        use crate::numkit::{gaussian, rational};
        use proptest::prelude::*;

        fn gaussian_entry() -> impl Strategy<Value = Q> {
            (-4i64..=4, 1i64..=3, -4i64..=4).prop_map(|(a, b, c)| gaussian(rational(a, b), rational(c, 1)))
        }

        fn invertible_2x2() -> impl Strategy<Value = Matrix<Q>> {
            prop::collection::vec(gaussian_entry(), 4)
                .prop_map(|v| Matrix::new(2, 2, v).unwrap())
                .prop_filter("invertible", |m| m.is_invertible(0.0))
        }

        fn word(n: usize) -> impl Strategy<Value = Word> {
            prop::collection::vec((0..n, any::<bool>()), 0..6)
                .prop_map(|v| v.into_iter().map(|(g, i)| Letter { generator: g, inverse: i }).collect())
        }

        proptest! {
            #[test]
            fn traces_are_conjugation_invariant(a in invertible_2x2(), b in invertible_2x2(), g in invertible_2x2()) {
                let grp = surface_group(1).unwrap();
                let rep = Representation::new(grp.clone(), vec![a, b]).unwrap();
                let words = grp.standard_words();
                let conj = rep.conjugate(&g).unwrap();
                prop_assert_eq!(rep.trace_invariants(&words).unwrap(), conj.trace_invariants(&words).unwrap());
                prop_assert_eq!(rep.check_relations(0.0), conj.check_relations(0.0));
            }

            #[test]
            fn evaluation_is_a_homomorphism(a in invertible_2x2(), b in invertible_2x2(), w1 in word(2), w2 in word(2)) {
                let rep = Representation::new(surface_group(1).unwrap(), vec![a, b]).unwrap();
                let lhs = rep.evaluate_word(&w1.concat(&w2)).unwrap();
                let rhs = &rep.evaluate_word(&w1).unwrap() * &rep.evaluate_word(&w2).unwrap();
                prop_assert_eq!(lhs, rhs);
                prop_assert_eq!(rep.evaluate_word(&w1.free_reduce()).unwrap(), rep.evaluate_word(&w1).unwrap());
            }

            #[test]
            fn commuting_diagonal_reps_are_valid(x in gaussian_entry(), y in gaussian_entry(), g in invertible_2x2()) {
                prop_assume!(!num_traits::Zero::is_zero(&x) && !num_traits::Zero::is_zero(&y));
                let one = gq(1, 1);
                let a = Matrix::diagonal(vec![x.clone(), one.clone()]);
                let b = Matrix::diagonal(vec![one, y]);
                let rep = Representation::new(surface_group(1).unwrap(), vec![a, b]).unwrap();
                prop_assert!(rep.check_relations(0.0));
                prop_assert!(rep.conjugate(&g).unwrap().check_relations(0.0));
            }

            #[test]
            fn rank_one_assignments_always_valid(vals in prop::collection::vec(gaussian_entry(), 6)) {
                prop_assume!(vals.iter().all(|v| !num_traits::Zero::is_zero(v)));
                let rep = Representation::new(surface_group(3).unwrap(), vals.into_iter().map(Matrix::scalar).collect()).unwrap();
                prop_assert!(rep.check_relations(0.0));
            }
        }
    }
}
