use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cochain::{coboundary_matrix, Additive, Cochain};
use super::nerve::CoverNerve;
use crate::error::{Error, Result};
use crate::numkit::{smith_normal_form, Field, GaussianRational, IntMatrix, Matrix, Rational, SmithForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Z,
    C,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyReport {
    pub degree: usize,
    pub free_rank: usize,
    /// Invariant factors greater than one (integer coefficients only).
    pub torsion: Vec<i64>,
    /// Integer cocycles: free generators first, then one per torsion factor.
    pub representatives: Vec<Cochain<i64>>,
}

/// `H^p(𝒰, coeffs) = ker d_p / im d_{p−1}`.
///
/// The identification with the cohomology of the covered space relies on
/// the nerve's declared good-cover assumption, which is not verified.
pub fn cohomology(nerve: &CoverNerve, degree: usize, coeffs: Coefficients) -> CohomologyReport {
    match coeffs {
        Coefficients::Z => IntegralCohomology::new(nerve, degree).report(),
        Coefficients::C => complex_cohomology(nerve, degree),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionComponent {
    pub order: i64,
    pub residue: i64,
}

/// Coordinates of a class in `H^p(ℤ) ≅ ℤ^free ⊕ ⨁ ℤ/dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    pub free: Vec<i64>,
    pub torsion: Vec<TorsionComponent>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|t| t.residue == 0)
    }
}

/// Integral cohomology in one degree with enough structure to reduce
/// cocycles to classes and to solve `d m = c` for exact cocycles.
#[derive(Debug, Clone)]
pub struct IntegralCohomology {
    degree: usize,
    cochain_count: usize,
    differential: IntMatrix,
    /// Columns form a ℤ-basis of `ker d_p`.
    kernel_basis: IntMatrix,
    /// Left inverse of `kernel_basis` on `ker d_p`.
    kernel_coords: IntMatrix,
    /// Smith form of `d_{p−1}` written in kernel coordinates.
    reduction: SmithForm,
}

impl IntegralCohomology {
    pub fn new(nerve: &CoverNerve, degree: usize) -> Self {
        let n_p = nerve.count(degree);
        let d_p = coboundary_matrix(nerve, degree);
        let snf = smith_normal_form(&d_p);
        let r = snf.rank();
        let mut kernel_basis = IntMatrix::zeros(n_p, n_p - r);
        let mut kernel_coords = IntMatrix::zeros(n_p - r, n_p);
        for (k, j) in (r..n_p).enumerate() {
            for i in 0..n_p {
                kernel_basis.set(i, k, snf.right.get(i, j));
                kernel_coords.set(k, i, snf.right_inverse.get(j, i));
            }
        }
        let image = match degree {
            0 => IntMatrix::zeros(n_p, 0),
            _ => coboundary_matrix(nerve, degree - 1),
        };
        let in_kernel = kernel_coords.mul(&image);
        let reduction = smith_normal_form(&in_kernel);
        Self { degree, cochain_count: n_p, differential: d_p, kernel_basis, kernel_coords, reduction }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn kernel_dim(&self) -> usize {
        self.kernel_basis.cols()
    }

    pub fn free_rank(&self) -> usize {
        self.kernel_dim() - self.reduction.rank()
    }

    pub fn torsion(&self) -> Vec<i64> {
        self.reduction.diagonal.iter().copied().filter(|&d| d > 1).collect()
    }

    /// Cocycle `K · U⁻¹ eᵢ` for the `i`-th adapted kernel coordinate.
    fn adapted_generator(&self, i: usize) -> Vec<i64> {
        let u_inv_col = self.reduction.left_inverse.column(i);
        self.kernel_basis.apply(&u_inv_col)
    }

    pub fn free_generators(&self) -> Vec<Vec<i64>> {
        (self.reduction.rank()..self.kernel_dim()).map(|i| self.adapted_generator(i)).collect()
    }

    pub fn torsion_generators(&self) -> Vec<Vec<i64>> {
        (0..self.reduction.rank())
            .filter(|&i| self.reduction.diagonal[i] > 1)
            .map(|i| self.adapted_generator(i))
            .collect()
    }

    pub fn report(&self) -> CohomologyReport {
        let representatives = self
            .free_generators()
            .into_iter()
            .chain(self.torsion_generators())
            .map(|values| Cochain::from_values_unchecked(self.degree, values))
            .collect();
        CohomologyReport {
            degree: self.degree,
            free_rank: self.free_rank(),
            torsion: self.torsion(),
            representatives,
        }
    }

    fn adapted_coordinates(&self, c: &Cochain<i64>) -> Result<Vec<i64>> {
        if c.degree() != self.degree || c.values().len() != self.cochain_count {
            return Err(Error::DimensionMismatch("cochain does not match this cohomology".into()));
        }
        if self.differential.apply(c.values()).iter().any(|&x| x != 0) {
            return Err(Error::NotCocycle(format!("integer {}-cochain is not closed", self.degree)));
        }
        let y = self.kernel_coords.apply(c.values());
        Ok(self.reduction.left.apply(&y))
    }

    pub fn class_of(&self, c: &Cochain<i64>) -> Result<CohomologyClass> {
        let z = self.adapted_coordinates(c)?;
        let r = self.reduction.rank();
        let torsion = (0..r)
            .filter(|&i| self.reduction.diagonal[i] > 1)
            .map(|i| TorsionComponent { order: self.reduction.diagonal[i], residue: z[i].rem_euclid(self.reduction.diagonal[i]) })
            .collect();
        Ok(CohomologyClass { free: z[r..].to_vec(), torsion })
    }

    /// An integer `(p−1)`-cochain `m` with `d m = c`, if `c` is exact over ℤ.
    pub fn coboundary_preimage(&self, nerve: &CoverNerve, c: &Cochain<i64>) -> Result<Option<Cochain<i64>>> {
        let z = self.adapted_coordinates(c)?;
        let r = self.reduction.rank();
        if z[r..].iter().any(|&x| x != 0) {
            return Ok(None);
        }
        let mut t = vec![0i64; self.reduction.right.rows()];
        for i in 0..r {
            let d = self.reduction.diagonal[i];
            if z[i] % d != 0 {
                return Ok(None);
            }
            t[i] = z[i] / d;
        }
        if self.degree == 0 {
            return Ok(Some(Cochain::from_values_unchecked(0, vec![])));
        }
        let m = self.reduction.right.apply(&t);
        let out = Cochain::new(nerve, self.degree - 1, m)?;
        Ok(Some(out))
    }
}

fn int_to_q(x: i64) -> GaussianRational {
    GaussianRational::from_i64(x)
}

fn int_matrix_to_q(m: &IntMatrix) -> Option<Matrix<GaussianRational>> {
    (m.rows() > 0 && m.cols() > 0).then(|| m.to_gaussian())
}

/// Primitive integer vector proportional to a rational (real) vector.
fn primitive_integer(v: &[GaussianRational]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.re.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (&x.re * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    ints.iter().map(|x| (x / &g).to_i64().expect("entries fit in i64")).collect()
}

fn complex_cohomology(nerve: &CoverNerve, degree: usize) -> CohomologyReport {
    let n_p = nerve.count(degree);
    let d_p = coboundary_matrix(nerve, degree);
    let kernel: Vec<Vec<GaussianRational>> = match int_matrix_to_q(&d_p) {
        Some(m) => m.nullspace(0.0),
        None => (0..n_p)
            .map(|i| (0..n_p).map(|j| int_to_q(i64::from(i == j))).collect())
            .collect(),
    };
    let image_cols: Vec<Vec<GaussianRational>> = if degree == 0 {
        vec![]
    } else {
        let d = coboundary_matrix(nerve, degree - 1);
        (0..d.cols()).map(|j| d.column(j).into_iter().map(int_to_q).collect()).collect()
    };
    let image_rank = rank_of_vectors(&image_cols);
    let mut spanning = independent_subset(&image_cols);
    let mut representatives = Vec::new();
    for v in &kernel {
        spanning.push(v.clone());
        if rank_of_vectors(&spanning) == spanning.len() {
            representatives.push(Cochain::from_values_unchecked(degree, primitive_integer(v)));
        } else {
            spanning.pop();
        }
    }
    CohomologyReport {
        degree,
        free_rank: kernel.len() - image_rank,
        torsion: vec![],
        representatives,
    }
}

fn rank_of_vectors(vs: &[Vec<GaussianRational>]) -> usize {
    if vs.is_empty() || vs[0].is_empty() {
        return 0;
    }
    Matrix::from_rows(vs.to_vec()).expect("equal lengths").rank(0.0)
}

fn independent_subset(vs: &[Vec<GaussianRational>]) -> Vec<Vec<GaussianRational>> {
    let mut out: Vec<Vec<GaussianRational>> = Vec::new();
    for v in vs {
        out.push(v.clone());
        if rank_of_vectors(&out) < out.len() {
            out.pop();
        }
    }
    out
}

/// Linear functionals reading off the coordinates of a class in a chosen
/// basis of `H^p(ℂ)`: `P · basisᵢ = eᵢ` and `P` vanishes on coboundaries.
#[derive(Debug, Clone)]
pub struct ClassCoordinates {
    degree: usize,
    basis: Vec<Cochain<i64>>,
    functionals: Vec<Vec<GaussianRational>>,
}

impl ClassCoordinates {
    pub fn new(nerve: &CoverNerve, degree: usize, basis: Vec<Cochain<i64>>) -> Result<Self> {
        let n_p = nerve.count(degree);
        let k = basis.len();
        if k == 0 {
            return Ok(Self { degree, basis, functionals: vec![] });
        }
        let mut columns: Vec<Vec<GaussianRational>> =
            basis.iter().map(|c| c.values().iter().map(|&x| int_to_q(x)).collect()).collect();
        if rank_of_vectors(&columns) < k {
            return Err(Error::DimensionMismatch("class basis is linearly dependent".into()));
        }
        if degree > 0 {
            let d = coboundary_matrix(nerve, degree - 1);
            for j in 0..d.cols() {
                columns.push(d.column(j).into_iter().map(int_to_q).collect());
                if rank_of_vectors(&columns) < columns.len() {
                    columns.pop();
                }
            }
            if rank_of_vectors(&columns[..k]) + rank_of_vectors(&columns[k..]) != columns.len() {
                return Err(Error::DimensionMismatch("class basis meets the coboundaries".into()));
            }
        }
        // left inverse (MᵀM)⁻¹Mᵀ of the full-column-rank M = [basis | coboundaries]
        let m = Matrix::from_rows(columns).expect("equal lengths").transpose();
        let mt = m.transpose();
        let gram_inv = (&mt * &m).inverse()?;
        let left = &gram_inv * &mt;
        let functionals = (0..k).map(|i| (0..n_p).map(|j| left.get(i, j).clone()).collect()).collect();
        Ok(Self { degree, basis, functionals })
    }

    pub fn basis(&self) -> &[Cochain<i64>] {
        &self.basis
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coordinates of a closed cochain in the basis (closedness is the caller's check).
    pub fn coordinates<T: Field>(&self, c: &Cochain<Additive<T>>) -> Vec<T> {
        self.functionals
            .iter()
            .map(|row| {
                row.iter()
                    .zip(c.values())
                    .fold(T::zero(), |acc, (p, v)| acc + T::from_gaussian(p) * v.0.clone())
            })
            .collect()
    }

    pub fn functional_rows(&self) -> &[Vec<GaussianRational>] {
        &self.functionals
    }
}

/// `H¹(ℤ)` inside `H¹(ℂ)`: the period lattice whose quotient is the rank-1 moduli torus.
#[derive(Debug, Clone)]
pub struct H1Lattice {
    pub z_basis: Vec<Cochain<i64>>,
    pub c_basis: Vec<Cochain<i64>>,
    /// Column `j` holds the coordinates of `z_basis[j]` in `c_basis`.
    pub inclusion: Vec<Vec<Rational>>,
}

pub fn h1_lattice_inclusion(nerve: &CoverNerve) -> Result<H1Lattice> {
    let integral = IntegralCohomology::new(nerve, 1);
    let complex = complex_cohomology(nerve, 1);
    let z_basis: Vec<Cochain<i64>> = integral
        .free_generators()
        .into_iter()
        .map(|v| Cochain::from_values_unchecked(1, v))
        .collect();
    if z_basis.len() != complex.free_rank {
        return Err(Error::RankMismatch { integral: z_basis.len(), complex: complex.free_rank });
    }
    let coords = ClassCoordinates::new(nerve, 1, complex.representatives.clone())?;
    let k = z_basis.len();
    let mut inclusion = vec![vec![Rational::zero(); k]; k];
    for (j, z) in z_basis.iter().enumerate() {
        let x: Vec<GaussianRational> = coords.coordinates(&z.map(|&v| Additive(int_to_q(v))));
        for (i, xi) in x.into_iter().enumerate() {
            inclusion[i][j] = xi.re;
        }
    }
    Ok(H1Lattice { z_basis, c_basis: complex.representatives, inclusion })
}

impl H1Lattice {
    pub fn rank(&self) -> usize {
        self.z_basis.len()
    }

    /// `|det|` of the inclusion matrix (1 when the complex basis is itself a ℤ-basis).
    pub fn index(&self) -> Rational {
        if self.inclusion.is_empty() {
            return Rational::one();
        }
        let m = Matrix::from_rows(
            self.inclusion.iter().map(|r| r.iter().map(|x| GaussianRational::new(x.clone(), Rational::zero())).collect()).collect(),
        )
        .expect("square");
        m.determinant().expect("square").re.abs()
    }
}
