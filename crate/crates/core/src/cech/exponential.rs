use super::cochain::{cech_differential, Additive, Cochain, Multiplicative};
use super::cohomology::{ClassCoordinates, CohomologyClass, IntegralCohomology};
use super::nerve::CoverNerve;
use crate::error::{Error, Result};
use crate::numkit::{exp_turns, log_turns, Field, C64};

/// Coordinates on the rank-1 moduli torus `H¹(ℂ)/H¹(ℤ) ≅ (ℂ^×)^{b₁}`.
///
/// The chosen `H¹(ℂ)` basis is the free part of `H¹(ℤ)`, so lattice
/// translates become integer shifts and `x ↦ e^{2πix}` removes them.
#[derive(Debug, Clone)]
pub struct ModuliChart {
    coords: ClassCoordinates,
}

impl ModuliChart {
    pub fn new(nerve: &CoverNerve) -> Result<Self> {
        let basis = IntegralCohomology::new(nerve, 1)
            .free_generators()
            .into_iter()
            .map(|v| Cochain::new(nerve, 1, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coords: ClassCoordinates::new(nerve, 1, basis)? })
    }

    pub fn dimension(&self) -> usize {
        self.coords.basis().len()
    }

    /// The `H¹(ℤ)` basis the coordinates refer to.
    pub fn basis(&self) -> &[Cochain<i64>] {
        self.coords.basis()
    }

    /// Additive coordinates of a closed cochain (defined modulo ℤ^{b₁}).
    pub fn periods<T: Field>(&self, nerve: &CoverNerve, a: &Cochain<Additive<T>>, tol: f64) -> Result<Vec<T>> {
        let da = cech_differential(nerve, a);
        let worst = da.values().iter().map(|v| v.0.magnitude()).fold(0.0, f64::max);
        let closed = da.values().iter().all(|v| v.0.is_zero_within(tol));
        if !closed {
            return Err(Error::NotClosed(worst));
        }
        Ok(self.coords.coordinates(a))
    }

    pub fn point<T: Field>(&self, nerve: &CoverNerve, a: &Cochain<Additive<T>>, tol: f64) -> Result<Vec<C64>> {
        Ok(self.periods(nerve, a, tol)?.iter().map(|x| exp_turns(x.to_c64())).collect())
    }
}

/// `exp(2πi · ⟨a, basis⟩)` for a closed ℂ-valued 1-cochain.
pub fn moduli_coordinates<T: Field>(nerve: &CoverNerve, a: &Cochain<Additive<T>>, tol: f64) -> Result<Vec<C64>> {
    ModuliChart::new(nerve)?.point(nerve, a, tol)
}

/// Result of the connecting map `δ : H¹(ℂ^×) → H²(ℤ)`.
#[derive(Debug, Clone)]
pub struct ChernClass {
    /// Chosen logarithms `a_ij = Log(u_ij)/(2πi)`.
    pub logarithm: Cochain<Additive<C64>>,
    /// `d a`, integer-valued.
    pub cocycle: Cochain<i64>,
    pub class: CohomologyClass,
}

fn check_multiplicative_cocycle(nerve: &CoverNerve, u: &Cochain<Multiplicative<C64>>, tol: f64) -> Result<()> {
    if u.degree() != 1 {
        return Err(Error::NotCocycle(format!("expected a 1-cochain, got degree {}", u.degree())));
    }
    if let Some(v) = u.values().iter().find(|v| v.0.norm() == 0.0) {
        return Err(Error::NotCocycle(format!("zero value {v:?} in a ℂ^× cochain")));
    }
    let du = cech_differential(nerve, u);
    if let Some((i, v)) = du.values().iter().enumerate().find(|(_, v)| (v.0 - C64::new(1.0, 0.0)).norm() > tol) {
        return Err(Error::NotCocycle(format!("(du) on {:?} is {}", nerve.simplices(2)[i], v.0)));
    }
    Ok(())
}

/// Principal-branch Chern class.
pub fn chern_class(nerve: &CoverNerve, u: &Cochain<Multiplicative<C64>>, tol: f64) -> Result<ChernClass> {
    chern_class_with_branch(nerve, u, &vec![0; u.values().len()], tol)
}

/// Chern class computed from `a_ij = Log(u_ij)/(2πi) + shift_ij`.
pub fn chern_class_with_branch(nerve: &CoverNerve, u: &Cochain<Multiplicative<C64>>, shift: &[i64], tol: f64) -> Result<ChernClass> {
    check_multiplicative_cocycle(nerve, u, tol)?;
    if shift.len() != u.values().len() {
        return Err(Error::DimensionMismatch("branch shift length".into()));
    }
    let logarithm = Cochain::new(
        nerve,
        1,
        u.values().iter().zip(shift).map(|(v, &s)| Additive(log_turns(v.0) + C64::new(s as f64, 0.0))).collect(),
    )?;
    let da = cech_differential(nerve, &logarithm);
    let mut ints = Vec::with_capacity(da.values().len());
    for (i, v) in da.values().iter().enumerate() {
        let r = v.0.re.round();
        if (v.0 - C64::new(r, 0.0)).norm() > tol {
            return Err(Error::NotCocycle(format!("(da) on {:?} is {} which is not an integer", nerve.simplices(2)[i], v.0)));
        }
        ints.push(r as i64);
    }
    let cocycle = Cochain::new(nerve, 2, ints)?;
    let class = IntegralCohomology::new(nerve, 2).class_of(&cocycle)?;
    Ok(ChernClass { logarithm, cocycle, class })
}

/// A closed `a` with `exp(2πi a)` equal to `u` edgewise, when `δ(u) = 0`.
pub fn exp_lift(nerve: &CoverNerve, u: &Cochain<Multiplicative<C64>>, tol: f64) -> Result<Option<Cochain<Additive<C64>>>> {
    let chern = chern_class(nerve, u, tol)?;
    if !chern.class.is_zero() {
        return Ok(None);
    }
    let m = IntegralCohomology::new(nerve, 2)
        .coboundary_preimage(nerve, &chern.cocycle)?
        .expect("zero class has a preimage");
    let lift = chern
        .logarithm
        .values()
        .iter()
        .zip(m.values())
        .map(|(a, &k)| Additive(a.0 - C64::new(k as f64, 0.0)))
        .collect();
    Ok(Some(Cochain::new(nerve, 1, lift)?))
}
