//! Round trips between the Betti, Čech, lattice and Fuchsian descriptions
//! of flat bundles, each summarized by an [`EquivalenceReport`].

use sha2::{Digest, Sha256};

use crate::betti::{surface_group, Representation, Word};
use crate::cech::{exp_lift, Cochain, CoverNerve, ModuliChart, Multiplicative};
use crate::error::{Error, Result};
use crate::fuchsian::{lambda_rescale, monodromy, FuchsianSystem, LambdaSystem, LoopKind, MonodromyOptions};
use crate::lattice::{abelian_moduli, LatticeConnection, TriangulatedSurface};
use crate::localsys::{self, abelian_representation, homology_basis_words, pi1_presentation, rep_to_cocycle, GCocycle, Pi1Presentation};
use crate::numkit::{Field, Matrix, C64};

/// Hex SHA-256 of a byte string.
pub fn fingerprint(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedInvariants {
    pub name: String,
    pub values: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    /// Functors applied, in order, e.g. `betti>cech>betti`.
    pub route: String,
    pub fingerprint: String,
    pub invariants_before: Vec<C64>,
    pub invariants_after: Vec<C64>,
    /// Further sides of a multi-way comparison.
    pub intermediate: Vec<NamedInvariants>,
    /// `Some` for exact routes.
    pub exact_equal: Option<bool>,
    pub max_discrepancy: f64,
    pub tolerance: f64,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.exact_equal.unwrap_or(self.max_discrepancy <= self.tolerance)
    }
}

fn max_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Rank of the free part of `H¹`, halved: the genus of a closed orientable nerve.
fn nerve_genus(nerve: &CoverNerve) -> u32 {
    (ModuliChart::new(nerve).map_or(0, |c| c.dimension()) / 2) as u32
}

/// Transfers a representation of the genus-`g` surface group with commuting
/// images to the nerve's edge-path group, sending `A₁, B₁, …` to the
/// homology loops dual to the free `H¹(ℤ)` basis.
pub fn surface_rep_to_nerve<T: Field>(rep: &Representation<T>, nerve: &CoverNerve, p: &Pi1Presentation, tol: f64) -> Result<Representation<T>> {
    let genus = nerve_genus(nerve);
    if genus == 0 || rep.group() != &surface_group(genus)? {
        return Err(Error::PresentationMismatch(format!("expected the genus-{genus} surface group")));
    }
    let images = rep.images();
    for (i, a) in images.iter().enumerate() {
        for b in &images[i + 1..] {
            if !(a * b).approx_eq(&(b * a), tol) {
                return Err(Error::PresentationMismatch("images do not commute, so the representation does not factor through homology".into()));
            }
        }
    }
    abelian_representation(nerve, p, images)
}

/// Reads a nerve representation back as a surface-group representation by
/// evaluating it on the homology loops.
pub fn nerve_rep_to_surface<T: Field>(rep: &Representation<T>, nerve: &CoverNerve, p: &Pi1Presentation) -> Result<Representation<T>> {
    let words = homology_basis_words(nerve, p)?;
    let images = words.iter().map(|w| rep.evaluate_word(w)).collect::<Result<Vec<_>>>()?;
    Representation::new(surface_group((words.len() / 2) as u32)?, images)
}

fn traces<T: Field>(rep: &Representation<T>, words: &[Word]) -> Result<(Vec<T>, Vec<C64>)> {
    let exact = rep.trace_invariants(words)?;
    let floats = exact.iter().map(Field::to_c64).collect();
    Ok((exact, floats))
}

fn describe<T: Field>(rep: &Representation<T>) -> String {
    format!("{:?}|{:?}", rep.group(), rep.images())
}

/// rep → cocycle → rep, compared on trace invariants of the standard words.
///
/// `rep` may be a representation of the nerve's edge-path group, or of the
/// surface group with commuting images (transferred through homology).
pub fn roundtrip_betti_cech<T: Field>(rep: &Representation<T>, nerve: &CoverNerve, tol: f64) -> Result<EquivalenceReport> {
    let p = pi1_presentation(nerve, 0)?;
    let words = rep.group().standard_words();
    let (before, before_f) = traces(rep, &words)?;
    let on_nerve = rep.group() == p.group();
    let nerve_rep = if on_nerve { rep.clone() } else { surface_rep_to_nerve(rep, nerve, &p, tol)? };
    let cocycle = rep_to_cocycle(&nerve_rep, nerve, &p)?;
    let back = localsys::monodromy(&cocycle, nerve, &p, tol)?;
    let back = if on_nerve { back } else { nerve_rep_to_surface(&back, nerve, &p)? };
    let (after, after_f) = traces(&back, &words)?;
    let exact_equal = T::EXACT.then(|| before == after);
    let route = if on_nerve { "betti>cech>betti" } else { "betti(surface)>betti(nerve)>cech>betti(nerve)>betti(surface)" };
    Ok(EquivalenceReport {
        route: route.into(),
        fingerprint: fingerprint(describe(rep).as_bytes()),
        max_discrepancy: max_distance(&before_f, &after_f),
        invariants_before: before_f,
        invariants_after: after_f,
        intermediate: vec![],
        exact_equal,
        tolerance: tol,
    })
}

/// Rank-1 cocycle `u_e = ∏_r t_r^{z_r(e)}` over the free `H¹(ℤ)` basis: the
/// point of the moduli torus with coordinates `t`.
pub fn cocycle_with_moduli(nerve: &CoverNerve, targets: &[C64]) -> Result<Cochain<Multiplicative<C64>>> {
    let chart = ModuliChart::new(nerve)?;
    if targets.len() != chart.dimension() {
        return Err(Error::DimensionMismatch(format!("{} targets for H¹ of rank {}", targets.len(), chart.dimension())));
    }
    let values = (0..nerve.count(1))
        .map(|e| Multiplicative(chart.basis().iter().zip(targets).fold(C64::new(1.0, 0.0), |acc, (z, t)| acc * t.powi(z.values()[e] as i32))))
        .collect();
    Cochain::new(nerve, 1, values)
}

/// Three rank-1 moduli computations of one cocycle: Čech (exp-lift then
/// coordinates), lattice (holonomy of `T = u`) and Betti (monodromy on the
/// homology loops).
pub fn roundtrip_cech_lattice(u: &Cochain<Multiplicative<C64>>, nerve: &CoverNerve, surface: &TriangulatedSurface, tol: f64) -> Result<EquivalenceReport> {
    let surface_genus = surface.genus().ok_or_else(|| Error::InvalidSurface("surface is not closed and oriented".into()))?;
    let genus = nerve_genus(nerve);
    if surface_genus != genus {
        return Err(Error::GenusMismatch { surface: surface_genus, nerve: genus });
    }
    if &surface.nerve() != nerve {
        return Err(Error::InvalidNerve("the cocycle's nerve is not the surface's nerve".into()));
    }
    let lift = exp_lift(nerve, u, tol)?.ok_or_else(|| Error::NotCocycle("cocycle has a nonzero Chern class".into()))?;
    let cech = ModuliChart::new(nerve)?.point(nerve, &lift, tol)?;

    let given = nerve.simplices(1).iter().zip(u.values()).map(|(e, v)| ((e[0], e[1]), Matrix::scalar(v.0))).collect();
    let conn = LatticeConnection::new(surface, 1, given)?;
    let lattice = abelian_moduli(surface, &conn, tol)?;

    let p = pi1_presentation(nerve, 0)?;
    let cocycle = GCocycle::new(1, nerve.simplices(1).iter().zip(u.values()).map(|(e, v)| ((e[0], e[1]), Matrix::scalar(v.0))).collect())?;
    let rep = localsys::monodromy(&cocycle, nerve, &p, tol)?;
    let betti = homology_basis_words(nerve, &p)?
        .iter()
        .map(|w| Ok(*rep.evaluate_word(w)?.get(0, 0)))
        .collect::<Result<Vec<_>>>()?;

    let max_discrepancy = max_distance(&cech, &lattice).max(max_distance(&cech, &betti)).max(max_distance(&lattice, &betti));
    Ok(EquivalenceReport {
        route: "cech>lattice>betti".into(),
        fingerprint: fingerprint(format!("{:?}|{:?}", nerve.maximal_simplices(), u.values()).as_bytes()),
        invariants_before: cech,
        invariants_after: lattice,
        intermediate: vec![NamedInvariants { name: "betti".into(), values: betti }],
        exact_equal: None,
        max_discrepancy,
        tolerance: tol,
    })
}

/// Monodromy of the λ-system against the rescaled ordinary system, for each λ.
pub fn lambda_equivalence(sys: &FuchsianSystem, lambdas: &[C64], opts: &MonodromyOptions, tol: f64) -> Result<EquivalenceReport> {
    if lambdas.iter().any(|l| l.norm() == 0.0) {
        return Err(Error::ZeroLambda);
    }
    let kinds = [LoopKind::Around0, LoopKind::Around1, LoopKind::AroundInfinity];
    let mut before = Vec::new();
    let mut after = Vec::new();
    let mut max_discrepancy: f64 = 0.0;
    for &l in lambdas {
        let direct = monodromy(&LambdaSystem::new(sys.clone(), l)?, opts)?;
        let rescaled = monodromy(&lambda_rescale(sys, l)?, opts)?;
        for k in kinds {
            max_discrepancy = max_discrepancy.max(direct.matrix(k).distance(rescaled.matrix(k)));
            before.push(direct.matrix(k).trace());
            after.push(rescaled.matrix(k).trace());
        }
    }
    Ok(EquivalenceReport {
        route: "fuchsian(lambda)>fuchsian(A/lambda)".into(),
        fingerprint: fingerprint(format!("{:?}|{:?}|{:?}", sys.a0(), sys.a1(), lambdas).as_bytes()),
        invariants_before: before,
        invariants_after: after,
        intermediate: vec![],
        exact_equal: None,
        max_discrepancy,
        tolerance: tol,
    })
}
