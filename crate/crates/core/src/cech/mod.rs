//! Čech cochains on the nerve of a cover, their cohomology, and the
//! exponential sequence `0 → ℤ → ℂ → ℂ^× → 0`.

mod cochain;
mod cohomology;
mod exponential;
mod nerve;

pub use cochain::{cech_differential, coboundary_matrix, Additive, Coefficient, CoefficientSystem, Cochain, Multiplicative};
pub use cohomology::{
    cohomology, h1_lattice_inclusion, ClassCoordinates, Coefficients, CohomologyClass, CohomologyReport, H1Lattice,
    IntegralCohomology, TorsionComponent,
};
pub use exponential::{chern_class, chern_class_with_branch, exp_lift, moduli_coordinates, ChernClass, ModuliChart};
pub use nerve::CoverNerve;
