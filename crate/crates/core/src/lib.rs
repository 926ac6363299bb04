//! Flat bundles on surfaces in four descriptions: representations of the
//! fundamental group (Betti), Čech cocycles on a cover nerve, discrete
//! connections on a triangulation (lattice de Rham), and Fuchsian systems
//! on the thrice-punctured sphere, with round trips between them.
//!
//! Exact computations run over the Gaussian rationals ℚ(i); numerical ones
//! over `f64` complex numbers. See [`numkit::Field`].

pub mod betti;
pub mod cech;
pub mod complexes;
pub mod equivalences;
pub mod error;
pub mod fuchsian;
pub mod io;
pub mod lattice;
pub mod localsys;
pub mod numkit;

pub use error::{Error, Result};
pub use numkit::{Field, GaussianRational, Matrix, Mode, C64};
