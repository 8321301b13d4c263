//! Discrete Morse theory on simplicial manifolds with boundary: matchings,
//! collapses, Morse-function calculus, locally constructible assembly and
//! recognition tools.

pub mod calculus;
pub mod io;
pub mod lc;
pub mod complex;
pub mod error;
pub mod homology;
pub mod morse;
pub mod recognition;
pub mod rng;

pub use complex::{FacePoset, SimplicialComplex};
pub use error::{Error, Result};
pub use homology::{Coefficients, HomologyProfile};
