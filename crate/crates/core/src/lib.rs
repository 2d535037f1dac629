//! Generalized Lorentz norms, dyadic block decompositions, anisotropic Besov
//! classes and numerical checks of hyperbolic-cross approximation bounds on the torus.

// `!(x > 0.0)` style guards deliberately reject NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod besov;
pub mod cli;
pub mod error;
pub mod grid;
pub mod norms;
pub mod numeric;
pub mod phi;
pub mod rearrange;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
