//! Exact arithmetic over the Gaussian rationals and the dense linear algebra
//! every other module is built on. No floating point is used anywhere.

mod charpoly;
mod gauss;
mod matrix;
mod qubit;

pub use charpoly::{char_poly, is_psd};
pub use gauss::{parse_rat, rat, rat_to_string, GaussRat, Rat};
pub use matrix::CMatrix;
pub use qubit::{inner2, ProjQubit};

pub(crate) use matrix::{bareiss_rank, GaussInt};
