#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod encodings;
pub mod error;
pub mod linalg;
pub mod phases;
pub mod polynomials;
pub mod transforms;
pub mod random;

pub use error::{Error, Result};
pub use polynomials::PolyCoeffs;
