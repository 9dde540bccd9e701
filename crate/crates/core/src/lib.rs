//! Exact computations in the affine building of `SL(n)` over a field of
//! Puiseux series with rational exponents, modelled as equivalence classes
//! of points of a non-standard symmetric space.

pub mod apartment;
pub mod boundaries;
pub mod building;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod rootsys;
pub mod symspace;
pub mod valfield;

pub use error::{Error, Result};
