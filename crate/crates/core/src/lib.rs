//! Exact Chen-Ruan orbifold cohomology of weighted projective spaces.
//!
//! The pipeline runs weights -> [`fan`] -> [`sectors`] -> [`cohomology`] and
//! [`ringops`]. Every number is an exact integer or [`Rat`]; nothing here
//! touches floating point.

pub mod cohomology;
pub mod error;
pub mod fan;
pub mod ratlat;
pub mod ringops;
pub mod sectors;

pub use error::{Error, Result};
pub use ratlat::{IntMat, Rat, RatMat, SnfResult};
