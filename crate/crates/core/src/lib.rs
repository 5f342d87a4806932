//! Collision sets of orbits for the families `z^d + λ` and `g(z) + λ` over
//! finite fields, with the supporting finite-field and polynomial algebra.

pub mod addcase;
pub mod collision;
pub mod error;
pub mod heights;
pub mod gf;
pub mod iterates;
pub mod orbit;
pub mod poly;

pub use error::{Error, Result};
