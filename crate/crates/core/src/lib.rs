//! Exact computation of harmonic weight enumerators of linear codes over
//! finite commutative rings, harmonic Tutte and coboundary polynomials of
//! demi-matroids, and verification of the identities relating them.

pub mod code;
pub mod demimatroid;
pub mod enumerators;
pub mod error;
pub mod harmonic;
pub mod invariants;
pub mod poly;
pub mod ring;
pub mod subset;
pub mod suite;

pub use error::{Error, Result};
