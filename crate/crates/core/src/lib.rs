//! Exact Kazhdan-Lusztig cell data for small Weyl groups, Hecke modules over the cyclotomic
//! local ring, and verification of stratifying systems built from them.

pub mod cache;
pub mod cells;
pub mod coeffs;
pub mod error;
pub mod hecke;
pub mod jring;
pub mod hmod;
pub mod linalg;
pub mod strat;
pub mod weyl;

pub use error::{Error, Result};
