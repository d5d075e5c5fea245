//! Exact computations around the Galois–McKay conjecture for finite
//! permutation groups: groups, cyclotomics, character tables, Clifford
//! theory, projective representations and the relation `>=_c`.

pub mod arith;
pub mod catalog;
pub mod chartab;
pub mod cliff;
pub mod config;
pub mod constructions;
pub mod cyclo;
pub mod error;
pub mod group;
pub mod hgal;
pub mod horder;
pub mod json;
pub mod mat;
pub mod mckay;
pub mod perm;
pub mod projrep;

pub use error::{Error, Result};
