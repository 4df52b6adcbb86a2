//! Exact tools for the no-three-in-line problem and the compression calculus:
//! verification, ground-truth solving, constructions, claim falsification and
//! bound tabulation.

pub mod bounds;
pub mod claims;
pub mod cli;
pub mod compression;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod pointfile;
pub mod rational;
pub mod solver;

pub use error::{Error, Result};
