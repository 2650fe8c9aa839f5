//! Numerical toolkit for approximation numbers of composition operators on the
//! Hardy space of the unit disk.

pub mod analysis;
pub mod bounds;
pub mod disk;
pub mod error;
pub mod experiment;
pub mod hardy;
pub mod modulus;
pub mod quad;
pub mod report;
pub mod suite;
pub mod symbols;

pub use error::{Error, Result};
