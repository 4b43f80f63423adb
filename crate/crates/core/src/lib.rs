//! Finite-category verification engine for fibered category theory: finite
//! categories and limits, fibrations and their lifts, the standard
//! constructions, the Moens predicate suite and the Moens correspondence.

pub mod constructions;
pub mod corpus;
pub mod error;
pub mod fibration;
pub mod fincat;
pub mod fixtures;
pub mod io;
pub mod moens;
pub mod theorem;

pub use error::{Error, LawViolation, Result};
