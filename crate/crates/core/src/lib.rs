//! Clifford-algebra hidden-variable spin models, a quantum-mechanical
//! oracle, and scenario runs that compare the two.

pub mod cli;
pub mod clifford;
pub mod error;
pub mod models;
pub mod numfmt;
pub mod quantum;
pub mod report;
pub mod scenarios;
pub mod sign;

pub use clifford::{Blade, Multivector, UnitVector};
pub use error::{Error, Result};
pub use sign::Sign;
