pub mod analytic;
pub mod bounds;
pub mod couples;
pub mod error;
pub mod normsolver;
pub mod numeric;
pub mod periodize;
pub mod suite;
pub mod verify;

pub use couples::{CandidateFn, Couple, Element, Exponent, Side, Term};
pub use error::{Error, Result};
