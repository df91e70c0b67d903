pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod observables;
pub mod operators;
pub mod phasespace;
pub mod scenarios;

#[cfg(test)]
pub(crate) mod test_support;

pub use error::{Error, ErrorCategory, Result};
