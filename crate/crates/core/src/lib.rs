//! Verification toolkit for multiparameter commuting families: classical
//! Poisson and Dirac brackets, an exact differential-operator algebra, and
//! structure-preserving flows.

pub mod brackets;
pub mod cli;
pub mod dual;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod observable;
pub mod operators;
pub mod params;
pub mod parse;
pub mod phase;
pub mod sampling;

pub use error::{Error, Result};
