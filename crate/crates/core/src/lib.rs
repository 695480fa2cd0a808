//! Thinness certificates and HOMFLY-based invariants for two-bridge links.

pub mod cache;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod homfly;
pub mod invariants;
pub mod laurent;
pub mod thinness;
pub mod unreduced;

pub use error::{Error, Result};
