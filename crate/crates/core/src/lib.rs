//! Exact and numerical checks for the hypercritical deformed
//! Hermitian-Yang-Mills equation on model Kähler varieties.

pub mod charge;
pub mod criteria;
pub mod error;
pub mod family;
pub mod phase;
pub mod poly;
pub mod rational;
pub mod report;
pub mod torus;
pub mod variety;

pub use error::{Error, Result};
