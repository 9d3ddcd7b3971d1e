//! Numerical toolkit for large values of ζ at harmonic points σ + ijt.
//!
//! Layers, bottom up: prime tables, ζ evaluation, resonators and their
//! moments, closed-form bounds, and the extreme-value search.

pub mod accumulate;
pub mod bounds;
pub mod constants;
pub mod error;
pub mod primes;
pub mod quad;
pub mod report;
pub mod resonance;
pub mod search;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
