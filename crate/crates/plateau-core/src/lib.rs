//! Numerical filling of parametrized families of closed real curves in C^2
//! by holomorphic 1-chains.
//!
//! The pipeline: sample boundary curves (`geometry`), check the moment
//! condition and build power-sum tables (`moments`), reconstruct per-slice
//! fiber polynomials and validate them (`reconstruct`), assemble the family
//! and its singular locus (`family`), and extend boundary data harmonically
//! through explicitly constructed Green functions (`green`).

pub mod config;
pub mod error;
pub mod family;
pub mod fixtures;
pub mod formats;
pub mod geometry;
pub mod green;
pub mod moments;
pub mod poly;
pub mod reconstruct;
pub mod region;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
