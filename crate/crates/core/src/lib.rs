//! Thermal operations on finite-dimensional quantum systems.

pub mod channel;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod hamiltonian;
pub mod linalg;
pub mod qubit;
pub mod svg;
pub mod thermal;

pub use error::{Error, Result};
