//! Symmetric equilibria, normal modes and equivariant bifurcation
//! invariants for rings of `n` planar particles with `D_n` symmetry.

pub mod burnside;
pub mod cli;
pub mod config;
pub mod degrees;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod model;
pub mod spectrum;
pub mod symmetry;

pub use error::{Error, Result};
