//! Periodic, background-flow and doubly-periodic point-vortex relative
//! equilibria built from Wronskians of trigonometric and elliptic
//! eigenfunctions, with independent residual and dynamical verification.

pub mod asymptotics;
pub mod dynamics;
pub mod elliptic;
pub mod equilibrium;
pub mod error;
pub mod rootfind;
pub mod streets;
pub mod trigpoly;
pub mod whittaker_hill;

pub use error::{Error, Result};
pub use num_complex::Complex64;
