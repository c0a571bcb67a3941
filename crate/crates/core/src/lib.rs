//! Simulation and verification toolkit for a point mass moving in a
//! one-dimensional viscous barotropic fluid, written in Lagrangian mass
//! coordinates with the particle fixed at `x = 0`.

pub mod analysis;
pub mod config;
pub mod error;
pub mod greenfn;
pub mod model;
pub mod reference;
pub mod selfsim;
pub mod solver;
pub mod specialfns;
pub mod verify;

pub use error::{Error, Result};
