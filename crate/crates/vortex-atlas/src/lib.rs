//! Point vortices of strength ±1 on the unit sphere.
//!
//! The crate builds the symmetric equilibria and relative equilibria of
//! 2N opposite vortices (optionally with two polar vortices), integrates
//! their motion, and classifies them with the energy-momentum method.
//!
//! - [`sphere`]: unit vectors, configurations, the symmetry group and charts
//! - [`dynamics`]: Hamiltonian, vector field, momentum map, integrator
//! - [`equilibria`]: family constructors, angular velocities, branch solvers
//! - [`stability`]: slice Hessians, block spectra, verdicts, critical latitudes
//! - [`atlas`]: sweeps, threshold tables and energy-momentum diagrams

pub mod atlas;
pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod sphere;
pub mod stability;

pub use error::{Error, Result};
pub use sphere::{Configuration, UnitVector3, Vortex};
