use thiserror::Error;

use crate::dynamics::Trajectory;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vortices {i} and {j} collide (chord distance {distance:e})")]
    Collision { i: usize, j: usize, distance: f64 },
    #[error("point lies within the pole band; use the pole chart")]
    PoleSingularity,
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("invalid family descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("branch parameter out of domain: {0}")]
    OutOfDomain(String),
    #[error("no root of the branch equation in (-1, 1)")]
    NoRoot,
    #[error("configuration is not made of two latitudinal rings")]
    NotTwoRings,
    #[error("not a relative equilibrium (residual {0:e})")]
    NotRelativeEquilibrium(f64),
    #[error("symplectic form is degenerate on the slice")]
    DegenerateForm,
    #[error("no {0} transition found")]
    NoTransition(String),
    #[error("near collision at t = {t}")]
    CollisionApproach { t: f64, partial: Box<Trajectory> },
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64, partial: Box<Trajectory> },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    /// Partial trajectory carried by integrator failures.
    pub fn partial_trajectory(&self) -> Option<&Trajectory> {
        match self {
            Error::CollisionApproach { partial, .. } | Error::StepSizeUnderflow { partial, .. } => {
                Some(partial)
            }
            _ => None,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
