//! Batch layer behind the command line: simulations, sweeps, threshold
//! tables and energy-momentum diagrams, rendered as CSV, JSON or SVG.

mod diagram;
mod format;
mod sweep;
mod thresholds;

pub use diagram::{
    build_diagram, diagram_point, Bifurcation, Curve, Diagram, DiagramPoint, PitchforkKind,
    DIAGRAM_HEADER, INTERSECTION_TOL,
};
pub use format::{fmt_g, fmt_g_prec, trajectory_csv};
pub use sweep::{run_sweep, sweep_csv, SweepRow, SweepSpec, SWEEP_HEADER};
pub use thresholds::{
    threshold_table, thresholds_csv, ReferenceThreshold, ThresholdRow, REFERENCE_THRESHOLDS,
    THRESHOLD_HEADER,
};

use crate::dynamics::integrate;
use crate::equilibria::FamilyDescriptor;
use crate::error::{Error, Result};
use crate::sphere::Configuration;
use crate::stability::analyze;

/// Process exit status for an error: 2 for bad input, 3 for numeric failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_)
        | Error::Parse(_)
        | Error::InvalidConfiguration(_)
        | Error::InvalidDescriptor(_)
        | Error::OutOfDomain(_)
        | Error::Collision { .. }
        | Error::PoleSingularity
        | Error::NotTwoRings => 2,
        _ => 3,
    }
}

/// Output of [`cmd_simulate`]. When the integrator stops early `csv` holds
/// the steps taken so far and `failure` the reason.
#[derive(Debug)]
pub struct SimulateOutput {
    pub csv: String,
    pub failure: Option<Error>,
}

/// Integrates a configuration read from JSON up to `t_end`.
pub fn cmd_simulate(config_json: &str, t_end: f64, tol: f64) -> Result<SimulateOutput> {
    let c = Configuration::from_json(config_json)?;
    match integrate(&c, t_end, tol) {
        Ok(traj) => Ok(SimulateOutput {
            csv: trajectory_csv(&traj)?,
            failure: None,
        }),
        Err(e) => match e.partial_trajectory() {
            Some(partial) => Ok(SimulateOutput {
                csv: trajectory_csv(partial)?,
                failure: Some(e),
            }),
            None => Err(e),
        },
    }
}

/// Stability report of a descriptor given as JSON, rendered as JSON.
pub fn cmd_classify(descriptor_json: &str) -> Result<String> {
    let d = FamilyDescriptor::from_json(descriptor_json)?;
    Ok(analyze(&d)?.to_json())
}

/// Sweep CSV or JSON. Failed points appear with verdict `error`.
pub fn cmd_sweep(spec: &SweepSpec, json: bool) -> Result<String> {
    let rows = run_sweep(spec)?;
    if json {
        Ok(serde_json::to_string_pretty(&rows)?)
    } else {
        Ok(sweep_csv(&rows))
    }
}

/// Diagram for `n_pairs` ∈ {2, 3}.
pub fn cmd_diagram(n_pairs: usize, step: f64) -> Result<Diagram> {
    build_diagram(n_pairs, step)
}

/// Threshold CSV and the notes for rows with no computed transition.
pub fn cmd_thresholds(step: f64) -> Result<(String, Vec<String>)> {
    Ok(thresholds_csv(&threshold_table(step)?))
}
