//! Stability sweeps over θ₀ and N.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::format::{csv_line, fmt_g};
use crate::dynamics::{hamiltonian, momentum_map};
use crate::equilibria::{family_angular_velocity, make_family, Family, FamilyDescriptor};
use crate::error::{Error, Result};
use crate::stability::analyze;

/// A rectangular sweep: every family × every `N` × every `θ₀` on the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub families: Vec<Family>,
    pub n_min: usize,
    pub n_max: usize,
    pub theta_start: f64,
    pub theta_stop: f64,
    pub theta_step: f64,
    pub kp: usize,
    pub lambda_n: f64,
}

impl SweepSpec {
    /// One family and one `N` over `[start, stop]`.
    pub fn single(family: Family, n: usize, kp: usize, start: f64, stop: f64, step: f64) -> Self {
        Self {
            families: vec![family],
            n_min: n,
            n_max: n,
            theta_start: start,
            theta_stop: stop,
            theta_step: step,
            kp,
            lambda_n: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta_step.is_finite() && self.theta_step > 0.0) {
            return Err(Error::InvalidDescriptor(format!(
                "grid step {}",
                self.theta_step
            )));
        }
        if !(self.theta_start.is_finite() && self.theta_stop.is_finite()) {
            return Err(Error::InvalidDescriptor("non-finite θ₀ range".into()));
        }
        if self.n_min > self.n_max {
            return Err(Error::InvalidDescriptor(format!(
                "N range {}..{}",
                self.n_min, self.n_max
            )));
        }
        Ok(())
    }

    /// θ₀ grid from `theta_start` to `theta_stop` inclusive, without 0 and π.
    pub fn theta_grid(&self) -> Vec<f64> {
        let mut out = Vec::new();
        if self.theta_stop < self.theta_start {
            return out;
        }
        let count =
            ((self.theta_stop - self.theta_start) / self.theta_step + 1e-9).floor() as usize;
        for k in 0..=count {
            let t = self.theta_start + k as f64 * self.theta_step;
            if t > 0.0 && t < PI {
                out.push(t);
            }
        }
        out
    }

    pub fn descriptors(&self) -> Vec<FamilyDescriptor> {
        let grid = self.theta_grid();
        let mut out = Vec::new();
        for &f in &self.families {
            for n in self.n_min..=self.n_max {
                for &t in &grid {
                    let d = FamilyDescriptor::new(f, n, t, self.kp).with_lambda(self.lambda_n);
                    out.push(d);
                }
            }
        }
        out
    }
}

/// One row of a sweep. Numeric fields are `None` when the point failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub descriptor: FamilyDescriptor,
    pub mu: Option<f64>,
    pub xi: Option<f64>,
    pub energy: Option<f64>,
    /// Verdict name, or `"error"`.
    pub verdict: String,
    pub deciding_block: Option<String>,
    pub error: Option<String>,
}

fn evaluate(d: FamilyDescriptor) -> SweepRow {
    let run = || -> Result<(f64, f64, f64, String, Option<String>)> {
        let c = make_family(&d)?;
        let xi = family_angular_velocity(&d)?;
        let rep = analyze(&d)?;
        Ok((
            momentum_map(&c).z,
            xi,
            hamiltonian(&c)?,
            rep.verdict.to_string(),
            rep.deciding_block.map(|b| b.to_string()),
        ))
    };
    match run() {
        Ok((mu, xi, h, verdict, block)) => SweepRow {
            descriptor: d,
            mu: Some(mu),
            xi: Some(xi),
            energy: Some(h),
            verdict,
            deciding_block: block,
            error: None,
        },
        Err(e) => SweepRow {
            descriptor: d,
            mu: None,
            xi: None,
            energy: None,
            verdict: "error".into(),
            deciding_block: None,
            error: Some(e.to_string()),
        },
    }
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec.descriptors().into_par_iter().map(evaluate).collect())
}

pub const SWEEP_HEADER: [&str; 8] = [
    "family",
    "N",
    "theta0",
    "mu",
    "xi",
    "H",
    "verdict",
    "deciding_block",
];

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let opt = |v: Option<f64>| v.map(fmt_g).unwrap_or_default();
    let mut out = csv_line(SWEEP_HEADER);
    for r in rows {
        out.push_str(&csv_line([
            r.descriptor.family.name().to_string(),
            r.descriptor.n.to_string(),
            fmt_g(r.descriptor.theta0),
            opt(r.mu),
            opt(r.xi),
            opt(r.energy),
            r.verdict.clone(),
            r.deciding_block.clone().unwrap_or_default(),
        ]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_excludes_singular_endpoints() {
        let s = SweepSpec::single(Family::DNdRRp, 2, 0, 0.0, PI, PI / 4.0);
        assert_eq!(s.theta_grid().len(), 3);
        let empty = SweepSpec::single(Family::DNdRRp, 2, 0, 1.0, 0.5, 0.1);
        assert!(empty.theta_grid().is_empty());
    }

    #[test]
    fn failed_points_are_marked() {
        // D_2h(2R) at the equator collides
        let s = SweepSpec::single(Family::DNh2R, 2, 0, PI / 2.0, PI / 2.0, 0.1);
        let rows = run_sweep(&s).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].verdict, "error");
        assert!(sweep_csv(&rows).lines().nth(1).unwrap().contains(",,,"));
    }
}
