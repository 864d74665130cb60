//! Latitudes where the verdict of a two-ring family changes.

use std::f64::consts::PI;

use serde::Serialize;

use super::analysis::{analyze, Verdict};
use crate::equilibria::{Family, FamilyDescriptor};
use crate::error::{Error, Result};

/// Bisection stops once the bracket is shorter than this.
pub const ROOT_TOL: f64 = 1e-7;
/// Roots of the two predicates closer than this are one transition.
pub const MERGE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Transition {
    /// Lyapunov stable below, unstable above.
    StabilityLoss,
    /// Unstable below, Lyapunov stable above.
    StabilityGain,
    /// Entry into a window of linear stability.
    HopfLower,
    /// Exit from a window of linear stability.
    HopfUpper,
}

impl Transition {
    pub fn as_str(self) -> &'static str {
        match self {
            Transition::StabilityLoss => "StabilityLoss",
            Transition::StabilityGain => "StabilityGain",
            Transition::HopfLower => "HopfLower",
            Transition::HopfUpper => "HopfUpper",
        }
    }
}

impl std::fmt::Display for Transition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransitionPoint {
    pub theta: f64,
    pub kind: Transition,
    pub below: Verdict,
    pub above: Verdict,
}

fn verdict_at(template: &FamilyDescriptor, theta: f64) -> Verdict {
    let d = FamilyDescriptor {
        theta0: theta,
        ..*template
    };
    analyze(&d)
        .map(|r| r.verdict)
        .unwrap_or(Verdict::Indeterminate)
}

/// Shrinks `[lo, hi]` around a change of `pred`, with `pred(lo) != pred(hi)`.
fn bisect(
    template: &FamilyDescriptor,
    pred: impl Fn(Verdict) -> bool,
    mut lo: f64,
    mut hi: f64,
) -> (f64, f64, Verdict, Verdict) {
    let mut vlo = verdict_at(template, lo);
    let mut vhi = verdict_at(template, hi);
    let left = pred(vlo);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let v = verdict_at(template, mid);
        if pred(v) == left {
            lo = mid;
            vlo = v;
        } else {
            hi = mid;
            vhi = v;
        }
    }
    (lo, hi, vlo, vhi)
}

fn classify(below: Verdict, above: Verdict) -> Option<Transition> {
    use Verdict::*;
    match (below, above) {
        (LyapunovStable, LinearlyUnstable) => Some(Transition::StabilityLoss),
        (LinearlyUnstable, LyapunovStable) => Some(Transition::StabilityGain),
        (a, LinearlyStable) if a != LinearlyStable => Some(Transition::HopfLower),
        (LinearlyStable, b) if b != LinearlyStable => Some(Transition::HopfUpper),
        _ => None,
    }
}

/// Latitude interval scanned for a family: `(0, π/2)` without poles, `(0, π)` with.
pub fn scan_interval(kp: usize) -> (f64, f64) {
    if kp == 0 {
        (0.0, PI / 2.0)
    } else {
        (0.0, PI)
    }
}

/// Scans `θ₀` over the open interval of [`scan_interval`] with the given grid step
/// and locates every verdict change to [`ROOT_TOL`].
///
/// The lower and upper Lyapunov and instability boundaries are bisected
/// separately, so a window narrower than the grid step still shows up as a
/// pair of Hopf transitions.
pub fn scan_transitions(template: &FamilyDescriptor, step: f64) -> Result<Vec<TransitionPoint>> {
    let (a, b) = scan_interval(template.kp);
    scan_transitions_in(template, a, b, step)
}

/// [`scan_transitions`] on the open interval `(a, b)`.
pub fn scan_transitions_in(
    template: &FamilyDescriptor,
    a: f64,
    b: f64,
    step: f64,
) -> Result<Vec<TransitionPoint>> {
    if !template.family.is_ring_pair() {
        return Err(Error::InvalidDescriptor(format!(
            "{} is not a two-ring family",
            template.family.name()
        )));
    }
    if !(step > 0.0 && step < 0.5 && a < b) {
        return Err(Error::InvalidDescriptor(format!(
            "bad grid ({a}, {b}) step {step}"
        )));
    }
    let count = ((b - a) / step).ceil() as usize;
    let grid: Vec<f64> = (1..count)
        .map(|k| a + k as f64 * step)
        .filter(|&t| t < b)
        .collect();
    let verdicts: Vec<Verdict> = grid.iter().map(|&t| verdict_at(template, t)).collect();

    let is_lyap = |v: Verdict| v == Verdict::LyapunovStable;
    let is_unst = |v: Verdict| v == Verdict::LinearlyUnstable;
    let mut out = Vec::new();
    for k in 1..grid.len() {
        let (v0, v1) = (verdicts[k - 1], verdicts[k]);
        if v0 == v1 {
            continue;
        }
        let mut roots = Vec::new();
        if is_lyap(v0) != is_lyap(v1) {
            roots.push(bisect(template, is_lyap, grid[k - 1], grid[k]));
        }
        if is_unst(v0) != is_unst(v1) {
            roots.push(bisect(template, is_unst, grid[k - 1], grid[k]));
        }
        roots.sort_by(|x, y| x.0.total_cmp(&y.0));
        if roots.len() == 2 && roots[1].0 - roots[0].0 < MERGE_TOL {
            let (lo, _, _, _) = roots[0];
            let (_, hi, _, _) = roots[1];
            roots = vec![(lo, hi, v0, v1)];
        }
        for (lo, hi, below, above) in roots {
            if let Some(kind) = classify(below, above) {
                out.push(TransitionPoint {
                    theta: 0.5 * (lo + hi),
                    kind,
                    below,
                    above,
                });
            }
        }
    }
    Ok(out)
}

/// First transition latitude of a family.
pub fn critical_latitude(
    family: Family,
    n: usize,
    kp: usize,
    step: f64,
) -> Result<TransitionPoint> {
    let t = FamilyDescriptor::new(family, n, 1.0, kp);
    scan_transitions(&t, step)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoTransition(t.label()))
}
