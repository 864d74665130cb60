//! Critical latitudes of the two-ring families against the reference values.

use serde::Serialize;

use super::format::{csv_line, fmt_g};
use crate::equilibria::{Family, FamilyDescriptor};
use crate::error::Result;
use crate::stability::{scan_transitions, Transition, TransitionPoint, Verdict};

/// A reference critical latitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReferenceThreshold {
    pub family: Family,
    pub n: usize,
    pub kp: usize,
    pub transition: Transition,
    pub value: f64,
    pub tol: f64,
}

const fn r(
    family: Family,
    n: usize,
    kp: usize,
    transition: Transition,
    value: f64,
) -> ReferenceThreshold {
    ReferenceThreshold {
        family,
        n,
        kp,
        transition,
        value,
        tol: 0.01,
    }
}

const fn r3(
    family: Family,
    n: usize,
    kp: usize,
    transition: Transition,
    value: f64,
) -> ReferenceThreshold {
    ReferenceThreshold {
        family,
        n,
        kp,
        transition,
        value,
        tol: 0.005,
    }
}

use Family::{DNdRRp as D, DNh2R as H};
use Transition::{HopfLower as HL, HopfUpper as HU, StabilityGain as Gain, StabilityLoss as Loss};

/// Every reference critical latitude of the ring families (λ_n = 1 with poles).
pub const REFERENCE_THRESHOLDS: [ReferenceThreshold; 32] = [
    r(D, 2, 0, Gain, 1.14),
    r3(D, 3, 0, HL, 1.302),
    r3(D, 3, 0, HU, 1.315),
    r(H, 2, 0, Loss, 0.66),
    r(H, 4, 0, Loss, 0.73),
    r(H, 6, 0, Loss, 0.45),
    r(H, 3, 0, HL, 0.77),
    r(H, 3, 0, HU, 0.78),
    r(H, 5, 0, HL, 0.67),
    r(H, 5, 0, HU, 0.68),
    r(D, 2, 2, HL, 2.21),
    r(D, 2, 2, HU, 2.31),
    r(D, 3, 2, HL, 1.8),
    r(D, 3, 2, HU, 2.05),
    r(D, 3, 2, HL, 2.25),
    r(D, 4, 2, HL, 1.75),
    r(D, 4, 2, HU, 1.79),
    r(D, 5, 2, HL, 1.73),
    r(D, 5, 2, HU, 1.76),
    r(D, 6, 2, HL, 1.71),
    r(D, 6, 2, HU, 1.72),
    r(D, 7, 2, HL, 1.69),
    r(D, 7, 2, HU, 1.70),
    r(H, 4, 2, Loss, 0.92),
    r(H, 6, 2, Loss, 0.83),
    r(H, 8, 2, Loss, 0.47),
    r(H, 3, 2, HL, 0.83),
    r(H, 3, 2, HU, 0.87),
    r(H, 5, 2, HL, 0.91),
    r(H, 5, 2, HU, 0.93),
    r(H, 7, 2, HL, 0.71),
    r(H, 7, 2, HU, 0.72),
];

/// Computed counterpart of a [`ReferenceThreshold`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub reference: ReferenceThreshold,
    pub label: String,
    /// The matched transition, `None` when the scan found nothing of that kind.
    pub found: Option<TransitionPoint>,
}

impl ThresholdRow {
    pub fn theta(&self) -> Option<f64> {
        self.found.map(|p| p.theta)
    }

    pub fn abs_delta(&self) -> Option<f64> {
        self.theta().map(|t| (t - self.reference.value).abs())
    }

    pub fn within_tolerance(&self) -> bool {
        self.abs_delta().is_some_and(|d| d <= self.reference.tol)
    }
}

/// Whether `p` is a boundary of the kind named by a reference interval.
///
/// A stability loss is any exit from Lyapunov stability and a gain any entry,
/// whatever the kind of the next regime.
fn matches(kind: Transition, p: &TransitionPoint) -> bool {
    match kind {
        Transition::StabilityLoss => p.below == Verdict::LyapunovStable,
        Transition::StabilityGain => p.above == Verdict::LyapunovStable,
        Transition::HopfLower => p.above == Verdict::LinearlyStable,
        Transition::HopfUpper => p.below == Verdict::LinearlyStable,
    }
}

type Key = (Family, usize, usize);

/// Scans each family once and matches every reference value to the nearest
/// computed transition of the same kind.
pub fn threshold_table(step: f64) -> Result<Vec<ThresholdRow>> {
    let mut keys: Vec<(Family, usize, usize)> = Vec::new();
    for t in &REFERENCE_THRESHOLDS {
        if !keys.contains(&(t.family, t.n, t.kp)) {
            keys.push((t.family, t.n, t.kp));
        }
    }
    let scans: Vec<(Key, Result<Vec<TransitionPoint>>)> = {
        use rayon::prelude::*;
        keys.par_iter()
            .map(|&(f, n, kp)| {
                (
                    (f, n, kp),
                    scan_transitions(&FamilyDescriptor::new(f, n, 1.0, kp), step),
                )
            })
            .collect()
    };
    let mut rows = Vec::new();
    for reference in REFERENCE_THRESHOLDS {
        let key = (reference.family, reference.n, reference.kp);
        let (_, scan) = scans
            .iter()
            .find(|(k, _)| *k == key)
            .expect("every key scanned");
        let points = match scan {
            Ok(p) => p,
            Err(e) => return Err(crate::Error::Internal(format!("scan failed: {e}"))),
        };
        let found = points
            .iter()
            .filter(|p| matches(reference.transition, p))
            .min_by(|a, b| {
                (a.theta - reference.value)
                    .abs()
                    .total_cmp(&(b.theta - reference.value).abs())
            })
            .copied();
        let label = FamilyDescriptor::new(reference.family, reference.n, 1.0, reference.kp).label();
        rows.push(ThresholdRow {
            reference,
            label,
            found,
        });
    }
    Ok(rows)
}

pub const THRESHOLD_HEADER: [&str; 7] = [
    "family",
    "N",
    "kp",
    "transition",
    "theta_star",
    "paper_value",
    "abs_delta",
];

/// Table CSV. Rows without a computed transition are left out and returned as notes.
pub fn thresholds_csv(rows: &[ThresholdRow]) -> (String, Vec<String>) {
    let mut out = csv_line(THRESHOLD_HEADER);
    let mut notes = Vec::new();
    for row in rows {
        let (Some(theta), Some(delta)) = (row.theta(), row.abs_delta()) else {
            notes.push(format!(
                "no {} transition found for {} near {}",
                row.reference.transition, row.label, row.reference.value
            ));
            continue;
        };
        out.push_str(&csv_line([
            row.label.clone(),
            row.reference.n.to_string(),
            row.reference.kp.to_string(),
            row.reference.transition.to_string(),
            fmt_g(theta),
            fmt_g(row.reference.value),
            fmt_g(delta),
        ]));
    }
    (out, notes)
}
