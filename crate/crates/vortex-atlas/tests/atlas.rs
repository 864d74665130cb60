use std::f64::consts::FRAC_PI_2;

use vortex_atlas::atlas::{
    build_diagram, cmd_classify, threshold_table, DiagramPoint, REFERENCE_THRESHOLDS,
};
use vortex_atlas::equilibria::Family;

#[test]
fn diagram_verdicts_agree_with_classify() {
    let d = build_diagram(2, 0.02).unwrap();
    let mut checked = 0;
    for p in d.points().step_by(7) {
        let json = serde_json::to_string(&p.descriptor).unwrap();
        let report: serde_json::Value =
            serde_json::from_str(&cmd_classify(&json).unwrap()).unwrap();
        assert_eq!(
            report["verdict"],
            serde_json::to_value(p.verdict).unwrap(),
            "{} {json}",
            p.branch_label
        );
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn staggered_ring_branch_passes_through_the_equatorial_ring() {
    for n in [2, 3] {
        let d = build_diagram(n, 0.002).unwrap();
        let e = &d.fixed_point;
        let dist = |p: &&DiagramPoint| (p.descriptor.theta0 - FRAC_PI_2).abs();
        let end = d
            .curves
            .iter()
            .flat_map(|c| &c.points)
            .filter(|p| p.descriptor.family == Family::DNdRRp && p.descriptor.kp == 0)
            .min_by(|a, b| dist(a).total_cmp(&dist(b)))
            .unwrap();
        assert!(
            (end.mu_z - e.mu_z).abs() < 0.05,
            "N = {n}: μ {} vs {}",
            end.mu_z,
            e.mu_z
        );
        assert!(
            (end.energy - e.energy).abs() < 0.05,
            "N = {n}: H {} vs {}",
            end.energy,
            e.energy
        );
    }
}

#[test]
fn bifurcations_lie_on_their_parent_branch() {
    let d = build_diagram(2, 0.005).unwrap();
    assert!(!d.bifurcations.is_empty());
    for b in &d.bifurcations {
        let near = d
            .curves
            .iter()
            .filter(|c| c.branch_label == b.parent)
            .flat_map(|c| &c.points)
            .map(|p| (p.mu_z - b.mu_z).hypot(p.energy - b.energy))
            .fold(f64::INFINITY, f64::min);
        assert!(near < 0.1, "{} → {}: {near}", b.parent, b.child);
    }
}

#[test]
fn threshold_table_covers_every_reference() {
    let rows = threshold_table(0.005).unwrap();
    assert_eq!(rows.len(), REFERENCE_THRESHOLDS.len());
    assert!(rows.iter().all(|r| r.found.is_some()));
    let within = rows.iter().filter(|r| r.within_tolerance()).count();
    assert!(within >= 28, "{within} of {}", rows.len());
}
