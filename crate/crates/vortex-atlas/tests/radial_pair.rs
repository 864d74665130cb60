//! The radial pair (r, s) of the ring families without poles.

use std::f64::consts::FRAC_PI_2;

use vortex_atlas::equilibria::{Family, FamilyDescriptor};
use vortex_atlas::stability::{analyze, radial_s, BlockLabel};

fn grid() -> Vec<f64> {
    (1..100).map(|k| k as f64 * FRAC_PI_2 / 100.0).collect()
}

fn r_s(d: &FamilyDescriptor) -> (f64, f64) {
    let rep = analyze(d).unwrap();
    let b = rep.block(BlockLabel::B0).unwrap();
    (b.entry("r").unwrap(), b.entry("s").unwrap())
}

fn increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

#[test]
fn r_increases_and_changes_sign_for_dnd() {
    for n in 3..=8 {
        let r: Vec<f64> = grid()
            .iter()
            .map(|&t| r_s(&FamilyDescriptor::dnd(n, t, 0)).0)
            .collect();
        assert!(increasing(&r), "N = {n}");
        // negative near the pole, positive near the equator
        assert!(r[0] < 0.0 && *r.last().unwrap() > 0.0, "N = {n}");
    }
}

#[test]
fn r_increases_for_dnh() {
    for n in 3..=8 {
        let g: Vec<f64> = grid().into_iter().filter(|t| *t < 1.5).collect();
        let r: Vec<f64> = g
            .iter()
            .map(|&t| r_s(&FamilyDescriptor::dnh(n, t, 0)).0)
            .collect();
        assert!(increasing(&r), "N = {n}");
    }
}

#[test]
fn s_is_positive_and_increasing_for_dnd() {
    for n in 3..=8 {
        let s: Vec<f64> = grid()
            .iter()
            .map(|&t| r_s(&FamilyDescriptor::dnd(n, t, 0)).1)
            .collect();
        assert!(s.iter().all(|&v| v > 0.0), "N = {n}");
        assert!(increasing(&s), "N = {n}");
    }
}

#[test]
fn s_is_negative_and_decreasing_for_dnh() {
    for n in 3..=8 {
        let g: Vec<f64> = grid().into_iter().filter(|t| *t < 1.5).collect();
        let s: Vec<f64> = g
            .iter()
            .map(|&t| radial_s(&FamilyDescriptor::dnh(n, t, 0)))
            .collect();
        assert!(s.iter().all(|&v| v < 0.0), "N = {n}");
        assert!(s.windows(2).all(|w| w[1] < w[0]), "N = {n}");
    }
}

#[test]
fn numeric_entries_agree_with_sigma_sums() {
    for fam in [Family::DNh2R, Family::DNdRRp] {
        for n in 3..=6 {
            for t in [0.3, 0.7, 1.1] {
                let rep = analyze(&FamilyDescriptor::new(fam, n, t, 0)).unwrap();
                let b = rep.block(BlockLabel::B0).unwrap();
                let (r, rc) = (b.entry("r").unwrap(), b.entry("r_closed").unwrap());
                let (s, sc) = (b.entry("s").unwrap(), b.entry("s_closed").unwrap());
                assert!(
                    (r - rc).abs() < 1e-8 * r.abs().max(1.0),
                    "{fam:?} {n} {t}: r {r} vs {rc}"
                );
                assert!(
                    (s - sc).abs() < 1e-8 * s.abs().max(1.0),
                    "{fam:?} {n} {t}: s {s} vs {sc}"
                );
            }
        }
    }
}
