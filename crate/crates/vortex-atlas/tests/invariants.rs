use std::f64::consts::PI;

use nalgebra::{Complex, Matrix3, Rotation3, Unit, Vector3};
use proptest::prelude::*;

use vortex_atlas::dynamics::{hamiltonian, integrate, momentum_map, vector_field};
use vortex_atlas::equilibria::{
    make_family, re_residual, ring_angular_velocity, Family, FamilyDescriptor,
};
use vortex_atlas::sphere::{Configuration, UnitVector3, Vortex};
use vortex_atlas::stability::{analyze, block_coupling, hessian_closed_form, BlockLabel};

fn unit() -> impl Strategy<Value = Vector3<f64>> {
    (0.0..1.0f64, 0.0..2.0 * PI).prop_map(|(u, phi)| {
        let z = 2.0 * u - 1.0;
        let r = (1.0 - z * z).sqrt();
        Vector3::new(r * phi.cos(), r * phi.sin(), z)
    })
}

/// 2n vortices of alternating sign, kept apart from each other.
fn configuration(max_pairs: usize) -> impl Strategy<Value = Configuration> {
    (2..=max_pairs)
        .prop_flat_map(|n| prop::collection::vec(unit(), 2 * n))
        .prop_filter_map("vortices too close", |ps| {
            let vs = ps
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    Vortex::new(
                        UnitVector3::normalize(*p).unwrap(),
                        if k % 2 == 0 { 1.0 } else { -1.0 },
                    )
                })
                .collect();
            Configuration::new(vs, 0)
                .ok()
                .filter(|c| c.min_chord_distance().0 > 0.25)
        })
}

fn rotation() -> impl Strategy<Value = Matrix3<f64>> {
    (unit(), 0.0..2.0 * PI).prop_map(|(axis, angle)| {
        Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle).into_inner()
    })
}

fn rotated(c: &Configuration, r: &Matrix3<f64>) -> Configuration {
    c.with_positions(&c.positions().iter().map(|p| r * p).collect::<Vec<_>>())
}

/// Ring families away from the equator, where D_Nh collides.
fn ring_descriptor() -> impl Strategy<Value = FamilyDescriptor> {
    (
        prop_oneof![Just(Family::DNh2R), Just(Family::DNdRRp)],
        2..=8usize,
        prop_oneof![Just(0usize), Just(2)],
        0.05..1.5f64,
    )
        .prop_map(|(f, n, kp, t)| FamilyDescriptor::new(f, n, t, kp))
}

fn close(a: Complex<f64>, b: Complex<f64>, scale: f64) -> bool {
    (a - b).norm() <= 1e-8 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamiltonian_is_rotation_invariant(c in configuration(4), r in rotation()) {
        let h = hamiltonian(&c).unwrap();
        prop_assert!((hamiltonian(&rotated(&c, &r)).unwrap() - h).abs() < 1e-11 * h.abs().max(1.0));
    }

    #[test]
    fn momentum_map_is_equivariant(c in configuration(4), r in rotation()) {
        let lhs = momentum_map(&rotated(&c, &r));
        prop_assert!((lhs - r * momentum_map(&c)).amax() < 1e-12);
    }

    #[test]
    fn vector_field_is_equivariant(c in configuration(3), r in rotation()) {
        let lhs = vector_field(&rotated(&c, &r)).unwrap();
        let rhs = vector_field(&c).unwrap();
        for (a, b) in lhs.iter().zip(&rhs) {
            prop_assert!((a - r * b).amax() < 1e-9 * b.amax().max(1.0));
        }
    }

    #[test]
    fn vector_field_is_tangent(c in configuration(4)) {
        for (v, p) in vector_field(&c).unwrap().iter().zip(c.positions()) {
            prop_assert!(v.dot(&p).abs() < 1e-10 * v.norm().max(1.0));
        }
    }

    #[test]
    fn short_flows_conserve_energy_and_momentum(c in configuration(3)) {
        let t = integrate(&c, 1.0, 1e-10).unwrap();
        prop_assert!(t.max_h_drift() < 1e-9);
        prop_assert!(t.max_phi_drift() < 1e-9);
    }

    #[test]
    fn ring_families_are_relative_equilibria(d in ring_descriptor()) {
        let c = make_family(&d).unwrap();
        let xi = ring_angular_velocity(&d).unwrap();
        let scale = xi.abs().max(1.0);
        prop_assert!(re_residual(&c, xi).unwrap() < 1e-8 * scale);
    }

    #[test]
    fn relative_equilibria_rotate_rigidly_about_the_momentum(d in ring_descriptor()) {
        // ẋ_i = ξ ẑ × x_i with Φ along ẑ
        let c = make_family(&d).unwrap();
        let xi = ring_angular_velocity(&d).unwrap();
        let phi = momentum_map(&c);
        prop_assert!(phi.x.abs() < 1e-12 && phi.y.abs() < 1e-12);
        for (v, p) in vector_field(&c).unwrap().iter().zip(c.positions()) {
            let rigid = xi * Vector3::z().cross(&p);
            prop_assert!((v - rigid).amax() < 1e-8 * xi.abs().max(1.0));
        }
    }

    #[test]
    fn closed_form_hessian_is_symmetric(d in ring_descriptor()) {
        let h = hessian_closed_form(&d).unwrap();
        prop_assert_eq!(&h, &h.transpose());
    }

    #[test]
    fn blocks_do_not_couple(d in ring_descriptor()) {
        prop_assert!(block_coupling(&d).unwrap() < 1e-9);
    }

    #[test]
    fn spectrum_has_hamiltonian_symmetry(d in ring_descriptor()) {
        let spec = analyze(&d).unwrap().spectrum();
        let scale = spec.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for z in &spec {
            prop_assert!(spec.iter().any(|w| close(*w, -z, scale)), "{z} has no partner −λ");
            prop_assert!(spec.iter().any(|w| close(*w, z.conj(), scale)), "{z} has no partner λ̄");
        }
    }

    #[test]
    fn four_by_four_blocks_follow_the_eigenvalue_formula(d in ring_descriptor()) {
        let rep = analyze(&d).unwrap();
        for b in &rep.blocks {
            let (Some(a), Some(bb), Some(c), Some(w)) = (b.entry("a"), b.entry("b"), b.entry("c"), b.entry("omega"))
            else { continue };
            let eig = &b.linearization_eigenvalues;
            let scale = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if a * bb >= 0.0 {
                let root = (a * bb).sqrt();
                for m in [(c + root) / w, (c - root) / w] {
                    let z = Complex::new(0.0, m);
                    prop_assert!(eig.iter().any(|e| close(*e, z, scale)), "{} {}: ±{m}i missing from {eig:?}", d.label(), b.label);
                }
            } else {
                prop_assert!(eig.iter().any(|e| e.re.abs() > 1e-8 * scale.max(1.0)), "{} {}: ab < 0 but spectrum {eig:?}", d.label(), b.label);
            }
        }
    }

    #[test]
    fn b1_is_linearly_stable(d in ring_descriptor().prop_filter("no poles, N ≥ 3", |d| d.kp == 0 && d.n >= 3)) {
        let rep = analyze(&d).unwrap();
        let b1 = rep.block(BlockLabel::B1).expect("B1 present");
        for z in &b1.linearization_eigenvalues {
            prop_assert!(z.re.abs() <= 1e-10 * z.norm().max(1.0), "{z}");
        }
    }
}
