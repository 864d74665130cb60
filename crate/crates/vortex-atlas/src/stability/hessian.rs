//! Second derivatives of the augmented Hamiltonian in the mixed chart.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::dynamics::chart_gradient;
use crate::equilibria::{ring_angular_velocity, FamilyDescriptor};
use crate::error::{Error, Result};
use crate::sphere::{Configuration, MixedChart};

/// Closed-form `d²H_ξ` of a two-ring family at its relative equilibrium.
///
/// Coordinates follow [`MixedChart`]: `[θ_j, θ′_j, φ_j, φ′_j, x_n, y_n, x_s, y_s]`.
pub fn hessian_closed_form(desc: &FamilyDescriptor) -> Result<DMatrix<f64>> {
    desc.validate()?;
    if !desc.family.is_ring_pair() {
        return Err(Error::InvalidDescriptor(format!(
            "no closed-form Hessian for {}",
            desc.family.name()
        )));
    }
    let n = desc.n;
    let nf = n as f64;
    let kp = desc.kp;
    let ln = desc.lambda_n;
    let xi = ring_angular_velocity(desc)?;
    let u = desc.theta0.cos();
    let s = desc.theta0.sin();
    let u2 = u * u;
    let off = desc.ring_offset();
    let vp: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / nf).collect();
    let vq: Vec<f64> = vp.iter().map(|p| p + off).collect();
    let d = |c: f64| 1.0 + u2 - c * (1.0 - u2);

    let dim = 4 * n + 2 * kp;
    let mut h = DMatrix::zeros(dim, dim);
    let mut set = |i: usize, j: usize, v: f64| {
        h[(i, j)] = v;
        h[(j, i)] = v;
    };
    let t = |i: usize| i;
    let tp = |i: usize| n + i;
    let p = |i: usize| 2 * n + i;
    let pp = |i: usize| 3 * n + i;

    let mut dtt = -xi * u;
    let mut dpp = 0.0;
    for v in &vp[1..n] {
        let c = v.cos();
        dtt += c / ((1.0 - u2) * (1.0 - c));
        dpp -= 1.0 / (1.0 - c);
    }
    for &q in &vq {
        let c = q.cos();
        let dd = d(c) * d(c);
        dtt -= (-2.0 * u2 + (1.0 - u2) * c - (1.0 - u2) * c * c) / dd;
        dpp += (1.0 - u2) * (1.0 - u2 - c * (1.0 + u2)) / dd;
    }
    if kp == 2 {
        dtt -= 2.0 * u * ln / (1.0 - u2);
    }

    for i in 0..n {
        set(t(i), t(i), dtt);
        set(tp(i), tp(i), dtt);
        set(p(i), p(i), dpp);
        set(pp(i), pp(i), dpp);
        for j in 0..n {
            let k = (j + n - i) % n;
            let c = vp[k].cos();
            let (sq, cq) = vq[k].sin_cos();
            let dd = d(cq) * d(cq);
            if i != j {
                set(t(i), t(j), -1.0 / ((1.0 - u2) * (1.0 - c)));
                set(tp(i), tp(j), -1.0 / ((1.0 - u2) * (1.0 - c)));
                set(p(i), p(j), 1.0 / (1.0 - c));
                set(pp(i), pp(j), 1.0 / (1.0 - c));
            }
            let mixed = -2.0 * u * s * sq / dd;
            set(t(i), tp(j), (1.0 - u2 - cq * (1.0 + u2)) / dd);
            set(t(i), pp(j), mixed);
            set(p(i), tp(j), mixed);
            set(p(i), pp(j), -(1.0 - u2) * (1.0 - u2 - cq * (1.0 + u2)) / dd);
        }
    }

    if kp == 2 {
        let (xn, yn, xs, ys) = (4 * n, 4 * n + 1, 4 * n + 2, 4 * n + 3);
        for i in 0..n {
            let (sa, ca) = vp[i].sin_cos();
            let (sb, cb) = vq[i].sin_cos();
            set(t(i), xn, ln * ca / (1.0 - u));
            set(tp(i), xn, -ln * cb / (1.0 + u));
            set(t(i), xs, ln * ca / (1.0 + u));
            set(tp(i), xs, -ln * cb / (1.0 - u));
            set(t(i), yn, ln * sa / (1.0 - u));
            set(tp(i), yn, -ln * sb / (1.0 + u));
            set(t(i), ys, ln * sa / (1.0 + u));
            set(tp(i), ys, -ln * sb / (1.0 - u));
            set(p(i), xn, ln * s / (1.0 - u) * sa);
            set(pp(i), xn, -ln * s / (1.0 + u) * sb);
            set(p(i), xs, -ln * s / (1.0 + u) * sa);
            set(pp(i), xs, ln * s / (1.0 - u) * sb);
            set(p(i), yn, -ln * s / (1.0 - u) * ca);
            set(pp(i), yn, ln * s / (1.0 + u) * cb);
            set(p(i), ys, ln * s / (1.0 + u) * ca);
            set(pp(i), ys, -ln * s / (1.0 - u) * cb);
        }
        // ring sums for the polar block
        let (mut nxx, mut nyy, mut nxy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let ring = vp
            .iter()
            .map(|&f| (u, f, 1.0))
            .chain(vq.iter().map(|&f| (-u, f, -1.0)));
        for (c, ph, l) in ring {
            let a = (1.0 - c * c).sqrt() * ph.cos();
            let b = (1.0 - c * c).sqrt() * ph.sin();
            let wn = ln * l;
            nxx += wn * (c / (1.0 - c) - a * a / (1.0 - c).powi(2));
            nyy += wn * (c / (1.0 - c) - b * b / (1.0 - c).powi(2));
            nxy -= wn * a * b / (1.0 - c).powi(2);
            sxx -= wn * (-c / (1.0 + c) - a * a / (1.0 + c).powi(2));
            syy -= wn * (-c / (1.0 + c) - b * b / (1.0 + c).powi(2));
            sxy += wn * a * b / (1.0 + c).powi(2);
        }
        let half = ln * ln / 2.0;
        set(xn, xn, nxx + half - xi * ln);
        set(yn, yn, nyy + half - xi * ln);
        set(xn, yn, nxy);
        set(xs, xs, sxx + half - xi * ln);
        set(ys, ys, syy + half - xi * ln);
        set(xs, ys, sxy);
        set(xn, xs, half);
        set(yn, ys, half);
    }
    Ok(h)
}

/// Central differences (step `h`) of the analytic chart gradient of `H_ξ`, symmetrized.
pub fn hessian_fd(c: &Configuration, xi_z: f64, h: f64) -> Result<DMatrix<f64>> {
    let chart = MixedChart::for_configuration(c);
    let q0 = chart.coordinates(c)?;
    let dim = chart.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for a in 0..dim {
        let mut qp = q0.clone();
        let mut qm = q0.clone();
        qp[a] += h;
        qm[a] -= h;
        let gp = chart_gradient(&chart.configuration(c, &qp)?, xi_z)?;
        let gm = chart_gradient(&chart.configuration(c, &qm)?, xi_z)?;
        let col = (gp - gm) / (2.0 * h);
        m.set_row(a, &col.transpose());
    }
    Ok((&m + m.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{make_family, Family};

    #[test]
    fn closed_form_matches_finite_differences() {
        for fam in [Family::DNh2R, Family::DNdRRp] {
            for (kp, ln) in [(0, 1.0), (2, 1.0), (2, -1.0), (2, 0.6)] {
                for (n, theta) in [(2, 0.3), (3, 0.7), (4, 1.2), (5, 2.0), (2, 2.6)] {
                    let d = FamilyDescriptor::new(fam, n, theta, kp).with_lambda(ln);
                    let cf = hessian_closed_form(&d).unwrap();
                    assert_eq!(&cf - cf.transpose(), DMatrix::zeros(cf.nrows(), cf.ncols()));
                    let xi = ring_angular_velocity(&d).unwrap();
                    let fd = hessian_fd(&make_family(&d).unwrap(), xi, 1e-5).unwrap();
                    let err = (&cf - &fd).amax();
                    assert!(
                        err < 1e-6,
                        "{fam:?} n={n} θ={theta} kp={kp} λ={ln}: {err:e}"
                    );
                }
            }
        }
    }

    #[test]
    fn same_sign_theta_phi_entries_vanish() {
        let d = FamilyDescriptor::dnh(4, 0.9, 0);
        let h = hessian_closed_form(&d).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(h[(i, 8 + j)], 0.0);
                assert_eq!(h[(4 + i, 12 + j)], 0.0);
            }
        }
    }
}
