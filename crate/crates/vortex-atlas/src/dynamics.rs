//! Hamiltonian, vector field, momentum map and a conservation-monitored
//! integrator for vortices on the unit sphere.

use nalgebra::DVector;

use crate::sphere::{
    apply_group_element, Configuration, GroupElement, MixedChart, Vec3, COLLISION_EPS,
};
use crate::{Error, Result};

/// `Σ_{i<j} λ_i λ_j ln(2(1 − x_i·x_j))`.
/// `1 − a·b` without the cancellation for nearby points.
fn half_chord2(a: &Vec3, b: &Vec3) -> f64 {
    0.5 * (a - b).norm_squared()
}

pub fn hamiltonian(c: &Configuration) -> Result<f64> {
    c.check_collisions(COLLISION_EPS)?;
    Ok(hamiltonian_raw(&c.positions(), &c.strengths()))
}

pub(crate) fn hamiltonian_raw(pos: &[Vec3], lam: &[f64]) -> f64 {
    let mut h = 0.0;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            h += lam[i] * lam[j] * (pos[i] - pos[j]).norm_squared().ln();
        }
    }
    h
}

/// `ẋ_i = Σ_{j≠i} λ_j (x_j × x_i)/(1 − x_i·x_j)`.
pub fn vector_field(c: &Configuration) -> Result<Vec<Vec3>> {
    c.check_collisions(COLLISION_EPS)?;
    let mut out = vec![Vec3::zeros(); c.len()];
    field_raw(&c.positions(), &c.strengths(), &mut out);
    Ok(out)
}

pub(crate) fn field_raw(pos: &[Vec3], lam: &[f64], out: &mut [Vec3]) {
    for v in out.iter_mut() {
        *v = Vec3::zeros();
    }
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            let w = pos[j].cross(&pos[i]) / half_chord2(&pos[i], &pos[j]);
            out[i] += lam[j] * w;
            out[j] -= lam[i] * w;
        }
    }
}

/// Center of vorticity `Φ = Σ λ_j x_j`.
pub fn momentum_map(c: &Configuration) -> Vec3 {
    c.vortices()
        .iter()
        .map(|v| v.strength * v.position.as_vec())
        .sum()
}

/// `H(c) + ⟨Φ(c) − μ, ξ⟩`.
pub fn augmented_hamiltonian(c: &Configuration, xi: &Vec3, mu: &Vec3) -> Result<f64> {
    Ok(hamiltonian(c)? + (momentum_map(c) - mu).dot(xi))
}

/// Ambient gradient of `H_ξ` for ξ along z, one covector per vortex.
pub fn ambient_gradient(c: &Configuration, xi_z: f64) -> Vec<Vec3> {
    let pos = c.positions();
    let lam = c.strengths();
    let mut g = vec![Vec3::zeros(); pos.len()];
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            let k = lam[i] * lam[j] / half_chord2(&pos[i], &pos[j]);
            g[i] -= k * pos[j];
            g[j] -= k * pos[i];
        }
        g[i].z += xi_z * lam[i];
    }
    g
}

/// `dH_ξ` in the mixed chart for ξ = ξ_z e_z.
pub fn chart_gradient(c: &Configuration, xi_z: f64) -> Result<DVector<f64>> {
    c.check_collisions(COLLISION_EPS)?;
    let chart = MixedChart::for_configuration(c);
    Ok(chart.pull_back(c, &ambient_gradient(c, xi_z)))
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Configuration>,
    pub h_drift: Vec<f64>,
    pub phi_drift: Vec<f64>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&Configuration> {
        self.states.last()
    }

    pub fn max_h_drift(&self) -> f64 {
        self.h_drift.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_phi_drift(&self) -> f64 {
        self.phi_drift.iter().cloned().fold(0.0, f64::max)
    }
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn min_chord(pos: &[Vec3]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            d = d.min((pos[i] - pos[j]).norm());
        }
    }
    d
}

/// Adaptive Dormand–Prince 5(4) in ambient coordinates, projecting every
/// position back to the sphere after each accepted step. `t_end` may be
/// negative. Every accepted step is recorded.
///
/// The local error of a step of length `h ≤ 1` is kept below `tol·h`
/// (error per unit step), so the drift of the invariants grows like `tol·|t_end|`
/// rather than with the number of steps.
pub fn integrate(c0: &Configuration, t_end: f64, tol: f64) -> Result<Trajectory> {
    if !(tol.is_finite() && tol > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidConfiguration(
            "tol must be positive and t_end finite".into(),
        ));
    }
    c0.check_collisions(COLLISION_EPS)?;
    let lam = c0.strengths();
    let n = c0.len();
    let h0 = hamiltonian_raw(&c0.positions(), &lam);
    let phi0 = momentum_map(c0);

    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![c0.clone()],
        h_drift: vec![0.0],
        phi_drift: vec![0.0],
    };
    if t_end == 0.0 {
        return Ok(traj);
    }
    let dir = t_end.signum();
    let span = t_end.abs();
    let mut y = c0.positions();
    let mut k = vec![vec![Vec3::zeros(); n]; 7];
    field_raw(&y, &lam, &mut k[0]);
    let fmax = k[0].iter().map(|v| v.amax()).fold(0.0, f64::max);
    let mut h = (0.05 / (1.0 + fmax)).min(span);
    let mut t = 0.0_f64;
    let mut stage = vec![Vec3::zeros(); n];
    let mut y5 = vec![Vec3::zeros(); n];

    while t < span {
        if t + h > span {
            h = span - t;
        }
        if h < 1e-14 * span.max(1.0) {
            return Err(Error::StepSizeUnderflow {
                t: dir * t,
                partial: Box::new(traj),
            });
        }
        let hs = dir * h;
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for r in 0..s {
                    acc += hs * A[s][r] * k[r][i];
                }
                stage[i] = acc;
            }
            field_raw(&stage, &lam, &mut k[s]);
        }
        // The last stage is evaluated at the 5th-order solution.
        y5.copy_from_slice(&stage);
        let mut err = 0.0_f64;
        for i in 0..n {
            let mut e = Vec3::zeros();
            for s in 0..7 {
                let b5 = if s < 6 { A[6][s] } else { 0.0 };
                e += hs * (b5 - B4[s]) * k[s][i];
            }
            for r in 0..3 {
                let sc = tol * h.min(1.0) * (1.0 + y[i][r].abs().max(y5[i][r].abs()));
                err = err.max(e[r].abs() / sc);
            }
        }
        if !err.is_finite() {
            h *= 0.25;
            continue;
        }
        if err <= 1.0 {
            t += h;
            for i in 0..n {
                y[i] = y5[i].normalize();
            }
            let c = c0.with_positions(&y);
            let hh = hamiltonian_raw(&y, &lam);
            traj.times.push(dir * t);
            traj.h_drift.push((hh - h0).abs());
            traj.phi_drift.push((momentum_map(&c) - phi0).amax());
            traj.states.push(c);
            if min_chord(&y) < 10.0 * COLLISION_EPS {
                return Err(Error::CollisionApproach {
                    t: dir * t,
                    partial: Box::new(traj),
                });
            }
            field_raw(&y, &lam, &mut k[0]);
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.25)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok(traj)
}

/// `‖flow_t(g·c0) − g·flow_{χ(g)t}(c0)‖∞`.
pub fn reversal_check(c0: &Configuration, g: &GroupElement, t: f64) -> Result<f64> {
    const TOL: f64 = 1e-11;
    let gc0 = apply_group_element(g, c0)?;
    let lhs = integrate(&gc0, t, TOL)?;
    let rhs = integrate(c0, g.chi() as f64 * t, TOL)?;
    let a = lhs.last().expect("trajectory has a start").positions();
    let b = apply_group_element(g, rhs.last().expect("trajectory has a start"))?.positions();
    Ok(a.iter()
        .zip(&b)
        .map(|(p, q)| (p - q).amax())
        .fold(0.0, f64::max))
}
