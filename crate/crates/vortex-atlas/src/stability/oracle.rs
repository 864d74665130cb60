//! Independent check of slice spectra through the full co-rotating vector field.

use nalgebra::{Complex, DMatrix, DVector};

use super::analysis::general_eigenvalues;
use crate::dynamics::vector_field;
use crate::error::Result;
use crate::sphere::{Configuration, MixedChart, Vec3};

fn corotating_field(
    chart: &MixedChart,
    c: &Configuration,
    xi_z: f64,
    sign: f64,
) -> Result<DVector<f64>> {
    let mut v = vector_field(c)?;
    for (vi, x) in v.iter_mut().zip(c.positions()) {
        *vi += sign * xi_z * Vec3::z().cross(&x);
    }
    Ok(chart.push_forward(c, &v))
}

/// Eigenvalues of the chart Jacobian of `X_H` in the frame rotating at `ξ_z`.
///
/// Uses a fourth-order central stencil with step `1e-3`, shrunk to
/// `1e-3·sin θ` along θ so vortices close to a pole are resolved. The sense of
/// rotation is chosen so the field vanishes at `config`.
pub fn full_linearization_oracle(config: &Configuration, xi_z: f64) -> Result<Vec<Complex<f64>>> {
    let chart = MixedChart::for_configuration(config);
    let q0 = chart.coordinates(config)?;
    let sign = {
        let a = corotating_field(&chart, config, xi_z, 1.0)?.amax();
        let b = corotating_field(&chart, config, xi_z, -1.0)?.amax();
        if a <= b {
            1.0
        } else {
            -1.0
        }
    };
    let dim = chart.dim();
    let m = chart.n_spherical();
    let mut jac = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let h = if k < m {
            1e-3 * q0[k].sin().min(1.0)
        } else {
            1e-3
        };
        let f = |t: f64| -> Result<DVector<f64>> {
            let mut q = q0.clone();
            q[k] += t;
            corotating_field(&chart, &chart.configuration(config, &q)?, xi_z, sign)
        };
        let col = (f(-2.0 * h)? - f(2.0 * h)? + (f(h)? - f(-h)?) * 8.0) / (12.0 * h);
        jac.set_column(k, &col);
    }
    general_eigenvalues(&jac)
}

/// Largest distance between an entry of `slice` and its greedy nearest match in `full`.
///
/// `full` also carries the zero modes of the group orbit and the pair of
/// modes that tilt the rotation axis; those stay unmatched.
pub fn spectrum_mismatch(slice: &[Complex<f64>], full: &[Complex<f64>]) -> f64 {
    let mut pool: Vec<Complex<f64>> = full.to_vec();
    let mut worst = 0.0f64;
    for z in slice {
        let Some((k, d)) = pool
            .iter()
            .enumerate()
            .map(|(k, w)| (k, (w - z).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
        else {
            return f64::INFINITY;
        };
        worst = worst.max(d);
        pool.swap_remove(k);
    }
    worst
}
