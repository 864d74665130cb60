//! Sweeps θ₀ for D_Nh ring pairs and prints the stability zones for each N.

use std::f64::consts::FRAC_PI_2;

use vortex_atlas::atlas::{run_sweep, SweepSpec};
use vortex_atlas::equilibria::Family;

fn main() -> vortex_atlas::Result<()> {
    let spec = SweepSpec {
        families: vec![Family::DNh2R],
        n_min: 2,
        n_max: 8,
        theta_start: 0.01,
        theta_stop: FRAC_PI_2 - 0.01,
        theta_step: 0.01,
        kp: 0,
        lambda_n: 1.0,
    };
    let rows = run_sweep(&spec)?;
    for n in spec.n_min..=spec.n_max {
        let mut zones: Vec<(f64, f64, &str)> = Vec::new();
        for r in rows.iter().filter(|r| r.descriptor.n == n) {
            let t = r.descriptor.theta0;
            match zones.last_mut() {
                Some(z) if z.2 == r.verdict => z.1 = t,
                _ => zones.push((t, t, &r.verdict)),
            }
        }
        println!("N = {n}");
        for (a, b, v) in zones {
            println!("  [{a:.2}, {b:.2}]  {v}");
        }
    }
    Ok(())
}
