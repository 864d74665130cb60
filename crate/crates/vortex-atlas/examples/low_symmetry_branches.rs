//! Traces the C2v branches of four vortices with and without polar vortices
//! and checks each member is a relative equilibrium.

use vortex_atlas::equilibria::{
    angular_velocity, branch_c2v_2R2p, branch_c2v_RRp2p, branch_c2v_RmRmp, re_residual,
};
use vortex_atlas::stability::analyze_small;

fn main() -> vortex_atlas::Result<()> {
    let xs: Vec<f64> = (-9..=9).map(|k| k as f64 / 10.0).collect();
    println!(
        "{:<20} {:>6} {:>10} {:>10} {:>10}  verdict",
        "branch", "x", "y", "μ", "residual"
    );
    for &x in &xs {
        let points = [
            ("C2v(2R,2p) λ=1", branch_c2v_2R2p(x, 1.0)),
            ("C2v(R,R',2p) λ=1 +", branch_c2v_RRp2p(x, 1.0, 1)),
            ("C2v(R,R',2p) λ=1 −", branch_c2v_RRp2p(x, 1.0, -1)),
            ("C2v(Rm,Rm')", branch_c2v_RmRmp(x)),
        ];
        for (name, p) in points {
            let Ok(p) = p else { continue };
            let c = p.configuration()?;
            let xi = angular_velocity(&c)?;
            let verdict = analyze_small(&c, xi)?.verdict;
            println!(
                "{name:<20} {x:>6.2} {:>10.6} {:>10.6} {:>10.2e}  {verdict}",
                p.y,
                p.mu(),
                re_residual(&c, xi)?
            );
        }
    }
    Ok(())
}
