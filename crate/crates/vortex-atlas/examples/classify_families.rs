//! Classifies a handful of ring families block by block.

use vortex_atlas::equilibria::FamilyDescriptor;
use vortex_atlas::stability::analyze;

fn main() -> vortex_atlas::Result<()> {
    let cases = [
        FamilyDescriptor::dnh(2, 0.5, 0),
        FamilyDescriptor::dnh(5, 0.677, 0),
        FamilyDescriptor::dnd(3, 1.31, 0),
        FamilyDescriptor::dnh(6, 0.4, 2),
        FamilyDescriptor::dnd(4, 2.0, 2),
    ];
    for d in &cases {
        let rep = analyze(d)?;
        println!(
            "{}  θ₀ = {}  μ = {:.6}  ξ = {:.6}",
            d.label(),
            d.theta0,
            rep.mu_z,
            rep.xi_z
        );
        for b in &rep.blocks {
            let max_re = b
                .linearization_eigenvalues
                .iter()
                .map(|z| z.re.abs())
                .fold(0.0, f64::max);
            println!(
                "  {:<8} d²H: {:?}  max |Re λ| = {max_re:.2e}",
                b.label.to_string(),
                round(&b.hessian_eigenvalues)
            );
        }
        let deciding = rep
            .deciding_block
            .map(|l| l.to_string())
            .unwrap_or_else(|| "-".into());
        println!("  => {} (decided by {deciding})\n", rep.verdict);
    }
    Ok(())
}

fn round(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e4).round() / 1e4).collect()
}
