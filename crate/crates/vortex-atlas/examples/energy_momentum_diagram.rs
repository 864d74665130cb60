//! Builds the energy-momentum diagram for four vortices and writes it as SVG.
//!
//! Usage: `cargo run --example energy_momentum_diagram [out.svg]`

use vortex_atlas::atlas::build_diagram;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "diagram.svg".into());
    let d = build_diagram(2, 0.005)?;
    for c in &d.curves {
        println!("{:<24} {:>4} points", c.branch_label, c.points.len());
    }
    println!(
        "E at μ = {}, H = {:.6} ({})",
        d.fixed_point.mu_z, d.fixed_point.energy, d.fixed_point.verdict
    );
    for b in &d.bifurcations {
        println!(
            "{} meets {} at μ = {:.4}: {:?}",
            b.parent, b.child, b.mu_z, b.kind
        );
    }
    std::fs::write(&out, d.to_svg())?;
    println!("wrote {out}");
    Ok(())
}
