//! Locates the latitude where each D_Nh ring pair loses Lyapunov stability,
//! then prints the full threshold table with reference values.

use vortex_atlas::atlas::{threshold_table, thresholds_csv};
use vortex_atlas::equilibria::Family;
use vortex_atlas::stability::critical_latitude;

fn main() -> vortex_atlas::Result<()> {
    for n in 2..=7 {
        let p = critical_latitude(Family::DNh2R, n, 0, 0.005)?;
        println!(
            "D{n}h  θ* = {:.5}  {} → {}  ({})",
            p.theta, p.below, p.above, p.kind
        );
    }
    println!();
    let rows = threshold_table(0.005)?;
    let (csv, notes) = thresholds_csv(&rows);
    print!("{csv}");
    for n in notes {
        eprintln!("note: {n}");
    }
    Ok(())
}
