//! Compares the block-diagonal slice spectrum against a brute-force
//! linearization of the full flow in the rotating frame.

use vortex_atlas::equilibria::{make_family, ring_angular_velocity, FamilyDescriptor};
use vortex_atlas::stability::{analyze, full_linearization_oracle, spectrum_mismatch};

fn main() -> vortex_atlas::Result<()> {
    for d in [
        FamilyDescriptor::dnh(3, 0.77, 0),
        FamilyDescriptor::dnd(4, 1.0, 0),
        FamilyDescriptor::dnh(4, 0.9, 2),
    ] {
        let slice = analyze(&d)?.spectrum();
        let full = full_linearization_oracle(&make_family(&d)?, ring_angular_velocity(&d)?)?;
        println!(
            "{:<14} θ₀ = {:<5} slice {:>2} eigenvalues, full {:>2}, mismatch {:.2e}",
            d.label(),
            d.theta0,
            slice.len(),
            full.len(),
            spectrum_mismatch(&slice, &full)
        );
    }
    Ok(())
}
