//! Integrates a slightly perturbed D3h ring pair and reports how well the
//! energy and momentum are conserved along the way.

use vortex_atlas::dynamics::integrate;
use vortex_atlas::equilibria::{make_family, ring_angular_velocity, FamilyDescriptor};
use vortex_atlas::sphere::Vec3;

fn main() -> vortex_atlas::Result<()> {
    let desc = FamilyDescriptor::dnh(3, 0.6, 0);
    let c = make_family(&desc)?;
    let xi = ring_angular_velocity(&desc)?;
    println!("{}: rings rotate at ξ = {xi:.6}", desc.label());

    // nudge the first vortex towards the pole
    let mut pos = c.positions();
    pos[0] = (pos[0] + Vec3::new(0.0, 0.0, 1e-3)).normalize();
    let c = c.with_positions(&pos);

    let traj = integrate(&c, 20.0, 1e-10)?;
    println!(
        "{} accepted steps up to t = {}",
        traj.times.len() - 1,
        traj.times.last().unwrap()
    );
    println!("max |ΔH| = {:.3e}", traj.max_h_drift());
    println!("max |ΔΦ| = {:.3e}", traj.max_phi_drift());
    Ok(())
}
