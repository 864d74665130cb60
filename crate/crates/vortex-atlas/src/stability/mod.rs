//! Energy-momentum stability analysis.

pub mod analysis;
pub mod critical;
pub mod hessian;
pub mod oracle;
pub mod slice;

pub use analysis::{
    analyze, analyze_small, block_coupling, closed_form_r_s, radial_s, BlockSpectrum, StabilityReport,
    Verdict,
};
pub use critical::{
    critical_latitude, scan_transitions, scan_transitions_in, Transition, TransitionPoint,
};
pub use hessian::{hessian_closed_form, hessian_fd};
pub use oracle::{full_linearization_oracle, spectrum_mismatch};
pub use slice::{slice_basis, slice_symplectic_form, BlockLabel, SliceBasis, TangentVector};

/// Hessian eigenvalues with modulus below this are treated as zero.
pub const DEF_TOL: f64 = 1e-9;
/// Linearization eigenvalues with `|Re λ| > SPEC_TOL·max(1, |λ|)` count as unstable.
pub const SPEC_TOL: f64 = 1e-8;
