//! Orlicz generators `φ`, the log-composition `h(y) = φ(eʸ)`, the
//! Young–Fenchel conjugate `h*` and the weight `ψ(p) = exp(h*(p)/p)`.

mod conjugate;
mod membership;
mod phi;

pub use conjugate::{
    biconjugate, fenchel_moreau_check, geometric_grid, hstar_right_derivative, psi, young_fenchel,
    young_fenchel_from, ConjugateCache, DEFAULT_TOL, POINTS_PER_DECADE,
};
pub use membership::{phi_membership_check, series_term, MembershipReport};
pub use phi::{CustomPhi, PhiFamily, PhiSpec};

pub(crate) use membership::log_gap;
