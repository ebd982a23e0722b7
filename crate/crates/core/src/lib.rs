//! Exponential Orlicz, Grand-Lebesgue and Lorentz norms of functions on
//! `[-1, 1]` and `[0, 2π]`, together with a harness that measures
//! Markov–Bernstein derivative ratios in those norms and checks them against
//! explicitly computed constants.
//!
//! The crate is organised bottom-up:
//!
//! - [`measure`]: integration against the normalized Lebesgue measure,
//!   `L_p` quasi-norms, the distribution function and sup-norm estimates.
//! - [`function`]: algebraic, trigonometric, rational and generalized
//!   algebraic polynomials, plus the Jacobi `P_n^{(2,2)}` family.
//! - [`transform`]: admissible Orlicz generators `φ`, the log-composition
//!   `h(y) = φ(eʸ)`, its Young–Fenchel conjugate and the weight `ψ(p)`.
//! - [`norms`]: the spliced N-function, Luxemburg, `G(φ)`, Lorentz,
//!   weighted Lorentz and `V(φ; r)` (quasi)norms.
//! - [`harness`]: named constants, ratio sweeps, inequality-bound checks,
//!   tail fits and an extremal polynomial search.

pub mod error;
pub mod function;
mod golden;
pub mod harness;
pub mod measure;
pub mod norms;
pub mod transform;

pub use error::{Error, Result};
