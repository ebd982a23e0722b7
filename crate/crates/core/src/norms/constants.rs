use serde::Serialize;

use super::orlicz::OrliczN;
use crate::error::{Error, Result};
use crate::transform::{hstar_right_derivative, log_gap};

const MAX_TERMS: usize = 500;
const TAIL_TOL: f64 = 1e-12;

/// `C₃`, `k₀` and `C₄` of an N-function.
///
/// `C₄` overflows for moderate generators (about `1e176` for `φ = z²`), so
/// its logarithm is the primary value and `c4` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalenceConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub k0: f64,
    /// Right derivative of `h*` at `p = 1`.
    pub hstar_slope_at_1: f64,
    pub log_c4: f64,
    pub c4: f64,
    /// `Σ_{k >= k₀} exp(h(k) - h(k+1))`, the form that enters `C₄`.
    pub series: f64,
    pub series_terms: usize,
    /// `Σ_{k >= k₀} exp(h(k-1) - h(k))`, the index-shifted form, reported
    /// for comparison.
    pub series_shifted: f64,
    /// `C₄` computed with the shifted series.
    pub log_c4_shifted: f64,
}

/// Sum of `exp(h(k + s) - h(k + s + 1))` over `k = k₀, k₀ + 1, …`, stopped
/// once the geometric tail bound `t ρ / (1 - ρ)` (with `ρ` the ratio of the
/// last two terms) is below `1e-12`.
fn certified_series(n: &OrliczN, k0: f64, shift: f64) -> Result<(f64, usize)> {
    let phi = n.phi();
    let mut sum = 0.0;
    let mut prev = f64::NAN;
    for j in 0..MAX_TERMS {
        let k = k0 + j as f64 + shift;
        let t = (-log_gap(phi.log_h(k)?, phi.log_h(k + 1.0)?)).exp();
        if !t.is_finite() {
            break;
        }
        sum += t;
        if t == 0.0 {
            return Ok((sum, j + 1));
        }
        if j > 0 {
            let rho = t / prev;
            if rho < 1.0 && t * rho / (1.0 - rho) < TAIL_TOL {
                return Ok((sum, j + 1));
            }
        }
        prev = t;
    }
    Err(Error::Summability {
        phi: phi.name(),
        terms: MAX_TERMS,
    })
}

/// `C₃ = max(1, C₁, 1/C₂)`, `k₀ = max(4 + max(ln C₁, 1), h*'₊(1))` and
/// `C₄ = e² [N(e^{k₀-2}) + Σ_{k >= k₀} exp(h(k) - h(k+1))]`.
pub fn equivalence_constants(n: &OrliczN) -> Result<EquivalenceConstants> {
    let (c1, c2) = (n.c1(), n.c2());
    let c3 = 1f64.max(c1).max(1.0 / c2);
    let slope = hstar_right_derivative(n.phi(), 1.0)?;
    let k0 = (4.0 + c1.ln().max(1.0)).max(slope);
    let log_n = n.log_eval((k0 - 2.0).exp())?;
    let (series, series_terms) = certified_series(n, k0, 0.0)?;
    let (series_shifted, _) = certified_series(n, k0, -1.0)?;
    let log_c4 = 2.0 + log_add(log_n, series.ln());
    let log_c4_shifted = 2.0 + log_add(log_n, series_shifted.ln());
    Ok(EquivalenceConstants {
        c1,
        c2,
        c3,
        k0,
        hstar_slope_at_1: slope,
        log_c4,
        c4: log_c4.exp(),
        series,
        series_terms,
        series_shifted,
        log_c4_shifted,
    })
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}
