use serde::Serialize;

use super::phi::PhiSpec;
use crate::error::Result;

/// Grid on which monotonicity and convexity of `h` are tested.
const Y_MIN: f64 = -10.0;
const Y_MAX: f64 = 6.0;
const Y_STEP: f64 = 1.0 / 16.0;
const CONVEXITY_TOL: f64 = 1e-9;
/// Summability horizon: terms `k = 3 ..= SERIES_END`.
const SERIES_START: usize = 3;
const SERIES_END: usize = 200;
const RATIO_WINDOW: usize = 20;

/// Verdicts of [`phi_membership_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub increasing: bool,
    pub convex: bool,
    pub summable: bool,
    pub pass: bool,
    /// `Σ_{k=3}^{200} exp(h(k) - h(k+1))`.
    pub partial_sum: f64,
    /// Largest ratio of consecutive nonzero terms in the last window.
    pub tail_ratio: f64,
    /// First failure found, if any.
    pub detail: Option<String>,
}

/// `h(k+1) - h(k)` from log values, without overflow.
pub(crate) fn log_gap(lk: f64, lk1: f64) -> f64 {
    if lk == f64::NEG_INFINITY {
        return lk1.exp();
    }
    (lk1 + (-(lk - lk1).exp_m1()).ln()).exp()
}

/// Term `exp(h(k) - h(k+1))` of the summability series.
pub fn series_term(phi: &PhiSpec, k: f64) -> Result<f64> {
    Ok((-log_gap(phi.log_h(k)?, phi.log_h(k + 1.0)?)).exp())
}

/// Admissibility report for `φ`: `h` strictly increasing and convex on a
/// `y`-grid, and `Σ exp(h(k) - h(k+1))` summable.
///
/// Summability is judged from the partial sums up to `k = 200`: every one of
/// the last 20 terms must be zero or at most half its predecessor. Series
/// that converge more slowly than geometrically (for example with `h(y)`
/// close to `y^{1+ν}` for small `ν`) are reported as failing.
pub fn phi_membership_check(phi: &PhiSpec) -> MembershipReport {
    let mut detail = None;
    let note = |d: &mut Option<String>, s: String| {
        if d.is_none() {
            *d = Some(s);
        }
    };

    let n = ((Y_MAX - Y_MIN) / Y_STEP).round() as usize;
    let ys: Vec<f64> = (0..=n).map(|i| Y_MIN + Y_STEP * i as f64).collect();
    let hs: Vec<Result<f64>> = ys.iter().map(|&y| phi.h(y)).collect();
    let mut increasing = true;
    let mut convex = true;
    if let Some((i, Err(e))) = hs.iter().enumerate().find(|(_, h)| h.is_err()) {
        note(&mut detail, format!("h({}) failed: {e}", ys[i]));
        increasing = false;
        convex = false;
    } else {
        let hs: Vec<f64> = hs.into_iter().map(|h| h.unwrap_or(f64::NAN)).collect();
        if let Some(i) = (1..hs.len()).find(|&i| !(hs[i] > hs[i - 1])) {
            increasing = false;
            note(&mut detail, format!("h not strictly increasing near y = {}", ys[i]));
        }
        if let Some(i) = (1..hs.len() - 1).find(|&i| {
            let d2 = hs[i + 1] - 2.0 * hs[i] + hs[i - 1];
            d2 < -CONVEXITY_TOL * hs[i + 1].abs().max(1.0)
        }) {
            convex = false;
            note(&mut detail, format!("h not convex near y = {}", ys[i]));
        }
    }

    let mut terms = Vec::with_capacity(SERIES_END - SERIES_START + 1);
    let mut summable = true;
    for k in SERIES_START..=SERIES_END {
        match series_term(phi, k as f64) {
            Ok(t) if t.is_finite() => terms.push(t),
            Ok(t) => {
                summable = false;
                note(&mut detail, format!("series term {k} is {t}"));
                break;
            }
            Err(e) => {
                summable = false;
                note(&mut detail, format!("series term {k} failed: {e}"));
                break;
            }
        }
    }
    let partial_sum: f64 = terms.iter().sum();
    let mut tail_ratio: f64 = 0.0;
    if summable {
        let tail = &terms[terms.len() - RATIO_WINDOW - 1..];
        for w in tail.windows(2) {
            if w[1] == 0.0 {
                continue;
            }
            tail_ratio = tail_ratio.max(w[1] / w[0]);
        }
        if tail_ratio > 0.5 {
            summable = false;
            note(
                &mut detail,
                format!("series terms decay at ratio {tail_ratio:.4} > 1/2 near k = {SERIES_END}"),
            );
        }
    }

    MembershipReport {
        increasing,
        convex,
        summable,
        pass: increasing && convex && summable,
        partial_sum,
        tail_ratio,
        detail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        assert!(phi_membership_check(&PhiSpec::power(2.0).unwrap()).pass);
        assert!(phi_membership_check(&PhiSpec::log_power(1.0).unwrap()).pass);
        let r = phi_membership_check(&PhiSpec::log_power(0.0).unwrap());
        assert!(!r.summable && !r.pass);
        assert!(r.increasing && r.convex);
    }

    #[test]
    fn power_log_family_passes() {
        for (m, r) in [(1.0, 0.0), (2.0, 1.0), (0.5, -1.0), (3.0, 0.5)] {
            let rep = phi_membership_check(&PhiSpec::power_log(m, r).unwrap());
            assert!(rep.pass, "m = {m}, r = {r}: {:?}", rep.detail);
        }
    }

    #[test]
    fn concave_custom_fails() {
        // h(y) = ln(1 + e^y)^{1/2} grows like sqrt(y)
        let phi = PhiSpec::custom("sqrt-log", |z: f64| z.ln_1p().sqrt());
        let r = phi_membership_check(&phi);
        assert!(!r.convex && !r.pass);
    }

    #[test]
    fn gap_matches_direct_difference() {
        let (a, b) = (2.0f64, 3.5f64);
        assert!((log_gap(a.ln(), b.ln()) - 1.5).abs() < 1e-14);
        assert_eq!(log_gap(800.0, 802.0), f64::INFINITY);
    }
}
