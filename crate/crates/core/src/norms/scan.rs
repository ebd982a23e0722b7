use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::golden::golden_max;
use crate::transform::{geometric_grid, young_fenchel, PhiSpec, DEFAULT_TOL};

/// Result of a supremum over `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanOutcome {
    pub value: f64,
    /// Maximizing `p`.
    pub argmax_p: f64,
    /// Upper end of the scanned range after extensions.
    pub p_max: f64,
    /// Number of ×4 extensions of the range that were needed.
    pub extensions: u32,
}

const MAX_EXTENSIONS: u32 = 2;

/// `sup_{p >= p_min} exp(log_inner(p) - h*(p)/p)`.
///
/// `log_inner(p)` is evaluated on the geometric grid over `[p_min, p_max]`.
/// When the largest value sits at the upper end, the range grows by a
/// factor of four, at most twice, before the scan is declared divergent.
/// The maximizing cell is then refined by golden-section search in `ln p`.
pub fn sup_over_p<F>(phi: &PhiSpec, p_min: f64, p_max: f64, log_inner: F) -> Result<ScanOutcome>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let ratio = |p: f64| -> Result<f64> {
        let li = log_inner(p)?;
        if li == f64::NEG_INFINITY {
            return Ok(li);
        }
        Ok(li - young_fenchel(phi, p, DEFAULT_TOL)? / p)
    };
    let mut ps = geometric_grid(p_min, p_max);
    let mut vals = ps.par_iter().map(|&p| ratio(p)).collect::<Result<Vec<f64>>>()?;
    let mut extensions = 0;
    loop {
        let best = argmax(&vals);
        if best + 1 < ps.len() {
            break;
        }
        if extensions == MAX_EXTENSIONS {
            return Err(Error::ScanDivergence { p_max: ps[ps.len() - 1] });
        }
        let top = ps[ps.len() - 1];
        let more = geometric_grid(top, 4.0 * top);
        let extra = more[1..].par_iter().map(|&p| ratio(p)).collect::<Result<Vec<f64>>>()?;
        ps.extend_from_slice(&more[1..]);
        vals.extend(extra);
        extensions += 1;
    }
    let i = argmax(&vals);
    let (mut best_p, mut best_v) = (ps[i], vals[i]);
    if best_v == f64::NEG_INFINITY {
        return Ok(ScanOutcome {
            value: 0.0,
            argmax_p: best_p,
            p_max: ps[ps.len() - 1],
            extensions,
        });
    }
    let lo = ps[i.saturating_sub(1)].ln();
    let hi = ps[(i + 1).min(ps.len() - 1)].ln();
    let (t, v) = golden_max(|t: f64| ratio(t.exp()), lo, hi, 1e-10, 200)?;
    if v > best_v {
        best_v = v;
        best_p = t.exp();
    }
    Ok(ScanOutcome {
        value: best_v.exp(),
        argmax_p: best_p,
        p_max: ps[ps.len() - 1],
        extensions,
    })
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_inner_peaks_at_left_end() {
        let phi = PhiSpec::power(2.0).unwrap();
        let s = sup_over_p(&phi, 1.0, 1024.0, |_| Ok(0.0)).unwrap();
        assert_eq!(s.argmax_p, 1.0);
        assert!((s.value - 1.0 / 0.428_881_942_5).abs() < 1e-8);
        assert_eq!(s.extensions, 0);
    }

    #[test]
    fn interior_peak_is_refined() {
        // ψ(p) = sqrt(p/2) e^{-1/2}, so the ratio is exp(-(ln p - ln 50)²)
        let phi = PhiSpec::power(2.0).unwrap();
        let s = sup_over_p(&phi, 1.0, 1024.0, |p| {
            let psi = (p / 2.0f64).sqrt() * (-0.5f64).exp();
            Ok(psi.ln() - (p.ln() - 50f64.ln()).powi(2))
        })
        .unwrap();
        assert!((s.argmax_p / 50.0 - 1.0).abs() < 1e-6);
        assert!((s.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn growing_ratio_diverges() {
        let phi = PhiSpec::power(2.0).unwrap();
        let r = sup_over_p(&phi, 1.0, 16.0, |p| Ok(p));
        assert!(matches!(r, Err(Error::ScanDivergence { p_max }) if p_max == 256.0));
    }

    #[test]
    fn late_peak_found_after_extension() {
        let phi = PhiSpec::power(2.0).unwrap();
        let s = sup_over_p(&phi, 1.0, 16.0, |p| {
            let psi = (p / 2.0f64).sqrt() * (-0.5f64).exp();
            Ok(psi.ln() - (p.ln() - 40f64.ln()).powi(2))
        })
        .unwrap();
        assert_eq!(s.extensions, 1);
        assert!((s.argmax_p / 40.0 - 1.0).abs() < 1e-6);
    }
}
