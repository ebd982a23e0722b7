use std::f64::consts::{E, PI};

use crate::error::{Error, Result};

/// `K(p) = [4π(p+3)² / (p sin(2π/p))]^{1/p}` for `p > 2`.
pub fn k_constant(p: f64) -> Result<f64> {
    if !(p > 2.0 && p.is_finite()) {
        return Err(Error::Range(format!("K(p) needs p > 2, got {p}")));
    }
    let inner = 4.0 * PI * (p + 3.0).powi(2) / (p * (2.0 * PI / p).sin());
    Ok(inner.powf(1.0 / p))
}

/// `ln r!`, summed directly up to 20 and by Stirling's series beyond.
fn ln_factorial(r: u32) -> f64 {
    if r <= 20 {
        return (2..=r).map(|k| (k as f64).ln()).sum();
    }
    let n = r as f64 + 1.0;
    // ln Γ(n) with three correction terms
    (n - 0.5) * n.ln() - n + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * n) - 1.0 / (360.0 * n.powi(3))
        + 1.0 / (1260.0 * n.powi(5))
}

/// `ln D(r)` with `D(r) = e^{1/e} r! (4/3)^{r+1/4} (r+1/4)^{r+1/4}`.
pub fn ln_d_constant(r: u32) -> Result<f64> {
    if r < 1 {
        return Err(Error::Range("D(r) needs r >= 1".into()));
    }
    let q = r as f64 + 0.25;
    Ok(1.0 / E + ln_factorial(r) + q * (4.0f64 / 3.0).ln() + q * q.ln())
}

pub fn d_constant(r: u32) -> Result<f64> {
    Ok(ln_d_constant(r)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_examples() {
        assert!((k_constant(4.0).unwrap() - 3.522_382_28).abs() < 1e-8);
        assert!((k_constant(4.0).unwrap() - (49.0 * PI).powf(0.25)).abs() < 1e-14);
        assert!((k_constant(8.0).unwrap() - 2.012).abs() < 1e-3);
        assert!(k_constant(2.0).is_err());
        let mut last = f64::INFINITY;
        for i in 0..=240 {
            let k = k_constant(4.0 + 0.25 * i as f64).unwrap();
            assert!(k < last);
            last = k;
        }
    }

    #[test]
    fn d_examples() {
        assert!((d_constant(1).unwrap() - 2.736).abs() < 1e-3);
        let want = (1.0 / E).exp() * 2.0 * (4.0f64 / 3.0).powf(2.25) * 2.25f64.powf(2.25);
        assert!((d_constant(2).unwrap() / want - 1.0).abs() < 1e-14);
        for r in 1..=10 {
            assert!(d_constant(r + 1).unwrap() / d_constant(r).unwrap() > (r + 1) as f64);
        }
    }

    #[test]
    fn stirling_branch_is_continuous() {
        let direct: f64 = (2..=21).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(21) - direct).abs() < 1e-12);
        assert_eq!(ln_factorial(1), 0.0);
    }
}
