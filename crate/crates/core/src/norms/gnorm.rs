use super::scan::{sup_over_p, ScanOutcome};
use crate::error::{Error, Result};
use crate::measure::{Evaluable, Profile, QuadratureConfig};
use crate::transform::PhiSpec;

/// Upper end of the initial p-grid of every sup-over-p scan.
pub const SCAN_P_MAX: f64 = 1024.0;

fn zero_outcome(p: f64) -> ScanOutcome {
    ScanOutcome {
        value: 0.0,
        argmax_p: p,
        p_max: p,
        extensions: 0,
    }
}

/// `sup_{p >= p_min} ‖f‖_p / ψ(p)` with its maximizer.
pub fn g_norm_from<E: Evaluable + Sync + ?Sized>(
    f: &E,
    phi: &PhiSpec,
    p_min: f64,
    cfg: &QuadratureConfig,
) -> Result<ScanOutcome> {
    if !(p_min > 0.0) {
        return Err(Error::Range(format!("p_min must be > 0, got {p_min}")));
    }
    let profile = Profile::new(f)?;
    if profile.sampled_max() == 0.0 {
        return Ok(zero_outcome(p_min));
    }
    sup_over_p(phi, p_min, SCAN_P_MAX.max(4.0 * p_min), |p| {
        Ok(profile.integrate_log_of(|v| p * v.abs().ln(), cfg)? / p)
    })
}

/// `‖f‖G(φ) = sup_{p >= 1} ‖f‖_p / ψ(p)`.
pub fn g_norm<E: Evaluable + Sync + ?Sized>(f: &E, phi: &PhiSpec, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(g_norm_from(f, phi, 1.0, cfg)?.value)
}

/// `‖f‖V(φ; r) = sup_β ‖f‖_β / ψ(β / (1 - rβ))` over `β ∈ (4/(4r+1), 1/r)`,
/// scanned as `β = p / (pr + 1)` with `p >= 4`. The maximizer reported is
/// the `p` of the pair.
pub fn v_quasinorm_scan<E: Evaluable + Sync + ?Sized>(
    f: &E,
    phi: &PhiSpec,
    r: u32,
    cfg: &QuadratureConfig,
) -> Result<ScanOutcome> {
    if r < 1 {
        return Err(Error::Range("V(phi; r) needs r >= 1".into()));
    }
    let profile = Profile::new(f)?;
    if profile.sampled_max() == 0.0 {
        return Ok(zero_outcome(4.0));
    }
    let r = r as f64;
    sup_over_p(phi, 4.0, SCAN_P_MAX, |p| {
        let beta = p / (p * r + 1.0);
        Ok(profile.integrate_log_of(|v| beta * v.abs().ln(), cfg)? / beta)
    })
}

pub fn v_quasinorm<E: Evaluable + Sync + ?Sized>(f: &E, phi: &PhiSpec, r: u32, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(v_quasinorm_scan(f, phi, r, cfg)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Domain, OnDomain};

    fn phi2() -> PhiSpec {
        PhiSpec::power(2.0).unwrap()
    }

    #[test]
    fn g_norm_examples() {
        let cfg = QuadratureConfig::default();
        let one = OnDomain::new(Domain::Interval, |_| 1.0);
        assert!((g_norm(&one, &phi2(), &cfg).unwrap() - 1.0 / 0.428_881_942_5).abs() < 1e-8);
        let zero = OnDomain::new(Domain::Interval, |_| 0.0);
        assert_eq!(g_norm(&zero, &phi2(), &cfg).unwrap(), 0.0);
        let f = OnDomain::new(Domain::Interval, |x: f64| 4.0 * x * x * x - 3.0 * x);
        let g = OnDomain::new(Domain::Interval, |x: f64| -3.0 * (4.0 * x * x * x - 3.0 * x));
        let a = g_norm(&f, &phi2(), &cfg).unwrap();
        let b = g_norm(&g, &phi2(), &cfg).unwrap();
        assert!((b / a - 3.0).abs() < 3e-8);
    }

    #[test]
    fn v_norm_of_constant() {
        // 1/ψ(4) = 1/(sqrt 2 e^{-1/2})
        let cfg = QuadratureConfig::default();
        let one = OnDomain::new(Domain::Interval, |_| 1.0);
        let v = v_quasinorm(&one, &phi2(), 1, &cfg).unwrap();
        assert!((v - 0.5f64.sqrt() * 0.5f64.exp()).abs() < 1e-9);
        let zero = OnDomain::new(Domain::Interval, |_| 0.0);
        assert_eq!(v_quasinorm(&zero, &phi2(), 1, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn v_norm_homogeneous() {
        let cfg = QuadratureConfig::default();
        let f = OnDomain::new(Domain::Interval, |x: f64| 1.0 + x - 2.0 * x * x);
        let g = OnDomain::new(Domain::Interval, |x: f64| 100.0 * (1.0 + x - 2.0 * x * x));
        let a = v_quasinorm(&f, &phi2(), 2, &cfg).unwrap();
        let b = v_quasinorm(&g, &phi2(), 2, &cfg).unwrap();
        assert!((b / a / 100.0 - 1.0).abs() < 1e-8);
    }
}
