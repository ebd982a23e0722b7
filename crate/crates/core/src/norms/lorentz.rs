use serde::{Deserialize, Serialize};

use super::scan::{sup_over_p, ScanOutcome};
use crate::error::{Error, Result};
use crate::golden::golden_max;
use crate::measure::{integrate_log, sup_norm, Evaluable, LevelSets, QuadratureConfig};
use crate::transform::PhiSpec;

/// Second Lorentz index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LorentzIndex {
    Finite(f64),
    Infinite,
    /// `b = p`, which reduces `‖f‖_{p,b}` to `‖f‖_p`.
    EqualsP,
}

const SUP_GRID: usize = 2048;

/// Distribution function of `|f|` prepared for repeated Lorentz integrals.
pub struct LorentzProfile<'a, E: ?Sized> {
    levels: LevelSets<'a, E>,
    sup: f64,
    /// Critical levels scaled to `(0, 1)` by `sup`.
    breaks: Vec<f64>,
}

impl<'a, E: Evaluable + ?Sized> LorentzProfile<'a, E> {
    pub fn new(f: &'a E) -> Result<Self> {
        let levels = LevelSets::new(f)?;
        let sup = sup_norm(f)?.max(levels.sampled_max());
        let breaks = if sup > 0.0 {
            levels
                .critical_levels()
                .into_iter()
                .map(|c| c / sup)
                .filter(|t| *t > 0.0 && *t < 1.0)
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self { levels, sup, breaks })
    }

    pub fn sup(&self) -> f64 {
        self.sup
    }

    /// `‖f‖_{p,b}`.
    pub fn norm(&self, p: f64, b: LorentzIndex, cfg: &QuadratureConfig) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::Range(format!("Lorentz index p must be >= 1, got {p}")));
        }
        if self.sup == 0.0 {
            return Ok(0.0);
        }
        match b {
            LorentzIndex::Finite(b) if b >= 1.0 => self.finite(p, b, cfg),
            LorentzIndex::Finite(b) => Err(Error::Range(format!("Lorentz index b must be >= 1, got {b}"))),
            LorentzIndex::EqualsP => self.finite(p, p, cfg),
            LorentzIndex::Infinite => self.infinite(p),
        }
    }

    /// `S [∫₀¹ T(St)^{p/b} b t^{b-1} dt]^{1/b}` with `S = sup|f|`.
    fn finite(&self, p: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
        cfg.validate()?;
        let cfg = cfg.with_grading(cfg.grading.max(2));
        let mut pts = vec![0.0];
        pts.extend_from_slice(&self.breaks);
        pts.push(1.0);
        let s = self.sup;
        let log_i = integrate_log(
            &pts,
            |t| {
                let m = self.levels.measure_above(s * t);
                (p / b) * m.ln() + b.ln() + (b - 1.0) * t.ln()
            },
            &cfg,
        )?;
        Ok(s * (log_i / b).exp())
    }

    /// `sup_x x T(x)^{1/p}`.
    fn infinite(&self, p: f64) -> Result<f64> {
        let s = self.sup;
        let g = |x: f64| -> std::result::Result<f64, Error> { Ok(x * self.levels.measure_above(x).powf(1.0 / p)) };
        let mut best_x = 0.0;
        let mut best = 0.0;
        let mut candidates: Vec<f64> = (1..=SUP_GRID).map(|i| s * i as f64 / SUP_GRID as f64).collect();
        // T jumps down at plateau levels; approach them from the left
        candidates.extend(self.breaks.iter().map(|t| s * t * (1.0 - 1e-12)));
        for x in candidates {
            let v = g(x)?;
            if v > best {
                best = v;
                best_x = x;
            }
        }
        let h = s / SUP_GRID as f64;
        let (_, v) = golden_max(g, (best_x - h).max(0.0), (best_x + h).min(s), 1e-14 * s, 200)?;
        Ok(best.max(v))
    }
}

/// `‖f‖_{p,b}`; `b = ∞` gives `sup_x x T(|f|, x)^{1/p}`.
pub fn lorentz_norm<E: Evaluable + ?Sized>(f: &E, p: f64, b: LorentzIndex, cfg: &QuadratureConfig) -> Result<f64> {
    LorentzProfile::new(f)?.norm(p, b, cfg)
}

/// `‖f‖*_b G(φ) = sup_{p >= 1} ‖f‖_{p,b} / ψ(p)` with its maximizer.
pub fn weighted_lorentz_g_scan<E: Evaluable + Sync + ?Sized>(
    f: &E,
    phi: &PhiSpec,
    b: LorentzIndex,
    cfg: &QuadratureConfig,
) -> Result<ScanOutcome> {
    let prof = LorentzProfile::new(f)?;
    if prof.sup() == 0.0 {
        return Ok(ScanOutcome {
            value: 0.0,
            argmax_p: 1.0,
            p_max: 1.0,
            extensions: 0,
        });
    }
    sup_over_p(phi, 1.0, super::gnorm::SCAN_P_MAX, |p| Ok(prof.norm(p, b, cfg)?.ln()))
}

pub fn weighted_lorentz_g<E: Evaluable + Sync + ?Sized>(
    f: &E,
    phi: &PhiSpec,
    b: LorentzIndex,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    Ok(weighted_lorentz_g_scan(f, phi, b, cfg)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Domain, OnDomain};
    use crate::norms::g_norm;

    #[test]
    fn lorentz_examples() {
        let cfg = QuadratureConfig::default();
        let x = OnDomain::new(Domain::Interval, |x: f64| x);
        let v = lorentz_norm(&x, 2.0, LorentzIndex::Finite(2.0), &cfg).unwrap();
        assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-9, "{v}");
        let one = OnDomain::new(Domain::Interval, |_| 1.0);
        for p in [1.0, 2.0, 7.0] {
            let v = lorentz_norm(&one, p, LorentzIndex::Infinite, &cfg).unwrap();
            assert!((v - 1.0).abs() < 1e-10);
        }
        let zero = OnDomain::new(Domain::Interval, |_| 0.0);
        assert_eq!(lorentz_norm(&zero, 2.0, LorentzIndex::Finite(1.0), &cfg).unwrap(), 0.0);
    }

    #[test]
    fn weak_type_of_identity() {
        // sup_x x (1 - x)^{1/p} at x = p/(p+1)
        let cfg = QuadratureConfig::default();
        let f = OnDomain::new(Domain::Interval, |x: f64| x);
        let p = 3.0f64;
        let want = p / (p + 1.0) * (1.0 / (p + 1.0)).powf(1.0 / p);
        let v = lorentz_norm(&f, p, LorentzIndex::Infinite, &cfg).unwrap();
        assert!((v - want).abs() < 1e-10);
    }

    #[test]
    fn equal_indices_give_lp() {
        let cfg = QuadratureConfig::default();
        let f = OnDomain::new(Domain::Interval, |x: f64| 8.0 * x.powi(4) - 8.0 * x * x + 1.0);
        for p in [1.0, 2.0, 5.5] {
            let a = lorentz_norm(&f, p, LorentzIndex::EqualsP, &cfg).unwrap();
            let b = crate::measure::lp_quasinorm(&f, p, &cfg).unwrap();
            assert!((a / b - 1.0).abs() < 1e-7, "p = {p}: {a} vs {b}");
        }
    }

    #[test]
    fn coupled_weighted_lorentz_recovers_g() {
        let cfg = QuadratureConfig::default();
        let phi = PhiSpec::power(2.0).unwrap();
        let f = OnDomain::new(Domain::Interval, |x: f64| 2.0 * x * x - 1.0 + 0.3 * x);
        let a = weighted_lorentz_g(&f, &phi, LorentzIndex::EqualsP, &cfg).unwrap();
        let b = g_norm(&f, &phi, &cfg).unwrap();
        assert!((a / b - 1.0).abs() < 1e-6, "{a} vs {b}");
    }
}
