use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{sup_norm, Evaluable, Profile, QuadratureConfig};
use crate::transform::PhiSpec;

const SPLICE_LO: f64 = 1e-3;
const SPLICE_HI: f64 = 1e3;
const SPLICE_SCAN: usize = 4096;

/// Spliced N-function: `C₂|u|` for `|u| <= C₁`, `exp φ(|u|)` beyond.
#[derive(Debug, Clone)]
pub struct OrliczN {
    phi: PhiSpec,
    c1: f64,
    c2: f64,
}

/// Splice constants, for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Splice {
    pub c1: f64,
    pub c2: f64,
}

/// Builds `N(φ; ·)` with `C₁` the smallest root in `[1e-3, 1e3]` of
/// `u φ'(u) = 1` (equivalently `h'(ln u) = 1`) and `C₂ = exp φ(C₁) / C₁`,
/// so that the chord from the origin is tangent to `exp φ` at `C₁`.
pub fn construct_n(phi: &PhiSpec) -> Result<OrliczN> {
    let g = |u: f64| -> Result<f64> { Ok(phi.h_prime(u.ln())? - 1.0) };
    let fail = || Error::SpliceConstruction { phi: phi.name() };
    let ratio = (SPLICE_HI / SPLICE_LO).ln();
    let at = |i: usize| SPLICE_LO * (ratio * i as f64 / SPLICE_SCAN as f64).exp();
    let first = g(SPLICE_LO)?;
    if first == 0.0 {
        return finish(phi, SPLICE_LO);
    }
    if first > 0.0 {
        return Err(fail());
    }
    for i in 1..=SPLICE_SCAN {
        let u = at(i);
        let v = g(u)?;
        if v >= 0.0 {
            let (mut lo, mut hi) = (at(i - 1).ln(), u.ln());
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if g(mid.exp())? < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return finish(phi, (0.5 * (lo + hi)).exp());
        }
    }
    Err(fail())
}

fn finish(phi: &PhiSpec, c1: f64) -> Result<OrliczN> {
    let c2 = phi.phi(c1)?.exp() / c1;
    Ok(OrliczN {
        phi: phi.clone(),
        c1,
        c2,
    })
}

impl OrliczN {
    /// An N-function with explicitly chosen splice constants.
    pub fn with_splice(phi: &PhiSpec, c1: f64, c2: f64) -> Result<Self> {
        if !(c1 > 0.0 && c2 > 0.0) {
            return Err(Error::Range("splice constants must be positive".into()));
        }
        Ok(Self { phi: phi.clone(), c1, c2 })
    }

    pub fn phi(&self) -> &PhiSpec {
        &self.phi
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn splice(&self) -> Splice {
        Splice { c1: self.c1, c2: self.c2 }
    }

    /// `N(u)`; `+∞` past the float range.
    pub fn eval(&self, u: f64) -> Result<f64> {
        Ok(self.log_eval(u)?.exp())
    }

    /// `ln N(u)`.
    pub fn log_eval(&self, u: f64) -> Result<f64> {
        let a = u.abs();
        if a.is_nan() {
            return Err(Error::Evaluation("N evaluated at NaN".into()));
        }
        if a <= self.c1 {
            Ok(self.c2.ln() + a.ln())
        } else {
            self.phi.h(a.ln())
        }
    }

    /// Relative mismatch `|C₁C₂ - exp φ(C₁)| / exp φ(C₁)` at the splice.
    pub fn continuity_defect(&self) -> Result<f64> {
        let right = self.phi.phi(self.c1)?.exp();
        Ok((self.c1 * self.c2 - right).abs() / right)
    }

    /// Right derivative of `exp φ` at `C₁`, which must not be below `C₂`.
    pub fn right_slope_at_splice(&self) -> Result<f64> {
        let c1 = self.c1;
        Ok(self.phi.h_prime(c1.ln())? / c1 * self.phi.phi(c1)?.exp())
    }
}

/// `ln I(N(|f| / l))`.
fn log_modular<E: Evaluable + ?Sized>(profile: &Profile<'_, E>, n: &OrliczN, l: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let mut err = None;
    let v = profile.integrate_log_of(
        |v| match n.log_eval(v / l) {
            Ok(x) => x,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        cfg,
    );
    match err {
        Some(e) => Err(e),
        None => v,
    }
}

/// `I(N(|f| / l))`.
pub fn orlicz_modular<E: Evaluable + ?Sized>(f: &E, n: &OrliczN, l: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let profile = Profile::new(f)?;
    Ok(log_modular(&profile, n, l, cfg)?.exp())
}

/// Luxemburg norm `inf{l > 0 : I(N(|f| / l)) <= 1}`.
///
/// Bisection in `ln l` between `C₂‖f‖₁` (where the modular is at least one
/// because `N(u) >= C₂u`) and `C₂ sup|f|` (where `|f|/l` stays in the linear
/// branch and the modular is below one).
pub fn luxemburg_norm<E: Evaluable + ?Sized>(f: &E, n: &OrliczN, cfg: &QuadratureConfig) -> Result<f64> {
    let sup = sup_norm(f)?;
    if sup == 0.0 {
        return Ok(0.0);
    }
    let profile = Profile::new(f)?;
    let l1 = profile.lp(1.0, cfg)?;
    let mut lo = (n.c2 * l1).ln();
    let mut hi = (n.c2 * sup * (1.0 + 1e-6)).ln();
    let mut tries = 0;
    while log_modular(&profile, n, hi.exp(), cfg)? > 0.0 {
        hi += std::f64::consts::LN_2;
        tries += 1;
        if tries > 60 {
            return Err(Error::Internal("Luxemburg upper bracket not found".into()));
        }
    }
    tries = 0;
    while log_modular(&profile, n, lo.exp(), cfg)? < 0.0 {
        lo -= std::f64::consts::LN_2;
        tries += 1;
        if tries > 60 {
            return Err(Error::Internal("Luxemburg lower bracket not found".into()));
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if log_modular(&profile, n, mid.exp(), cfg)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Domain, OnDomain};

    #[test]
    fn splice_examples() {
        let n = construct_n(&PhiSpec::power(2.0).unwrap()).unwrap();
        assert!((n.c1() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((n.c2() - 2.331_643_981_597_1).abs() < 1e-10);
        let n = construct_n(&PhiSpec::power(1.0).unwrap()).unwrap();
        assert!((n.c1() - 1.0).abs() < 1e-12);
        assert!((n.c2() - std::f64::consts::E).abs() < 1e-11);
    }

    #[test]
    fn splice_invariants() {
        for phi in [
            PhiSpec::power(2.0).unwrap(),
            PhiSpec::power_log(1.0, 1.0).unwrap(),
            PhiSpec::power_log(3.0, -0.5).unwrap(),
            PhiSpec::log_power(1.0).unwrap(),
        ] {
            let n = construct_n(&phi).unwrap();
            assert!(n.continuity_defect().unwrap() < 1e-12, "{}", phi.name());
            assert!(n.c2() <= n.right_slope_at_splice().unwrap() * (1.0 + 1e-9));
            assert_eq!(n.eval(0.0).unwrap(), 0.0);
            assert_eq!(n.eval(-1.3).unwrap(), n.eval(1.3).unwrap());
            let mut last = 0.0;
            for i in 1..200 {
                let v = n.eval(0.05 * i as f64).unwrap();
                assert!(v >= last);
                last = v;
            }
        }
    }

    #[test]
    fn no_splice_in_range() {
        // u φ'(u) = 1e-4 u reaches 1 only at u = 1e4
        let phi = PhiSpec::custom("slow", |z: f64| 1e-4 * z);
        assert!(matches!(construct_n(&phi), Err(Error::SpliceConstruction { .. })));
    }

    #[test]
    fn n_eval_examples() {
        let n = construct_n(&PhiSpec::power(2.0).unwrap()).unwrap();
        assert!((n.eval(n.c1()).unwrap() - 0.5f64.exp()).abs() < 1e-12);
        assert!((n.eval(2.0).unwrap() - 4f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn luxemburg_examples() {
        let cfg = QuadratureConfig::default();
        let n = construct_n(&PhiSpec::power(2.0).unwrap()).unwrap();
        let zero = OnDomain::new(Domain::Interval, |_| 0.0);
        assert_eq!(luxemburg_norm(&zero, &n, &cfg).unwrap(), 0.0);
        let one = OnDomain::new(Domain::Interval, |_| 1.0);
        assert!((luxemburg_norm(&one, &n, &cfg).unwrap() - n.c2()).abs() < 1e-10);
        let f = OnDomain::new(Domain::Interval, |x: f64| 3.0 * x * x - 1.0);
        let l = luxemburg_norm(&f, &n, &cfg).unwrap();
        assert!((orlicz_modular(&f, &n, l, &cfg).unwrap() - 1.0).abs() < 1e-6);
        let g = OnDomain::new(Domain::Interval, |x: f64| 2.0 * (3.0 * x * x - 1.0));
        assert!((luxemburg_norm(&g, &n, &cfg).unwrap() / l - 2.0).abs() < 1e-8);
    }
}
