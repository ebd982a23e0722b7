use rayon::prelude::*;
use serde::Serialize;

use super::constants::ln_d_constant;
use super::fit::{fit_line, LineFit};
use super::markov::markov_ratio;
use crate::error::{Error, Result};
use crate::function::{check_no_poles, FunctionRep, GapRep, PolynomialRep, RationalRep, TrigPolynomialRep};
use crate::measure::{lp_quasinorm, QuadratureConfig};
use crate::norms::{luxemburg_norm, v_quasinorm, EquivalenceConstants, NormSpec, OrliczN};

/// Slack allowed in the trigonometric Bernstein check, relative to `‖Q′‖`.
pub const BERNSTEIN_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BernsteinCheck {
    pub degree: usize,
    pub norm_q: f64,
    pub norm_dq: f64,
    /// `deg Q · ‖Q‖ − ‖Q′‖`.
    pub margin: f64,
    pub holds: bool,
}

/// `deg Q · ‖Q‖ − ‖Q′‖` for a trigonometric polynomial.
pub fn bernstein_trig_check(q: &TrigPolynomialRep, norm: &NormSpec, cfg: &QuadratureConfig) -> Result<BernsteinCheck> {
    let degree = q.degree().unwrap_or(0);
    let rep = FunctionRep::Trig(q.clone());
    let norm_q = norm.evaluate(&rep, cfg)?.value;
    if norm_q == 0.0 {
        return Err(Error::Degenerate("Bernstein check of the zero polynomial".into()));
    }
    let norm_dq = norm.evaluate(&FunctionRep::Trig(q.derivative()?), cfg)?.value;
    let margin = degree as f64 * norm_q - norm_dq;
    Ok(BernsteinCheck {
        degree,
        norm_q,
        norm_dq,
        margin,
        holds: margin >= -BERNSTEIN_SLACK * norm_dq,
    })
}

/// Both sides of a rational-function derivative inequality. Sides are kept
/// as logarithms because the Orlicz right-hand side overflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RationalCheck {
    pub degree: usize,
    pub r: u32,
    pub lhs: f64,
    pub log_lhs: f64,
    pub log_rhs: f64,
    /// `rhs − lhs`; `+∞` when the right side overflows.
    pub margin: f64,
    pub holds: bool,
}

impl RationalCheck {
    fn new(degree: usize, r: u32, lhs: f64, log_rhs: f64) -> Self {
        let log_lhs = lhs.ln();
        Self {
            degree,
            r,
            lhs,
            log_lhs,
            log_rhs,
            margin: log_rhs.exp() - lhs,
            holds: log_lhs <= log_rhs,
        }
    }
}

fn certify(q: &RationalRep) -> Result<()> {
    let check = check_no_poles(q);
    match check.witness {
        Some(witness) if !check.ok => Err(Error::PoleOnDomain { witness }),
        _ if !check.ok => Err(Error::PoleOnDomain { witness: f64::NAN }),
        _ => Ok(()),
    }
}

/// `‖Q^{(r)}‖_γ ≤ D(r) (deg Q)^r ‖Q‖_p` with `γ = p / (pr + 1)`, `p >= 4`.
pub fn lp_rational_check(q: &RationalRep, p: f64, r: u32, cfg: &QuadratureConfig) -> Result<RationalCheck> {
    if !(p >= 4.0) {
        return Err(Error::Range(format!("the L_p rational check needs p >= 4, got {p}")));
    }
    if r < 1 {
        return Err(Error::Range("derivative order must be >= 1".into()));
    }
    certify(q)?;
    let rep = FunctionRep::Rational(q.clone());
    let gamma = p / (p * r as f64 + 1.0);
    let lhs = lp_quasinorm(&rep.derivative_fn(r as usize)?, gamma, cfg)?;
    let degree = q.degree();
    let log_rhs = ln_d_constant(r)? + r as f64 * (degree as f64).ln() + lp_quasinorm(&rep, p, cfg)?.ln();
    Ok(RationalCheck::new(degree, r, lhs, log_rhs))
}

/// `‖Q^{(r)}‖V(φ; r) ≤ C₄ D(r) (deg Q)^r ‖Q‖B(φ)`.
pub fn rational_orlicz_check(
    q: &RationalRep,
    n: &OrliczN,
    consts: &EquivalenceConstants,
    r: u32,
    cfg: &QuadratureConfig,
) -> Result<RationalCheck> {
    if r < 1 {
        return Err(Error::Range("derivative order must be >= 1".into()));
    }
    certify(q)?;
    let rep = FunctionRep::Rational(q.clone());
    let lhs = v_quasinorm(&rep.derivative_fn(r as usize)?, n.phi(), r, cfg)?;
    let degree = q.degree();
    let log_rhs =
        consts.log_c4 + ln_d_constant(r)? + r as f64 * (degree as f64).ln() + luxemburg_norm(&rep, n, cfg)?.ln();
    Ok(RationalCheck::new(degree, r, lhs, log_rhs))
}

/// `1 / (x² + a)`.
pub fn inverse_quadratic(a: f64) -> Result<RationalRep> {
    RationalRep::new(PolynomialRep::constant(1.0), PolynomialRep::new(vec![a, 0.0, 1.0]))
}

/// `T_k(x) / (x² + a)`: a fixed pole-free denominator with a Chebyshev
/// numerator, degree `max(k, 2)`.
pub fn degree_scaled_rational(a: f64, k: usize) -> Result<RationalRep> {
    RationalRep::new(PolynomialRep::chebyshev(k), PolynomialRep::new(vec![a, 0.0, 1.0]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapEntry {
    pub n: usize,
    pub degree: f64,
    pub ratio: f64,
    pub scaled_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub p: f64,
    pub entries: Vec<GapEntry>,
    pub max_scaled_ratio: f64,
    /// Fit of `ratio / deg²` on `deg`; absent with fewer than three degrees.
    pub trend: Option<LineFit>,
    /// No growth trend: `|slope| <= 0.1`.
    pub bounded: bool,
}

/// Largest trend slope of `ratio / deg²` against degree still counted as
/// bounded.
pub const GAP_TREND_LIMIT: f64 = 0.1;

/// `L_p` Markov ratios of the family `Q_n = base^n` (factors repeated `n`
/// times), scaled by `deg²`. An empty `base` has ratio 0 throughout.
pub fn gap_check(base: &GapRep, p: f64, ns: &[usize], cfg: &QuadratureConfig) -> Result<GapReport> {
    if !(p > 0.0) {
        return Err(Error::Range(format!("L_p exponent must be > 0, got {p}")));
    }
    if let Some(f) = base.nonsmooth_factor() {
        return Err(Error::Unsupported(format!(
            "GAP factor |x - {}| has exponent 1 at a real root inside [-1, 1]; its derivative jumps there",
            f.re
        )));
    }
    let norm = NormSpec::Lp(p);
    let entries: Vec<Result<GapEntry>> = ns
        .par_iter()
        .map(|&n| {
            let q = base.repeat(n);
            let degree = q.degree();
            let ratio = if degree == 0.0 {
                0.0
            } else {
                markov_ratio(&FunctionRep::Gap(q), &norm, cfg)?
            };
            let scaled_ratio = if degree == 0.0 { 0.0 } else { ratio / (degree * degree) };
            Ok(GapEntry {
                n,
                degree,
                ratio,
                scaled_ratio,
            })
        })
        .collect();
    let entries: Vec<GapEntry> = entries.into_iter().collect::<Result<_>>()?;
    let max_scaled_ratio = entries.iter().map(|e| e.scaled_ratio).fold(0.0, f64::max);
    let pts: Vec<&GapEntry> = entries.iter().filter(|e| e.degree > 0.0).collect();
    let trend = if pts.len() >= 3 {
        let xs: Vec<f64> = pts.iter().map(|e| e.degree).collect();
        let ys: Vec<f64> = pts.iter().map(|e| e.scaled_ratio).collect();
        fit_line(&xs, &ys).ok()
    } else {
        None
    };
    let bounded = max_scaled_ratio.is_finite() && trend.map_or(true, |t| t.slope.abs() <= GAP_TREND_LIMIT);
    Ok(GapReport {
        p,
        entries,
        max_scaled_ratio,
        trend,
        bounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{random_family, FunctionKind, GapFactor};
    use crate::norms::{construct_n, equivalence_constants};
    use crate::transform::PhiSpec;

    #[test]
    fn bernstein_equality_for_sine() {
        let cfg = QuadratureConfig::default();
        let c = bernstein_trig_check(&TrigPolynomialRep::sine(5), &NormSpec::Lp(2.0), &cfg).unwrap();
        assert!(c.margin.abs() < 1e-10 * c.norm_dq);
        assert!(c.holds);
        let k = TrigPolynomialRep::new(vec![2.0], vec![]).unwrap();
        let c = bernstein_trig_check(&k, &NormSpec::Lp(2.0), &cfg).unwrap();
        assert_eq!(c.margin, 0.0);
    }

    #[test]
    fn bernstein_random_trig_orlicz() {
        let cfg = QuadratureConfig::default();
        let n = construct_n(&PhiSpec::power(2.0).unwrap()).unwrap();
        let norm = NormSpec::Luxemburg(n);
        for deg in [1, 4, 9] {
            let FunctionRep::Trig(t) = random_family(FunctionKind::Trig, deg, 5) else { unreachable!() };
            let c = bernstein_trig_check(&t, &norm, &cfg).unwrap();
            assert!(c.holds, "degree {deg}: {c:?}");
        }
        for p in [0.5, 1.0, 3.0] {
            let FunctionRep::Trig(t) = random_family(FunctionKind::Trig, 6, 9) else { unreachable!() };
            assert!(bernstein_trig_check(&t, &NormSpec::Lp(p), &cfg).unwrap().holds);
        }
    }

    #[test]
    fn lp_rational_examples() {
        let cfg = QuadratureConfig::default();
        let c = lp_rational_check(&inverse_quadratic(1.0).unwrap(), 4.0, 1, &cfg).unwrap();
        assert!(c.holds && c.margin > 0.0);
        let poly = RationalRep::new(PolynomialRep::chebyshev(6), PolynomialRep::constant(1.0)).unwrap();
        let c = lp_rational_check(&poly, 6.0, 2, &cfg).unwrap();
        assert!(c.margin > 0.0);
        assert!(lp_rational_check(&poly, 3.0, 1, &cfg).is_err());
        let poled = RationalRep::new(PolynomialRep::constant(1.0), PolynomialRep::new(vec![-0.25, 0.0, 1.0])).unwrap();
        match lp_rational_check(&poled, 4.0, 1, &cfg) {
            Err(Error::PoleOnDomain { witness }) => assert!((witness.abs() - 0.5).abs() < 1e-3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orlicz_rational_example() {
        let cfg = QuadratureConfig::default();
        let n = construct_n(&PhiSpec::power(2.0).unwrap()).unwrap();
        let consts = equivalence_constants(&n).unwrap();
        let c = rational_orlicz_check(&inverse_quadratic(2.0).unwrap(), &n, &consts, 1, &cfg).unwrap();
        assert!(c.holds && c.margin > 0.0);
        // the right side grows like deg^r while the left side grows more slowly
        let margins: Vec<f64> = [2, 6, 12]
            .iter()
            .map(|&k| {
                let q = degree_scaled_rational(2.0, k).unwrap();
                let c = rational_orlicz_check(&q, &n, &consts, 1, &cfg).unwrap();
                assert!(c.holds);
                c.log_rhs - c.log_lhs
            })
            .collect();
        assert!(margins.iter().all(|m| *m > 0.0));
    }

    #[test]
    fn gap_examples() {
        let cfg = QuadratureConfig::default();
        let base = GapRep::new(vec![GapFactor { re: 0.0, im: 2.0, exponent: 1.0 }]).unwrap();
        let ns: Vec<usize> = (1..=20).collect();
        let rep = gap_check(&base, 2.0, &ns, &cfg).unwrap();
        assert!(rep.entries[0].ratio.is_finite() && rep.entries[0].ratio > 0.0);
        assert!(rep.bounded, "{:?}", rep.trend);
        let empty = GapRep::new(vec![]).unwrap();
        let rep = gap_check(&empty, 2.0, &[1, 2], &cfg).unwrap();
        assert!(rep.entries.iter().all(|e| e.ratio == 0.0));
        let kink = GapRep::new(vec![GapFactor { re: 0.3, im: 0.0, exponent: 1.0 }]).unwrap();
        assert!(matches!(gap_check(&kink, 2.0, &[1], &cfg), Err(Error::Unsupported(_))));
    }
}
