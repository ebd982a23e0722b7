use serde::Serialize;

use super::polynomial::PolynomialRep;
use crate::error::{Error, Result};

/// Below this `|denominator|` evaluation refuses to return a value.
pub const POLE_EVAL_LIMIT: f64 = 1e-14;

/// `num / den` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalRep {
    num: PolynomialRep,
    den: PolynomialRep,
}

impl RationalRep {
    pub fn new(num: PolynomialRep, den: PolynomialRep) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Degenerate("rational function with zero denominator".into()));
        }
        Ok(Self { num, den })
    }

    pub fn num(&self) -> &PolynomialRep {
        &self.num
    }

    pub fn den(&self) -> &PolynomialRep {
        &self.den
    }

    /// `max(deg num, deg den)`; the zero numerator counts as degree 0.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn try_eval(&self, x: f64) -> Result<f64> {
        let d = self.den.eval(x);
        if d.abs() < POLE_EVAL_LIMIT {
            return Err(Error::PoleProximity { x, value: d });
        }
        Ok(self.num.eval(x) / d)
    }

    /// `r`-th derivative as `N_r / D^{r+1}` with
    /// `N_{k+1} = N_k' D - (k+1) N_k D'`.
    pub fn derivative_n(&self, r: usize) -> Result<Self> {
        if r == 0 {
            return Ok(self.clone());
        }
        let d1 = self.den.derivative()?;
        let mut n = self.num.clone();
        for k in 0..r {
            let a = n.derivative()?.mul(&self.den)?;
            let b = n.mul(&d1)?.scale(-((k + 1) as f64));
            n = a.add(&b);
            super::polynomial::check_overflow(n.coeffs())?;
        }
        let den = self.den.pow(r + 1)?;
        Ok(Self { num: n, den })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }
}

/// Outcome of [`check_no_poles`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleCheck {
    pub ok: bool,
    /// Approximate minimizer of `|den|` when `ok` is false.
    pub witness: Option<f64>,
    /// Smallest `|den|` seen.
    pub min_abs: f64,
    /// Threshold the minimum had to exceed.
    pub threshold: f64,
}

const POLE_GRID: usize = 1 << 10;
const POLE_MAX_DEPTH: u32 = 40;

/// Certifies `|den| > threshold` on `[-1, 1]` by interval subdivision with
/// the Lipschitz bound `|den'| <= Σ k|c_k|`.
///
/// The threshold is `max(1e-9 (1 + max|c_k|), 1e-6 max|den|)`. The relative
/// term rejects denominators whose minimum is negligible against their size,
/// such as `x² + 1e-8`.
pub fn check_no_poles(rep: &RationalRep) -> PoleCheck {
    let den = rep.den();
    let c = den.coeffs();
    let lip: f64 = c.iter().enumerate().map(|(k, a)| k as f64 * a.abs()).sum();
    let h = 2.0 / POLE_GRID as f64;
    let grid: Vec<f64> = (0..=POLE_GRID).map(|i| den.eval(-1.0 + h * i as f64).abs()).collect();
    let sup = grid.iter().copied().fold(0.0, f64::max);
    let threshold = (1e-9 * (1.0 + den.max_abs_coeff())).max(1e-6 * sup);

    let mut min_abs = f64::INFINITY;
    let mut min_at = 0.0;
    let mut failed = false;
    let mut stack: Vec<(f64, f64, u32)> = (0..POLE_GRID)
        .map(|i| (-1.0 + h * i as f64, -1.0 + h * (i + 1) as f64, 0))
        .collect();
    while let Some((l, r, depth)) = stack.pop() {
        let m = 0.5 * (l + r);
        let v = den.eval(m).abs();
        if v < min_abs {
            min_abs = v;
            min_at = m;
        }
        if v <= threshold {
            failed = true;
            break;
        }
        if v - lip * 0.5 * (r - l) > threshold {
            continue;
        }
        if depth >= POLE_MAX_DEPTH {
            failed = true;
            break;
        }
        stack.push((l, m, depth + 1));
        stack.push((m, r, depth + 1));
    }
    for (i, v) in grid.iter().enumerate() {
        if *v < min_abs {
            min_abs = *v;
            min_at = -1.0 + h * i as f64;
        }
    }
    if !failed {
        return PoleCheck {
            ok: true,
            witness: None,
            min_abs,
            threshold,
        };
    }
    let lo = (min_at - h).max(-1.0);
    let hi = (min_at + h).min(1.0);
    let (x, neg) = crate::golden::golden_max::<_, ()>(|x| Ok(-den.eval(x).abs()), lo, hi, 1e-14, 200)
        .unwrap_or((min_at, -min_abs));
    let (witness, min_abs) = if -neg <= min_abs { (x, -neg) } else { (min_at, min_abs) };
    PoleCheck {
        ok: false,
        witness: Some(witness),
        min_abs,
        threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: &[f64], d: &[f64]) -> RationalRep {
        RationalRep::new(PolynomialRep::new(n.to_vec()), PolynomialRep::new(d.to_vec())).unwrap()
    }

    #[test]
    fn quotient_rule_example() {
        let q = rat(&[1.0], &[-2.0, 1.0]).derivative_n(1).unwrap();
        for x in [-1.0, 0.0, 0.7] {
            let want = -1.0 / ((x - 2.0) * (x - 2.0));
            assert!((q.try_eval(x).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn higher_derivatives_match_closed_form() {
        // d^r/dx^r 1/(x-2) = (-1)^r r! / (x-2)^{r+1}
        let q = rat(&[1.0], &[-2.0, 1.0]);
        for r in 1..5 {
            let d = q.derivative_n(r).unwrap();
            let fact: f64 = (1..=r).map(|k| k as f64).product();
            for x in [-0.5, 0.3] {
                let want = (-1f64).powi(r as i32) * fact / (x - 2.0f64).powi(r as i32 + 1);
                let got = d.try_eval(x).unwrap();
                assert!((got / want - 1.0).abs() < 1e-12, "r = {r}");
            }
        }
    }

    #[test]
    fn degree_is_max_of_parts() {
        assert_eq!(rat(&[1.0, 1.0], &[1.0, 0.0, 1.0]).degree(), 2);
        assert_eq!(rat(&[0.0, 0.0, 0.0, 5.0], &[2.0]).degree(), 3);
    }

    #[test]
    fn pole_proximity_on_eval() {
        let q = rat(&[1.0], &[-0.5, 1.0]);
        assert!(matches!(q.try_eval(0.5), Err(Error::PoleProximity { .. })));
    }

    #[test]
    fn pole_examples() {
        assert!(check_no_poles(&rat(&[1.0], &[1.0, 0.0, 1.0])).ok);
        let c = check_no_poles(&rat(&[1.0], &[-0.5, 1.0]));
        assert!(!c.ok);
        assert!((c.witness.unwrap() - 0.5).abs() < 1e-8);
        let c = check_no_poles(&rat(&[1.0], &[1e-8, 0.0, 1.0]));
        assert!(!c.ok);
        assert!(c.witness.unwrap().abs() < 1e-6);
    }

    #[test]
    fn root_just_outside_domain_passes() {
        assert!(check_no_poles(&rat(&[1.0], &[-1.1, 1.0])).ok);
    }
}
