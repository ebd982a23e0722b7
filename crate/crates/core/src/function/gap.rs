use crate::error::{Error, Result};

/// One factor `|x - z|^r` with `z = re + i·im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapFactor {
    pub re: f64,
    pub im: f64,
    pub exponent: f64,
}

/// Generalized algebraic polynomial `Π_j |x - z_j|^{r_j}` on `[-1, 1]`,
/// with real exponents `r_j >= 1` and degree `Σ r_j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GapRep {
    factors: Vec<GapFactor>,
}

impl GapRep {
    pub fn new(factors: Vec<GapFactor>) -> Result<Self> {
        for f in &factors {
            if !(f.exponent >= 1.0) || !f.re.is_finite() || !f.im.is_finite() {
                return Err(Error::Range(format!(
                    "GAP factor needs finite root and exponent >= 1, got ({}, {}, {})",
                    f.re, f.im, f.exponent
                )));
            }
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[GapFactor] {
        &self.factors
    }

    pub fn degree(&self) -> f64 {
        self.factors.iter().map(|f| f.exponent).sum()
    }

    /// Factor list of `self` followed by `other`; degrees add.
    pub fn concat(&self, other: &GapRep) -> GapRep {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        GapRep { factors }
    }

    /// `k` copies of the factor list.
    pub fn repeat(&self, k: usize) -> GapRep {
        GapRep {
            factors: (0..k).flat_map(|_| self.factors.iter().copied()).collect(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.factors
            .iter()
            .map(|f| (x - f.re).hypot(f.im).powf(f.exponent))
            .product()
    }

    /// `Q'(x) = Q(x) Σ r_j (x - a_j) / |x - z_j|²` where `Q(x) ≠ 0`; at a
    /// zero of `Q` (a real root with exponent above one) the derivative is 0.
    pub fn derivative_at(&self, x: f64) -> f64 {
        let q = self.eval(x);
        if q == 0.0 {
            return 0.0;
        }
        let s: f64 = self
            .factors
            .iter()
            .map(|f| {
                let d = x - f.re;
                f.exponent * d / (d * d + f.im * f.im)
            })
            .sum();
        q * s
    }

    /// First factor whose derivative jumps on the domain: a real root inside
    /// `[-1, 1]` with exponent exactly one.
    pub fn nonsmooth_factor(&self) -> Option<GapFactor> {
        self.factors
            .iter()
            .copied()
            .find(|f| f.im == 0.0 && (-1.0..=1.0).contains(&f.re) && f.exponent == 1.0)
    }
}
