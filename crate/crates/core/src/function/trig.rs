use crate::error::{Error, Result};

use super::polynomial::check_overflow;

/// `a₀ + Σ_{k=1}^{n} (a_k cos kx + b_k sin kx)` on `[0, 2π]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomialRep {
    /// `a₀, a₁, …, a_n`
    cos: Vec<f64>,
    /// `b₁, …, b_n`
    sin: Vec<f64>,
}

impl TrigPolynomialRep {
    pub fn new(cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.is_empty() && !sin.is_empty() {
            return Err(Error::Parse("trigonometric polynomial needs a constant term a0".into()));
        }
        Ok(Self { cos, sin })
    }

    /// `sin(n x)`.
    pub fn sine(n: usize) -> Self {
        let mut sin = vec![0.0; n];
        if n > 0 {
            sin[n - 1] = 1.0;
        }
        Self {
            cos: vec![0.0; n.max(1)],
            sin,
        }
    }

    /// `cos(n x)`.
    pub fn cosine(n: usize) -> Self {
        let mut cos = vec![0.0; n + 1];
        cos[n] = 1.0;
        Self { cos, sin: Vec::new() }
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    /// Largest index with a nonzero coefficient; `None` for the zero function.
    pub fn degree(&self) -> Option<usize> {
        let a = self.cos.iter().rposition(|c| *c != 0.0);
        let b = self.sin.iter().rposition(|c| *c != 0.0).map(|k| k + 1);
        match (a, b) {
            (None, None) => None,
            (x, y) => Some(x.unwrap_or(0).max(y.unwrap_or(0))),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut s = self.cos.first().copied().unwrap_or(0.0);
        let n = self.cos.len().max(self.sin.len() + 1);
        for k in 1..n {
            let (sk, ck) = (k as f64 * x).sin_cos();
            if let Some(a) = self.cos.get(k) {
                s += a * ck;
            }
            if let Some(b) = self.sin.get(k - 1) {
                s += b * sk;
            }
        }
        s
    }

    pub fn derivative(&self) -> Result<Self> {
        let n = self.cos.len().max(self.sin.len() + 1);
        let mut cos = vec![0.0; n];
        let mut sin = vec![0.0; n - 1];
        for k in 1..n {
            let kf = k as f64;
            cos[k] = kf * self.sin.get(k - 1).copied().unwrap_or(0.0);
            sin[k - 1] = -kf * self.cos.get(k).copied().unwrap_or(0.0);
        }
        check_overflow(&cos)?;
        check_overflow(&sin)?;
        Ok(Self { cos, sin })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            cos: self.cos.iter().map(|c| c * s).collect(),
            sin: self.sin.iter().map(|c| c * s).collect(),
        }
    }
}
