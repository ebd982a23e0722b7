use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Above this degree, points with `|x| > CHEB_SWITCH` are evaluated from the
/// Chebyshev expansion by Clenshaw's recurrence.
const CHEB_DEGREE: usize = 60;
const CHEB_SWITCH: f64 = 0.9;
pub(crate) const OVERFLOW_LIMIT: f64 = 1e300;

/// Algebraic polynomial in the monomial basis, `Σ c_k x^k`.
///
/// Polynomials built from Chebyshev data (`T_n`, Jacobi polynomials) keep
/// those coefficients as their definition: rounding a degree-40 Jacobi
/// polynomial to monomial doubles already moves its value at `x = 1` in the
/// fourth digit, while its Chebyshev coefficients are well conditioned.
#[derive(Debug, Clone, Default)]
pub struct PolynomialRep {
    coeffs: Vec<f64>,
    cheb_source: Option<Vec<f64>>,
    cheb: OnceLock<Vec<f64>>,
}

impl PartialEq for PolynomialRep {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl PolynomialRep {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self {
            coeffs,
            cheb_source: None,
            cheb: OnceLock::new(),
        }
    }

    /// `Σ c_k T_k`; monomial coefficients are the exact conversion rounded
    /// once.
    pub fn from_chebyshev(cheb: Vec<f64>) -> Self {
        let exact: Vec<BigRational> = cheb
            .iter()
            .map(|c| BigRational::from_float(*c).expect("finite Chebyshev coefficient"))
            .collect();
        Self {
            coeffs: round_all(&chebyshev_to_monomial(&exact)),
            cheb_source: Some(cheb),
            cheb: OnceLock::new(),
        }
    }

    /// Chebyshev coefficients if the polynomial is defined by them.
    pub fn chebyshev_coeffs(&self) -> Option<&[f64]> {
        self.cheb_source.as_deref()
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self::new(c)
    }

    /// Chebyshev polynomial of the first kind `T_n`.
    pub fn chebyshev(n: usize) -> Self {
        let mut c = vec![0.0; n + 1];
        c[n] = 1.0;
        Self::from_chebyshev(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Index of the last nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    fn trimmed(&self) -> &[f64] {
        match self.degree() {
            Some(d) => &self.coeffs[..=d],
            None => &[],
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        if let Some(cheb) = &self.cheb_source {
            return clenshaw(cheb, x);
        }
        let c = self.trimmed();
        if c.len() > CHEB_DEGREE + 1 && x.abs() > CHEB_SWITCH && x.abs() <= 1.0 {
            let cheb = self.cheb.get_or_init(|| monomial_to_chebyshev(c));
            return clenshaw(cheb, x);
        }
        compensated_horner(c, x)
    }

    pub fn derivative(&self) -> Result<Self> {
        if let Some(cheb) = &self.cheb_source {
            let d = chebyshev_derivative(cheb);
            check_overflow(&d)?;
            let out = Self::from_chebyshev(d);
            check_overflow(&out.coeffs)?;
            return Ok(out);
        }
        let c = self.trimmed();
        if c.len() <= 1 {
            return Ok(Self::new(vec![0.0]));
        }
        let out: Vec<f64> = c.iter().enumerate().skip(1).map(|(k, a)| k as f64 * a).collect();
        check_overflow(&out)?;
        Ok(Self::new(out))
    }

    pub fn derivative_n(&self, r: usize) -> Result<Self> {
        let mut q = self.clone();
        for _ in 0..r {
            q = q.derivative()?;
        }
        Ok(q)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            cheb_source: self.cheb_source.as_ref().map(|v| v.iter().map(|c| c * s).collect()),
            cheb: OnceLock::new(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + other.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        Self::new(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = (self.trimmed(), other.trimmed());
        if a.is_empty() || b.is_empty() {
            return Ok(Self::new(vec![0.0]));
        }
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        check_overflow(&out)?;
        Ok(Self::new(out))
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        let mut out = Self::constant(1.0);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }
}

pub(crate) fn check_overflow(c: &[f64]) -> Result<()> {
    if c.iter().any(|v| !v.is_finite() || v.abs() > OVERFLOW_LIMIT) {
        Err(Error::Overflow)
    } else {
        Ok(())
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    (s, (a - (s - z)) + (b - z))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Horner's scheme with error-free transformations (Graillat–Langlois–Louvet).
/// The result is as accurate as plain Horner in twice the working precision.
pub(crate) fn compensated_horner(c: &[f64], x: f64) -> f64 {
    let Some((&last, rest)) = c.split_last() else {
        return 0.0;
    };
    let mut s = last;
    let mut err = 0.0;
    for &a in rest.iter().rev() {
        let (p, pe) = two_prod(s, x);
        let (t, se) = two_sum(p, a);
        s = t;
        err = err * x + (pe + se);
    }
    s + err
}

fn round_all(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
}

/// `Σ c_k T_k` in monomial coefficients, exactly.
pub(crate) fn chebyshev_to_monomial(c: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); c.len().max(1)];
    let mut prev: Vec<BigInt> = vec![BigInt::one()];
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for (k, a) in c.iter().enumerate() {
        if k >= 2 {
            let mut next = vec![BigInt::zero(); k + 1];
            for (j, v) in cur.iter().enumerate() {
                next[j + 1] += v * 2;
            }
            for (j, v) in prev.iter().enumerate() {
                next[j] -= v;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        if a.is_zero() {
            continue;
        }
        let t = if k == 0 { &prev } else { &cur };
        for (j, v) in t.iter().enumerate() {
            out[j] += a * BigRational::from_integer(v.clone());
        }
    }
    out
}

/// Chebyshev coefficients of the derivative of `Σ c_k T_k`.
fn chebyshev_derivative(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n + 1];
    for k in (1..n).rev() {
        d[k - 1] = d[k + 1] + 2.0 * k as f64 * c[k];
    }
    d[0] *= 0.5;
    d.truncate(n - 1);
    d
}

/// Exact conversion of monomial coefficients (read as exact binary
/// rationals) to Chebyshev coefficients, rounded once at the end.
fn monomial_to_chebyshev(c: &[f64]) -> Vec<f64> {
    let exact: Vec<BigRational> = c
        .iter()
        .map(|a| BigRational::from_float(*a).unwrap_or_else(BigRational::zero))
        .collect();
    round_all(&monomial_to_chebyshev_exact(&exact))
}

pub(crate) fn monomial_to_chebyshev_exact(c: &[BigRational]) -> Vec<BigRational> {
    let n = c.len();
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n];
    // binomial row for x^k = 2^{1-k} Σ_j C(k, j) T_{k-2j}, middle term halved
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for (k, a) in c.iter().enumerate() {
        if k > 0 {
            let mut next = vec![BigInt::one(); k + 1];
            for j in 1..k {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        if a.is_zero() {
            continue;
        }
        let scale = if k == 0 {
            BigRational::one()
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (k - 1))
        };
        for (j, b) in row.iter().enumerate().take(k / 2 + 1) {
            let m = k - 2 * j;
            let mut term = a * &scale * BigRational::from_integer(b.clone());
            if k > 0 && m == 0 {
                term /= BigRational::from_integer(BigInt::from(2));
            }
            acc[m] += term;
        }
    }
    acc
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &a in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + a;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c[0]
}
