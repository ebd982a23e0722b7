use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::polynomial::{monomial_to_chebyshev_exact, PolynomialRep};
use crate::error::{Error, Result};

/// Largest degree built by exact expansion; higher degrees continue with the
/// three-term recurrence in floating point.
pub const EXACT_LIMIT: usize = 40;
pub const MAX_DEGREE: usize = 200;

/// Ultraspherical Jacobi polynomial `P_n^{(2,2)}`, normalized by the
/// Rodrigues formula `(-1)^n (1-x²)^{-2} / (2^n n!) · dⁿ/dxⁿ (1-x²)^{n+2}`.
pub fn jacobi22(n: usize) -> Result<PolynomialRep> {
    if n > MAX_DEGREE {
        return Err(Error::Range(format!("jacobi22 degree must be <= {MAX_DEGREE}, got {n}")));
    }
    if n <= EXACT_LIMIT {
        return Ok(PolynomialRep::from_chebyshev(rodrigues(n)));
    }
    let mut prev = rodrigues(EXACT_LIMIT - 1);
    let mut cur = rodrigues(EXACT_LIMIT);
    for k in EXACT_LIMIT + 1..=n {
        let next = recurrence_step(k, &cur, &prev);
        prev = cur;
        cur = next;
    }
    Ok(PolynomialRep::from_chebyshev(cur))
}

/// `x · Σ c_k T_k` in the Chebyshev basis.
fn times_x(c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; c.len() + 1];
    for (k, v) in c.iter().enumerate() {
        if k == 0 {
            out[1] += v;
        } else {
            out[k + 1] += 0.5 * v;
            out[k - 1] += 0.5 * v;
        }
    }
    out
}

/// Chebyshev coefficients of `P_k` from `P_{k-1}`, `P_{k-2}`:
/// `2k(k+4)(2k+2) P_k = (2k+3)(2k+4)(2k+2) x P_{k-1} - 2(k+1)²(2k+4) P_{k-2}`.
fn recurrence_step(k: usize, p1: &[f64], p2: &[f64]) -> Vec<f64> {
    let k = k as f64;
    let lhs = 2.0 * k * (k + 4.0) * (2.0 * k + 2.0);
    let a = (2.0 * k + 3.0) * (2.0 * k + 4.0) * (2.0 * k + 2.0) / lhs;
    let b = 2.0 * (k + 1.0) * (k + 1.0) * (2.0 * k + 4.0) / lhs;
    let mut out: Vec<f64> = times_x(p1).into_iter().map(|c| a * c).collect();
    for (i, c) in p2.iter().enumerate() {
        out[i] -= b * c;
    }
    out
}

/// Exact Rodrigues expansion, returned as rounded Chebyshev coefficients.
fn rodrigues(n: usize) -> Vec<f64> {
    // (1 - x²)^{n+2} in powers of x
    let m = n + 2;
    let mut poly = vec![BigInt::zero(); 2 * m + 1];
    let mut binom = BigInt::one();
    for j in 0..=m {
        poly[2 * j] = if j % 2 == 0 { binom.clone() } else { -binom.clone() };
        binom = binom * BigInt::from(m - j) / BigInt::from(j + 1);
    }
    for _ in 0..n {
        poly = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
    }
    // exact division by (x² - 1)² = (1 - x²)²
    for _ in 0..2 {
        let deg = poly.len() - 1;
        let mut rem = poly.clone();
        let mut q = vec![BigInt::zero(); deg - 1];
        for k in (2..=deg).rev() {
            let c = rem[k].clone();
            q[k - 2] = c.clone();
            rem[k - 2] += &c;
            rem[k] = BigInt::zero();
        }
        debug_assert!(rem.iter().all(|c| c.is_zero()));
        poly = q;
    }
    let mut denom = BigInt::one() << n;
    for k in 2..=n {
        denom *= BigInt::from(k);
    }
    if n % 2 == 1 {
        denom = -denom;
    }
    let exact: Vec<BigRational> = poly.into_iter().map(|c| BigRational::new(c, denom.clone())).collect();
    monomial_to_chebyshev_exact(&exact)
        .iter()
        .map(|r| r.to_f64().unwrap_or(f64::NAN))
        .collect()
}
