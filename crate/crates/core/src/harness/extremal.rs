use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::markov::markov_ratio;
use crate::error::{Error, Result};
use crate::function::{jacobi22, FunctionRep, PolynomialRep};
use crate::golden::golden_max;
use crate::measure::QuadratureConfig;
use crate::norms::NormSpec;

const SWEEPS: usize = 3;
const LINE_ITERS: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalResult {
    pub n: usize,
    /// Chebyshev coefficients of the best polynomial, unit Euclidean norm.
    pub chebyshev: Vec<f64>,
    pub ratio: f64,
    pub jacobi_ratio: f64,
    /// Index of the start that won; `0` is the Jacobi seed.
    pub best_start: usize,
}

impl ExtremalResult {
    pub fn polynomial(&self) -> PolynomialRep {
        PolynomialRep::from_chebyshev(self.chebyshev.clone())
    }
}

fn normalized(c: &[f64]) -> Vec<f64> {
    let s = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    c.iter().map(|v| v / s).collect()
}

fn ratio_of(c: &[f64], norm: &NormSpec, cfg: &QuadratureConfig) -> f64 {
    if c.iter().all(|v| *v == 0.0) {
        return 0.0;
    }
    let q = FunctionRep::Polynomial(PolynomialRep::from_chebyshev(c.to_vec()));
    markov_ratio(&q, norm, cfg).unwrap_or(0.0)
}

/// Coordinate-wise golden-section ascent of the Markov ratio. The ratio is
/// scale invariant, so each line search moves one coordinate within
/// `[-1, 1]` around its current value and the point is renormalized after.
fn ascend(mut c: Vec<f64>, norm: &NormSpec, cfg: &QuadratureConfig) -> (Vec<f64>, f64) {
    let mut best = ratio_of(&c, norm, cfg);
    for _ in 0..SWEEPS {
        for k in 0..c.len() {
            let base = c[k];
            let mut trial = c.clone();
            let line = golden_max::<_, Error>(
                |t| {
                    trial[k] = base + t;
                    Ok(ratio_of(&trial, norm, cfg))
                },
                -1.0,
                1.0,
                1e-6,
                LINE_ITERS,
            );
            if let Ok((t, v)) = line {
                if v > best {
                    c[k] = base + t;
                    c = normalized(&c);
                    best = v;
                }
            }
        }
    }
    (c, best)
}

/// Best-effort maximizer of `‖Q′‖ / ‖Q‖` over degree-`n` polynomials,
/// started from the Jacobi polynomial `P_n^{(2,2)}` and `restarts` random
/// points on the unit sphere of Chebyshev coefficients.
pub fn extremal_search(
    n: usize,
    norm: &NormSpec,
    restarts: usize,
    seed: u64,
    cfg: &QuadratureConfig,
) -> Result<ExtremalResult> {
    if n < 1 {
        return Err(Error::Range("extremal search needs degree >= 1".into()));
    }
    let jacobi = jacobi22(n)?;
    let seed_coeffs = normalized(
        jacobi
            .chebyshev_coeffs()
            .ok_or_else(|| Error::Internal("Jacobi polynomial without Chebyshev data".into()))?,
    );
    let jacobi_ratio = markov_ratio(&FunctionRep::Polynomial(jacobi.clone()), norm, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(40));
    let mut starts = vec![seed_coeffs];
    for _ in 0..restarts {
        let mut c: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // keep the degree exact
        if c[n].abs() < 0.1 {
            c[n] = 0.1f64.copysign(c[n]);
        }
        starts.push(normalized(&c));
    }
    let mut out = ExtremalResult {
        n,
        chebyshev: starts[0].clone(),
        ratio: jacobi_ratio,
        jacobi_ratio,
        best_start: 0,
    };
    for (i, s) in starts.into_iter().enumerate() {
        let (c, r) = ascend(s, norm, cfg);
        if r > out.ratio {
            out.chebyshev = c;
            out.ratio = r;
            out.best_start = i;
        }
    }
    Ok(out)
}
