//! Integration against the normalized Lebesgue measure on `[-1, 1]` or
//! `[0, 2π]`, `L_p` quasi-norms, the distribution function and sup-norm
//! estimates.

mod adaptive;
mod gauss;
mod levels;
mod profile;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::golden::golden_max;

pub use levels::LevelSets;
pub use profile::Profile;

pub(crate) use adaptive::{integrate_linear, integrate_log};

/// Working domain. The measure is Lebesgue measure scaled to total mass 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// `[-1, 1]` with `μ(dx) = dx / 2`.
    Interval,
    /// `[0, 2π]` with `μ(dx) = dx / 2π`.
    Circle,
}

impl Domain {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Domain::Interval => (-1.0, 1.0),
            Domain::Circle => (0.0, 2.0 * PI),
        }
    }

    /// Density of `μ` with respect to `dx`.
    pub fn normalization(self) -> f64 {
        let (a, b) = self.bounds();
        1.0 / (b - a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_depth: u32,
    pub nodes_per_panel: usize,
    /// Sigmoidal endpoint grading exponent applied on every segment; `1`
    /// disables it. Values above one cluster nodes at segment ends, which
    /// integrates endpoint singularities such as `(1 - x)^{-a}`.
    pub grading: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_depth: 50,
            nodes_per_panel: 16,
            grading: 1,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::Range(format!("quadrature tolerance must be > 0, got {}", self.rel_tol)));
        }
        if self.max_depth < 1 {
            return Err(Error::Range("quadrature depth must be >= 1".into()));
        }
        if self.nodes_per_panel < 1 {
            return Err(Error::Range("nodes per panel must be >= 1".into()));
        }
        if self.grading < 1 {
            return Err(Error::Range("grading exponent must be >= 1".into()));
        }
        Ok(())
    }

    pub fn with_grading(self, grading: u32) -> Self {
        Self { grading, ..self }
    }
}

/// A real function that can be sampled on its domain.
pub trait Evaluable {
    fn eval(&self, x: f64) -> f64;
    fn domain(&self) -> Domain;
}

impl<T: Evaluable + ?Sized> Evaluable for &T {
    fn eval(&self, x: f64) -> f64 {
        (**self).eval(x)
    }
    fn domain(&self) -> Domain {
        (**self).domain()
    }
}

/// Wraps a closure as an [`Evaluable`] on a given domain.
#[derive(Clone, Copy)]
pub struct OnDomain<F> {
    pub domain: Domain,
    pub f: F,
}

impl<F: Fn(f64) -> f64> OnDomain<F> {
    pub fn new(domain: Domain, f: F) -> Self {
        Self { domain, f }
    }
}

impl<F: Fn(f64) -> f64> Evaluable for OnDomain<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
    fn domain(&self) -> Domain {
        self.domain
    }
}

/// `c · f`.
#[derive(Clone, Copy)]
pub struct Scaled<E> {
    pub factor: f64,
    pub inner: E,
}

impl<E: Evaluable> Evaluable for Scaled<E> {
    fn eval(&self, x: f64) -> f64 {
        self.factor * self.inner.eval(x)
    }
    fn domain(&self) -> Domain {
        self.inner.domain()
    }
}

/// `I(f) = ∫ f dμ`.
pub fn integrate<E: Evaluable + ?Sized>(f: &E, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    let d = f.domain();
    let (a, b) = d.bounds();
    Ok(integrate_linear(&[a, b], |x| f.eval(x), cfg)? * d.normalization())
}

/// `ln ∫ exp(log_g) dμ` on a domain, with optional interior breakpoints.
pub fn integrate_log_measure<G: FnMut(f64) -> f64>(
    domain: Domain,
    breaks: &[f64],
    log_g: G,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    let (a, b) = domain.bounds();
    let mut pts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    pts.push(a);
    pts.extend(breaks.iter().copied().filter(|x| *x > a && *x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    Ok(integrate_log(&pts, log_g, cfg)? + domain.normalization().ln())
}

/// `‖f‖_p = I(|f|^p)^{1/p}`, a quasi-norm for `p < 1`.
pub fn lp_quasinorm<E: Evaluable + ?Sized>(f: &E, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let profile = Profile::new(f)?;
    profile.lp(p, cfg)
}

/// Number of cells of the sup-norm sampling grid.
pub const SUP_GRID_CELLS: usize = 1 << 14;

/// Estimate of `sup |f|`: the maximum over `2^14 + 1` equispaced samples,
/// polished by golden-section search around the eight largest sampled local
/// maxima. The estimate never exceeds the true supremum up to rounding.
pub fn sup_norm<E: Evaluable + ?Sized>(f: &E) -> Result<f64> {
    let (a, b) = f.domain().bounds();
    let n = SUP_GRID_CELLS;
    let h = (b - a) / n as f64;
    let mut xs = Vec::with_capacity(n + 1);
    let mut vs = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x = if i == n { b } else { a + h * i as f64 };
        let v = f.eval(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteEvaluation { x });
        }
        xs.push(x);
        vs.push(v.abs());
    }
    let mut peaks: Vec<usize> = (0..=n)
        .filter(|&i| {
            let left = i == 0 || vs[i] >= vs[i - 1];
            let right = i == n || vs[i] >= vs[i + 1];
            left && right
        })
        .collect();
    peaks.sort_by(|&i, &j| vs[j].total_cmp(&vs[i]));
    peaks.truncate(8);
    let mut best = vs.iter().copied().fold(0.0, f64::max);
    for i in peaks {
        let lo = xs[i.saturating_sub(1)];
        let hi = xs[(i + 1).min(n)];
        let (_, v) = golden_max(
            |x| {
                let v = f.eval(x);
                if v.is_finite() {
                    Ok(v.abs())
                } else {
                    Err(Error::NonFiniteEvaluation { x })
                }
            },
            lo,
            hi,
            1e-13 * (b - a),
            100,
        )?;
        best = best.max(v);
    }
    Ok(best)
}

/// `T(|f|, w) = μ{x : |f(x)| > w}`.
pub fn distribution<E: Evaluable + ?Sized>(f: &E, w: f64) -> Result<f64> {
    if !(w >= 0.0) {
        return Err(Error::Range(format!("distribution level must be >= 0, got {w}")));
    }
    Ok(LevelSets::new(f)?.measure_above(w))
}
