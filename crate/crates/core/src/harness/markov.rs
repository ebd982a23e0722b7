use rayon::prelude::*;
use serde::Serialize;

use super::constants::k_constant;
use super::fit::{fit_loglog, LineFit};
use crate::error::{Error, Result};
use crate::function::{jacobi22, random_family, FunctionKind, FunctionRep, PolynomialRep};
use crate::measure::QuadratureConfig;
use crate::norms::{construct_n, equivalence_constants, EquivalenceConstants, NormSpec};
use crate::transform::{psi, PhiSpec};

/// Minimum number of usable degrees for a slope fit.
pub const MIN_FIT_POINTS: usize = 5;

/// `‖Q′‖ / ‖Q‖` in the given norm.
pub fn markov_ratio(q: &FunctionRep, norm: &NormSpec, cfg: &QuadratureConfig) -> Result<f64> {
    let den = norm.evaluate(q, cfg)?.value;
    if den == 0.0 {
        return Err(Error::Degenerate("Markov ratio of the zero function".into()));
    }
    let d = q.derivative_fn(1)?;
    Ok(norm.evaluate(&d, cfg)?.value / den)
}

/// The `n`-independent part of the upper bound
/// `n² · K(4) · max(1, ψ(4)) · C₄ · C₃`, kept as a logarithm since `C₄`
/// overflows for steep generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovBound {
    pub k4: f64,
    pub psi4: f64,
    pub c3: f64,
    pub log_c4: f64,
    pub log_factor: f64,
}

impl MarkovBound {
    pub fn new(phi: &PhiSpec) -> Result<Self> {
        let consts = equivalence_constants(&construct_n(phi)?)?;
        Self::from_constants(phi, &consts)
    }

    pub fn from_constants(phi: &PhiSpec, consts: &EquivalenceConstants) -> Result<Self> {
        let k4 = k_constant(4.0)?;
        let psi4 = psi(phi, 4.0)?;
        let log_factor = k4.ln() + psi4.max(1.0).ln() + consts.log_c4 + consts.c3.ln();
        Ok(Self {
            k4,
            psi4,
            c3: consts.c3,
            log_c4: consts.log_c4,
            log_factor,
        })
    }

    pub fn log_bound(&self, n: usize) -> f64 {
        2.0 * (n as f64).ln() + self.log_factor
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum SweepFamily {
    Jacobi22,
    Chebyshev,
    RandomPoly { seed: u64 },
}

impl SweepFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            SweepFamily::Jacobi22 => "jacobi22",
            SweepFamily::Chebyshev => "chebyshev",
            SweepFamily::RandomPoly { .. } => "random-poly",
        }
    }

    pub fn member(&self, n: usize) -> Result<FunctionRep> {
        Ok(match self {
            SweepFamily::Jacobi22 => FunctionRep::Polynomial(jacobi22(n)?),
            SweepFamily::Chebyshev => FunctionRep::Polynomial(PolynomialRep::chebyshev(n)),
            SweepFamily::RandomPoly { seed } => random_family(FunctionKind::Polynomial, n, *seed),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioEntry {
    pub n: usize,
    pub ratio: f64,
    /// `+∞` when the bound exceeds the double range; `log_bound` is exact.
    pub bound: f64,
    pub log_bound: f64,
    pub margin: f64,
}

impl RatioEntry {
    pub fn holds(&self) -> bool {
        self.ratio.ln() <= self.log_bound || self.ratio == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub family: String,
    pub phi: String,
    pub norm: String,
    pub bound: MarkovBound,
    pub entries: Vec<RatioEntry>,
    /// Fit of `ln ratio` on `ln n` over `n >= 2`; absent with fewer than
    /// [`MIN_FIT_POINTS`] usable degrees.
    pub fit: Option<LineFit>,
    /// `min_n ratio / n²` over `n >= 1` with a nonzero ratio.
    pub c5_estimate: Option<f64>,
}

impl RatioReport {
    pub fn violations(&self) -> usize {
        self.entries.iter().filter(|e| !e.holds()).count()
    }

    /// Multiplies every bound by `factor`, recomputing the margins.
    pub fn rescale_bounds(&mut self, factor: f64) {
        let shift = factor.ln();
        self.bound.log_factor += shift;
        for e in &mut self.entries {
            *e = entry(e.n, e.ratio, e.log_bound + shift);
        }
    }
}

fn entry(n: usize, ratio: f64, log_bound: f64) -> RatioEntry {
    let bound = log_bound.exp();
    RatioEntry {
        n,
        ratio,
        bound,
        log_bound,
        margin: bound - ratio,
    }
}

/// Markov ratios of a polynomial family over the degrees `ns`, checked
/// against `n² K(4) max(1, ψ(4)) C₄ C₃` with the constants of `φ`.
///
/// The ratio is measured in `norm`; pass `NormSpec::Luxemburg` of
/// `construct_n(φ)` for the `B(φ)` statement. Degree `0` members have ratio
/// zero and are kept out of the fit.
pub fn markov_sweep(
    phi: &PhiSpec,
    family: SweepFamily,
    ns: &[usize],
    norm: &NormSpec,
    cfg: &QuadratureConfig,
) -> Result<RatioReport> {
    if ns.is_empty() {
        return Err(Error::Range("markov sweep needs at least one degree".into()));
    }
    let bound = MarkovBound::new(phi)?;
    let ratios: Vec<Result<f64>> = ns
        .par_iter()
        .map(|&n| {
            if n == 0 {
                return Ok(0.0);
            }
            markov_ratio(&family.member(n)?, norm, cfg)
        })
        .collect();
    let mut entries = Vec::with_capacity(ns.len());
    for (&n, ratio) in ns.iter().zip(ratios) {
        entries.push(entry(n, ratio?, bound.log_bound(n)));
    }
    let usable: Vec<&RatioEntry> = entries.iter().filter(|e| e.n >= 2 && e.ratio > 0.0).collect();
    let fit = if usable.len() >= MIN_FIT_POINTS {
        let xs: Vec<f64> = usable.iter().map(|e| e.n as f64).collect();
        let ys: Vec<f64> = usable.iter().map(|e| e.ratio).collect();
        Some(fit_loglog(&xs, &ys)?)
    } else {
        None
    };
    let c5_estimate = entries
        .iter()
        .filter(|e| e.n >= 1 && e.ratio > 0.0)
        .map(|e| e.ratio / (e.n as f64).powi(2))
        .reduce(f64::min);
    Ok(RatioReport {
        family: family.tag().into(),
        phi: phi.name(),
        norm: norm.kind().into(),
        bound,
        entries,
        fit,
        c5_estimate,
    })
}
