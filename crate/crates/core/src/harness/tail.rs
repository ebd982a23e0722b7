use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{Evaluable, LevelSets, Profile, QuadratureConfig, Scaled};
use crate::norms::{v_quasinorm_scan, ScanOutcome};
use crate::transform::PhiSpec;

/// Grading used for the possibly singular tail functions.
pub const TAIL_GRADING: u32 = 4;
const U_POINTS: usize = 64;
const BETA_POINTS: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub m: f64,
    pub r: u32,
    /// `‖f‖V(φ_{m,0}; r)`; the tail is measured for `f` divided by it.
    pub normalizer: f64,
    pub u: Vec<f64>,
    pub measured: Vec<f64>,
    /// `u^{-1/r} (ln u)^{1/(mr)}`.
    pub model: Vec<f64>,
    /// Smallest `C` with `T ≤ C · model` on the grid.
    pub prefactor: f64,
    /// The prefactor the violation is measured against (the fitted one
    /// unless supplied).
    pub tested_prefactor: f64,
    /// `max_u (T − C · model)`; `<= 0` means the bound holds.
    pub max_violation: f64,
}

pub fn tail_model(u: f64, m: f64, r: u32) -> f64 {
    let r = r as f64;
    u.powf(-1.0 / r) * u.ln().powf(1.0 / (m * r))
}

fn graded(cfg: &QuadratureConfig) -> QuadratureConfig {
    cfg.with_grading(cfg.grading.max(TAIL_GRADING))
}

/// Fits the tail bound `T(|f|, u) ≤ C u^{-1/r} (ln u)^{1/(mr)}` on a
/// geometric grid over `[3, u_max]` after normalizing `f` to unit
/// `V(φ_{m,0}; r)` quasinorm. With `prefactor = Some(C)` the violation is
/// measured against that `C` instead of the fitted one.
pub fn tail_check<E: Evaluable + Sync + ?Sized>(
    f: &E,
    m: f64,
    r: u32,
    u_max: f64,
    prefactor: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<TailReport> {
    if !(u_max > 3.0) {
        return Err(Error::Range(format!("tail grid needs u_max > 3, got {u_max}")));
    }
    let phi = PhiSpec::power(m)?;
    let normalizer = v_quasinorm_scan(f, &phi, r, &graded(cfg))?.value;
    if normalizer == 0.0 {
        return Err(Error::Degenerate("tail check of the zero function".into()));
    }
    if !normalizer.is_finite() {
        return Err(Error::Evaluation("V quasinorm is not finite; f is too singular".into()));
    }
    let g = Scaled {
        factor: 1.0 / normalizer,
        inner: f,
    };
    let levels = LevelSets::new(&g)?;
    let ratio = u_max / 3.0;
    let u: Vec<f64> = (0..U_POINTS)
        .map(|i| 3.0 * ratio.powf(i as f64 / (U_POINTS - 1) as f64))
        .collect();
    let measured: Vec<f64> = u.iter().map(|&w| levels.measure_above(w)).collect();
    let model: Vec<f64> = u.iter().map(|&w| tail_model(w, m, r)).collect();
    let fitted = measured.iter().zip(&model).map(|(t, b)| t / b).fold(0.0, f64::max);
    let tested = prefactor.unwrap_or(fitted);
    let max_violation = measured
        .iter()
        .zip(&model)
        .map(|(t, b)| t - tested * b)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(TailReport {
        m,
        r,
        normalizer,
        u,
        measured,
        model,
        prefactor: fitted,
        tested_prefactor: tested,
        max_violation,
    })
}

/// The converse direction: the `V(φ_{m/(mr+1),0}; r)` scan and the growth
/// of `‖f‖_β` as `β → 1/r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConverseReport {
    pub m: f64,
    pub r: u32,
    pub phi: String,
    pub scan: ScanOutcome,
    pub beta: Vec<f64>,
    pub norm_beta: Vec<f64>,
    /// `(1/r − β)^{-(mr+1)/m}`.
    pub model: Vec<f64>,
    /// `max_β ‖f‖_β / model`.
    pub prefactor: f64,
}

pub fn converse_model(beta: f64, m: f64, r: u32) -> f64 {
    let r = r as f64;
    (1.0 / r - beta).powf(-(m * r + 1.0) / m)
}

pub fn tail_converse<E: Evaluable + Sync + ?Sized>(f: &E, m: f64, r: u32, cfg: &QuadratureConfig) -> Result<ConverseReport> {
    if r < 1 {
        return Err(Error::Range("V(phi; r) needs r >= 1".into()));
    }
    let rf = r as f64;
    let phi = PhiSpec::power(m / (m * rf + 1.0))?;
    let cfg = graded(cfg);
    let scan = v_quasinorm_scan(f, &phi, r, &cfg)?;
    let profile = Profile::new(f)?;
    // β on (4/(4r+1), 1/r) through β = p/(pr+1), p geometric on [4, 1024]
    let beta: Vec<f64> = (0..BETA_POINTS)
        .map(|i| {
            let p = 4.0 * 256f64.powf(i as f64 / (BETA_POINTS - 1) as f64);
            p / (p * rf + 1.0)
        })
        .collect();
    let norm_beta = beta
        .iter()
        .map(|&b| profile.lp(b, &cfg))
        .collect::<Result<Vec<f64>>>()?;
    let model: Vec<f64> = beta.iter().map(|&b| converse_model(b, m, r)).collect();
    let prefactor = norm_beta.iter().zip(&model).map(|(v, b)| v / b).fold(0.0, f64::max);
    Ok(ConverseReport {
        m,
        r,
        phi: phi.name(),
        scan,
        beta,
        norm_beta,
        model,
        prefactor,
    })
}
