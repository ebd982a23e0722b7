//! The spliced N-function and the Luxemburg, `G(φ)`, Lorentz, weighted
//! Lorentz and `V(φ; r)` (quasi)norms, plus the equivalence constants.

mod constants;
mod gnorm;
mod lorentz;
mod orlicz;
mod scan;

use serde::Serialize;

use crate::error::Result;
use crate::measure::{lp_quasinorm, sup_norm, Evaluable, QuadratureConfig};
use crate::transform::PhiSpec;

pub use constants::{equivalence_constants, EquivalenceConstants};
pub use gnorm::{g_norm, g_norm_from, v_quasinorm, v_quasinorm_scan, SCAN_P_MAX};
pub use lorentz::{lorentz_norm, weighted_lorentz_g, weighted_lorentz_g_scan, LorentzIndex, LorentzProfile};
pub use orlicz::{construct_n, luxemburg_norm, orlicz_modular, OrliczN, Splice};
pub use scan::{sup_over_p, ScanOutcome};

/// A norm or quasi-norm selected at run time.
#[derive(Debug, Clone)]
pub enum NormSpec {
    Lp(f64),
    Sup,
    Luxemburg(OrliczN),
    G(PhiSpec),
    Lorentz { p: f64, b: LorentzIndex },
    WeightedLorentz { phi: PhiSpec, b: LorentzIndex },
    V { phi: PhiSpec, r: u32 },
}

/// A computed norm value; `inner_maximizer_p` is set for sup-over-p norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub inner_maximizer_p: Option<f64>,
}

impl From<ScanOutcome> for NormValue {
    fn from(s: ScanOutcome) -> Self {
        Self {
            value: s.value,
            inner_maximizer_p: Some(s.argmax_p),
        }
    }
}

impl NormSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            NormSpec::Lp(_) => "lp",
            NormSpec::Sup => "sup",
            NormSpec::Luxemburg(_) => "luxemburg",
            NormSpec::G(_) => "g",
            NormSpec::Lorentz { .. } => "lorentz",
            NormSpec::WeightedLorentz { .. } => "weighted_lorentz",
            NormSpec::V { .. } => "v",
        }
    }

    pub fn evaluate<E: Evaluable + Sync + ?Sized>(&self, f: &E, cfg: &QuadratureConfig) -> Result<NormValue> {
        let plain = |value| NormValue {
            value,
            inner_maximizer_p: None,
        };
        Ok(match self {
            NormSpec::Lp(p) => plain(lp_quasinorm(f, *p, cfg)?),
            NormSpec::Sup => plain(sup_norm(f)?),
            NormSpec::Luxemburg(n) => plain(luxemburg_norm(f, n, cfg)?),
            NormSpec::G(phi) => g_norm_from(f, phi, 1.0, cfg)?.into(),
            NormSpec::Lorentz { p, b } => plain(lorentz_norm(f, *p, *b, cfg)?),
            NormSpec::WeightedLorentz { phi, b } => weighted_lorentz_g_scan(f, phi, *b, cfg)?.into(),
            NormSpec::V { phi, r } => v_quasinorm_scan(f, phi, *r, cfg)?.into(),
        })
    }
}
