//! Per-function breakpoint preparation for repeated `L_p`-type integrals.

use super::{integrate_log_measure, Domain, Evaluable, QuadratureConfig};
use crate::error::{Error, Result};
use crate::golden::{bisect_boundary, golden_max};

const PROFILE_CELLS: usize = 1 << 14;

/// Breakpoints at the sampled local maxima of `|f|` and at the sign changes
/// of `f`. Integrands built from `|f|` (powers, `exp φ(|f|/l)`) are peaked
/// at the former and cusped at the latter, so panels ending there converge
/// quickly even for very large exponents.
pub struct Profile<'a, E: ?Sized> {
    f: &'a E,
    domain: Domain,
    breaks: Vec<f64>,
    sampled_max: f64,
}

impl<'a, E: Evaluable + ?Sized> Profile<'a, E> {
    pub fn new(f: &'a E) -> Result<Self> {
        let domain = f.domain();
        let (a, b) = domain.bounds();
        let h = (b - a) / PROFILE_CELLS as f64;
        let mut xs = Vec::with_capacity(PROFILE_CELLS);
        let mut vs = Vec::with_capacity(PROFILE_CELLS);
        for i in 0..PROFILE_CELLS {
            let x = a + h * (i as f64 + 0.5);
            let v = f.eval(x);
            if v.is_nan() {
                return Err(Error::NonFiniteEvaluation { x });
            }
            xs.push(x);
            vs.push(v);
        }
        let mut breaks = Vec::new();
        let abs = |v: f64| v.abs();
        for i in 0..PROFILE_CELLS {
            if vs[i] == 0.0 {
                breaks.push(xs[i]);
                continue;
            }
            if i + 1 < PROFILE_CELLS && vs[i] * vs[i + 1] < 0.0 {
                let positive = vs[i] > 0.0;
                let z = bisect_boundary(|x| (f.eval(x) > 0.0) == positive, xs[i], xs[i + 1], 1e-14);
                breaks.push(z);
            }
            if i == 0 || i + 1 == PROFILE_CELLS {
                continue;
            }
            let (l, c, r) = (abs(vs[i - 1]), abs(vs[i]), abs(vs[i + 1]));
            if c >= l && c >= r && (c > l || c > r) && c.is_finite() {
                let (x, _) = golden_max::<_, Error>(
                    |x| Ok(f.eval(x).abs()),
                    xs[i - 1],
                    xs[i + 1],
                    1e-12 * (b - a),
                    80,
                )?;
                breaks.push(x);
            }
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let sampled_max = vs.iter().map(|v| v.abs()).fold(0.0, f64::max);
        Ok(Self {
            f,
            domain,
            breaks,
            sampled_max,
        })
    }

    pub fn function(&self) -> &'a E {
        self.f
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// Largest `|f|` seen on the sampling grid (lower-biased).
    pub fn sampled_max(&self) -> f64 {
        self.sampled_max
    }

    /// `ln ∫ exp(log_g(f(x))) dμ` with the profile's breakpoints.
    pub fn integrate_log_of<G: FnMut(f64) -> f64>(&self, mut log_g: G, cfg: &QuadratureConfig) -> Result<f64> {
        integrate_log_measure(self.domain, &self.breaks, |x| log_g(self.f.eval(x)), cfg)
    }

    /// `‖f‖_p`, computed as `exp(ln I(e^{p ln|f|}) / p)`.
    pub fn lp(&self, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if !(p > 0.0) {
            return Err(Error::Range(format!("L_p exponent must be > 0, got {p}")));
        }
        let log_i = self.integrate_log_of(|v| p * v.abs().ln(), cfg)?;
        Ok((log_i / p).exp())
    }
}
