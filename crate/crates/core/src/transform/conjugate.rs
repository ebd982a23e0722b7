use rayon::prelude::*;

use super::phi::PhiSpec;
use crate::error::{Error, Result};
use crate::golden::golden_max;

/// Default abscissa tolerance of the conjugate maximization.
pub const DEFAULT_TOL: f64 = 1e-11;
/// Grid density of [`ConjugateCache`] and of the sup-over-p scans.
pub const POINTS_PER_DECADE: usize = 64;
/// Bracket expansion gives up once it reaches this `|y|`.
const Y_LIMIT: f64 = 1e6;

/// `h*(p) = sup_y (p y - h(y))` starting the bracket search at `y = 0`.
pub fn young_fenchel(phi: &PhiSpec, p: f64, tol: f64) -> Result<f64> {
    young_fenchel_from(phi, p, tol, 0.0).map(|(v, _)| v)
}

/// [`young_fenchel`] with an explicit initial bracket centre; returns the
/// supremum and its maximizer.
///
/// `p = 0` gives the limit value `0` approached as `y → -∞`.
pub fn young_fenchel_from(phi: &PhiSpec, p: f64, tol: f64, y0: f64) -> Result<(f64, f64)> {
    if p == 0.0 {
        return Ok((0.0, f64::NEG_INFINITY));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Range(format!("conjugate argument must be > 0, got {p}")));
    }
    let diverge = || Error::ConjugateDivergence { phi: phi.name(), p };
    let slope = |y: f64| -> Result<f64> { Ok(p - phi.h_prime(y)?) };
    let objective = |y: f64| -> Result<f64> { Ok(p * y - phi.h(y)?) };

    let (s_lo, s_hi) = (slope(y0 - 1.0)?, slope(y0 + 1.0)?);
    let flat = |s: f64| s.abs() <= 1e-8 * p;
    if flat(s_lo) && flat(s_hi) && flat(slope(y0 - 8.0)?) && flat(slope(y0 + 8.0)?) {
        // affine h with slope p: the objective is constant
        return Ok((objective(y0)?, y0));
    }
    let mut lo = y0 - 1.0;
    let mut step = 1.0;
    let mut s = s_lo;
    while !(s > 0.0) {
        lo -= step;
        step *= 2.0;
        if lo < -Y_LIMIT {
            return Err(diverge());
        }
        s = slope(lo)?;
    }
    let mut hi = y0 + 1.0;
    step = 1.0;
    s = s_hi;
    while !(s < 0.0) {
        hi += step;
        step *= 2.0;
        if hi > Y_LIMIT {
            return Err(diverge());
        }
        s = slope(hi)?;
    }
    let (y, v) = golden_max(objective, lo, hi, tol * (1.0 + lo.abs().max(hi.abs())), 400)?;
    Ok((v, y))
}

/// `ψ(p) = exp(h*(p) / p)`.
pub fn psi(phi: &PhiSpec, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Range(format!("psi needs p > 0, got {p}")));
    }
    Ok((young_fenchel(phi, p, DEFAULT_TOL)? / p).exp())
}

/// Right derivative of `h*` at `p` by a forward difference.
pub fn hstar_right_derivative(phi: &PhiSpec, p: f64) -> Result<f64> {
    let d = 1e-6 * p.max(1.0);
    Ok((young_fenchel(phi, p + d, DEFAULT_TOL)? - young_fenchel(phi, p, DEFAULT_TOL)?) / d)
}

/// Geometric grid with [`POINTS_PER_DECADE`] points per decade, including
/// both ends.
pub fn geometric_grid(p_min: f64, p_max: f64) -> Vec<f64> {
    let decades = (p_max / p_min).log10();
    let n = ((decades * POINTS_PER_DECADE as f64).ceil() as usize).max(1);
    let mut out: Vec<f64> = (0..n)
        .map(|i| p_min * 10f64.powf(decades * i as f64 / n as f64))
        .collect();
    out.push(p_max);
    out
}

/// `h*` and `ψ` tabulated on a geometric p-grid.
///
/// The table is filled when the cache is built or extended (both take the
/// cache by value or `&mut`) and is read-only otherwise, so a built cache
/// can be shared between threads freely.
#[derive(Debug, Clone)]
pub struct ConjugateCache {
    phi: PhiSpec,
    ps: Vec<f64>,
    hstar: Vec<f64>,
}

impl ConjugateCache {
    pub fn new(phi: &PhiSpec, p_min: f64, p_max: f64) -> Result<Self> {
        if !(p_min > 0.0 && p_max > p_min) {
            return Err(Error::Range(format!("invalid p-grid [{p_min}, {p_max}]")));
        }
        let ps = geometric_grid(p_min, p_max);
        let hstar = ps
            .par_iter()
            .map(|&p| young_fenchel(phi, p, DEFAULT_TOL))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            phi: phi.clone(),
            ps,
            hstar,
        })
    }

    /// The grid `[1, 1024]`.
    pub fn standard(phi: &PhiSpec) -> Result<Self> {
        Self::new(phi, 1.0, 1024.0)
    }

    pub fn phi(&self) -> &PhiSpec {
        &self.phi
    }

    pub fn grid(&self) -> &[f64] {
        &self.ps
    }

    pub fn hstar_values(&self) -> &[f64] {
        &self.hstar
    }

    pub fn psi_values(&self) -> Vec<f64> {
        self.ps.iter().zip(&self.hstar).map(|(p, h)| (h / p).exp()).collect()
    }

    pub fn p_max(&self) -> f64 {
        *self.ps.last().expect("non-empty grid")
    }

    /// Extends the grid geometrically up to `p_max`.
    pub fn extend_to(&mut self, p_max: f64) -> Result<()> {
        let cur = self.p_max();
        if p_max <= cur {
            return Ok(());
        }
        let more = geometric_grid(cur, p_max);
        let vals = more[1..]
            .par_iter()
            .map(|&p| young_fenchel(&self.phi, p, DEFAULT_TOL))
            .collect::<Result<Vec<_>>>()?;
        self.ps.extend_from_slice(&more[1..]);
        self.hstar.extend(vals);
        Ok(())
    }

    /// Exact `ψ(p)`, independent of the grid.
    pub fn psi(&self, p: f64) -> Result<f64> {
        psi(&self.phi, p)
    }

    /// `ψ(p)` interpolated linearly in `(ln p, ln ψ)` inside the grid, exact
    /// outside it.
    pub fn psi_interpolated(&self, p: f64) -> Result<f64> {
        let (lo, hi) = (self.ps[0], self.p_max());
        if !(p >= lo && p <= hi) {
            return self.psi(p);
        }
        let k = self.ps.partition_point(|q| *q <= p).clamp(1, self.ps.len() - 1);
        let (p0, p1) = (self.ps[k - 1], self.ps[k]);
        let (l0, l1) = (self.hstar[k - 1] / p0, self.hstar[k] / p1);
        let t = (p / p0).ln() / (p1 / p0).ln();
        Ok((l0 + t * (l1 - l0)).exp())
    }

    /// Smallest change of consecutive chord slopes of `h*` on the grid;
    /// nonnegative up to rounding for a convex `h*`.
    pub fn min_slope_increment(&self) -> f64 {
        let slopes: Vec<f64> = self
            .ps
            .windows(2)
            .zip(self.hstar.windows(2))
            .map(|(p, h)| (h[1] - h[0]) / (p[1] - p[0]))
            .collect();
        slopes.windows(2).map(|s| s[1] - s[0]).fold(f64::INFINITY, f64::min)
    }
}

/// `h**(y) = sup_p (p y - h*(p))`, maximized over `ln p` between
/// `h'(y - 2)` and `h'(y + 2)`, which enclose the maximizer `h'(y)`.
pub fn biconjugate(phi: &PhiSpec, y: f64) -> Result<f64> {
    let a = phi.h_prime(y - 2.0)?;
    let b = phi.h_prime(y + 2.0)?;
    if !(a > 0.0 && b.is_finite()) {
        return Err(Error::Range(format!("biconjugate needs 0 < h' < inf around y = {y}")));
    }
    let q = |p: f64| -> Result<f64> { Ok(p * y - young_fenchel(phi, p, DEFAULT_TOL)?) };
    if b - a <= 1e-12 * b {
        return q(0.5 * (a + b));
    }
    let (_, v) = golden_max(|t: f64| q(t.exp()), a.ln(), b.ln(), 1e-11, 200)?;
    Ok(v)
}

/// Largest `|h**(y) - h(y)| / max(|h(y)|, 1e-300)` over `ys`.
pub fn fenchel_moreau_check(phi: &PhiSpec, ys: &[f64]) -> Result<f64> {
    let devs = ys
        .par_iter()
        .map(|&y| {
            let h = phi.h(y)?;
            let hh = biconjugate(phi, y)?;
            Ok((hh - h).abs() / h.abs().max(1e-300))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}
