use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type PhiFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied generator.
#[derive(Clone)]
pub enum CustomPhi {
    Closure(PhiFn),
    /// Points `(z_i, φ_i)` starting at `(0, 0)`, interpolated linearly and
    /// extended past the last point with the last slope.
    Table(Vec<(f64, f64)>),
}

impl fmt::Debug for CustomPhi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CustomPhi::Closure(_) => f.write_str("Closure(..)"),
            CustomPhi::Table(t) => f.debug_tuple("Table").field(t).finish(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum PhiFamily {
    /// `φ(z) = z^m ln^{-mr}(e^{m+|r|} + z)`
    PowerLog { m: f64, r: f64 },
    /// `φ(z) = ln^{1+ν}(1 + z)`
    LogPower { nu: f64 },
    Custom { name: String, phi: CustomPhi },
}

/// An Orlicz generator `φ` together with `h(y) = φ(eʸ)`.
#[derive(Debug, Clone)]
pub struct PhiSpec {
    family: PhiFamily,
}

fn softplus(y: f64) -> f64 {
    if y > 0.0 {
        y + (-y).exp().ln_1p()
    } else {
        y.exp().ln_1p()
    }
}

/// `ln(eᵃ + eᵇ)`.
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

impl PhiSpec {
    pub fn power_log(m: f64, r: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite() && r.is_finite()) {
            return Err(Error::Range(format!("power-log family needs m > 0 and finite r, got m = {m}, r = {r}")));
        }
        Ok(Self {
            family: PhiFamily::PowerLog { m, r },
        })
    }

    /// `φ_{m,0}(z) = z^m`.
    pub fn power(m: f64) -> Result<Self> {
        Self::power_log(m, 0.0)
    }

    /// `ν = 0` is accepted so that the boundary case `ln(1+z)` can be
    /// examined; it fails the membership check.
    pub fn log_power(nu: f64) -> Result<Self> {
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(Error::Range(format!("log-power family needs nu >= 0, got {nu}")));
        }
        Ok(Self {
            family: PhiFamily::LogPower { nu },
        })
    }

    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(name: impl Into<String>, f: F) -> Self {
        Self {
            family: PhiFamily::Custom {
                name: name.into(),
                phi: CustomPhi::Closure(Arc::new(f)),
            },
        }
    }

    /// Tabulated `φ`, validated to start at `(0, 0)` and be strictly
    /// increasing and convex.
    pub fn tabulated(name: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Degenerate("tabulated phi needs at least two points".into()));
        }
        if points[0] != (0.0, 0.0) {
            return Err(Error::Range("tabulated phi must start at (0, 0)".into()));
        }
        if points.iter().any(|(z, v)| !z.is_finite() || !v.is_finite()) {
            return Err(Error::Range("tabulated phi has non-finite entries".into()));
        }
        let mut last_slope = 0.0;
        for w in points.windows(2) {
            let (dz, dv) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            if !(dz > 0.0) || !(dv > 0.0) {
                return Err(Error::Range("tabulated phi must be strictly increasing in z and phi".into()));
            }
            let slope = dv / dz;
            if slope < last_slope * (1.0 - 1e-12) {
                return Err(Error::Range(format!("tabulated phi is not convex near z = {}", w[0].0)));
            }
            last_slope = slope;
        }
        Ok(Self {
            family: PhiFamily::Custom {
                name: name.into(),
                phi: CustomPhi::Table(points),
            },
        })
    }

    pub fn family(&self) -> &PhiFamily {
        &self.family
    }

    /// Short identifier used in reports and error messages.
    pub fn name(&self) -> String {
        match &self.family {
            PhiFamily::PowerLog { m, r } => format!("power_log(m={m}, r={r})"),
            PhiFamily::LogPower { nu } => format!("log_power(nu={nu})"),
            PhiFamily::Custom { name, .. } => format!("custom({name})"),
        }
    }

    pub fn phi(&self, z: f64) -> Result<f64> {
        if !(z >= 0.0) {
            return Err(Error::Range(format!("phi is defined for z >= 0, got {z}")));
        }
        match &self.family {
            PhiFamily::Custom { phi, .. } => {
                let v = match phi {
                    CustomPhi::Closure(f) => f(z),
                    CustomPhi::Table(t) => table_eval(t, z),
                };
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Evaluation(format!("{} returned {v} at z = {z}", self.name())))
                }
            }
            _ => {
                if z == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(self.log_h(z.ln())?.exp())
                }
            }
        }
    }

    /// `ln h(y)`, finite far beyond the point where `h` overflows.
    pub fn log_h(&self, y: f64) -> Result<f64> {
        match &self.family {
            PhiFamily::PowerLog { m, r } => {
                let c = m + r.abs();
                let l = log_add_exp(c, y);
                Ok(m * y - m * r * l.ln())
            }
            PhiFamily::LogPower { nu } => Ok((1.0 + nu) * softplus(y).ln()),
            PhiFamily::Custom { .. } => Ok(self.h(y)?.ln()),
        }
    }

    /// `h(y) = φ(eʸ)`; `+∞` once the value exceeds the float range.
    pub fn h(&self, y: f64) -> Result<f64> {
        match &self.family {
            PhiFamily::Custom { .. } => {
                if y == f64::NEG_INFINITY {
                    return Ok(0.0);
                }
                self.phi(y.exp())
            }
            _ => Ok(self.log_h(y)?.exp()),
        }
    }

    /// `h'(y)`; analytic for the built-in families, a central difference
    /// for custom ones.
    pub fn h_prime(&self, y: f64) -> Result<f64> {
        match &self.family {
            PhiFamily::PowerLog { m, r } => {
                let c = m + r.abs();
                let l = log_add_exp(c, y);
                let w = logistic(y - c);
                let h = self.h(y)?;
                Ok(h * (m - m * r * w / l))
            }
            PhiFamily::LogPower { nu } => {
                let s = softplus(y);
                Ok((1.0 + nu) * s.powf(*nu) * logistic(y))
            }
            PhiFamily::Custom { .. } => {
                let d = 1e-5 * (1.0 + y.abs());
                Ok((self.h(y + d)? - self.h(y - d)?) / (2.0 * d))
            }
        }
    }
}

fn table_eval(t: &[(f64, f64)], z: f64) -> f64 {
    let k = t.partition_point(|(x, _)| *x <= z).clamp(1, t.len() - 1);
    let ((x0, y0), (x1, y1)) = (t[k - 1], t[k]);
    y0 + (y1 - y0) * (z - x0) / (x1 - x0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_examples() {
        let p1 = PhiSpec::power(1.0).unwrap();
        let p2 = PhiSpec::power(2.0).unwrap();
        assert!((p1.h(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((p2.h(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(p2.h(f64::NEG_INFINITY).unwrap(), 0.0);
        assert!(p2.h(-400.0).unwrap() < 1e-300);
        assert_eq!(PhiSpec::log_power(1.0).unwrap().h(-800.0).unwrap(), 0.0);
    }

    #[test]
    fn log_h_survives_overflow() {
        let p2 = PhiSpec::power(2.0).unwrap();
        assert_eq!(p2.h(400.0).unwrap(), f64::INFINITY);
        assert!((p2.log_h(400.0).unwrap() - 800.0).abs() < 1e-12);
    }

    #[test]
    fn power_log_matches_direct_formula() {
        let phi = PhiSpec::power_log(1.5, 0.7).unwrap();
        for z in [0.01f64, 1.0, 3.0, 50.0] {
            let c: f64 = 1.5 + 0.7;
            let want = z.powf(1.5) * (c.exp() + z).ln().powf(-1.5 * 0.7);
            assert!((phi.phi(z).unwrap() / want - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for phi in [
            PhiSpec::power_log(2.0, 0.5).unwrap(),
            PhiSpec::power_log(1.0, -1.0).unwrap(),
            PhiSpec::log_power(0.5).unwrap(),
        ] {
            for y in [-3.0, 0.0, 1.5, 4.0] {
                let d = 1e-6;
                let fd = (phi.h(y + d).unwrap() - phi.h(y - d).unwrap()) / (2.0 * d);
                let an = phi.h_prime(y).unwrap();
                assert!((an - fd).abs() < 1e-6 * (1.0 + fd.abs()), "{} at {y}", phi.name());
            }
        }
    }

    #[test]
    fn tabulated_validation() {
        let ok = PhiSpec::tabulated("t", vec![(0.0, 0.0), (1.0, 1.0), (2.0, 4.0)]).unwrap();
        assert!((ok.phi(1.5).unwrap() - 2.5).abs() < 1e-15);
        assert!((ok.phi(3.0).unwrap() - 7.0).abs() < 1e-15);
        assert!(PhiSpec::tabulated("t", vec![(0.0, 0.0), (1.0, 2.0), (2.0, 3.0)]).is_err());
        assert!(PhiSpec::tabulated("t", vec![(0.0, 0.0), (1.0, 1.0), (0.5, 2.0)]).is_err());
        assert!(PhiSpec::tabulated("t", vec![(0.5, 0.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn custom_non_finite_is_an_error() {
        let bad = PhiSpec::custom("bad", |z| if z > 1.0 { f64::NAN } else { z });
        assert!(matches!(bad.h(1.0), Err(Error::Evaluation(_))));
    }
}
