use crate::error::{Error, Result};
use crate::measure::Domain;

/// Piecewise-linear interpolant of `(x, y)` samples spanning the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledRep {
    domain: Domain,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl SampledRep {
    pub fn new(domain: Domain, xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::Degenerate("sampled function needs at least two (x, y) pairs".into()));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Degenerate("sample abscissae must be strictly increasing".into()));
        }
        let (a, b) = domain.bounds();
        if xs[0] != a || xs[xs.len() - 1] != b {
            return Err(Error::Range(format!("samples must span the domain [{a}, {b}] exactly")));
        }
        if let Some(i) = ys.iter().position(|y| !y.is_finite()) {
            return Err(Error::NonFiniteEvaluation { x: xs[i] });
        }
        Ok(Self { domain, xs, ys })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|v| *v <= x).clamp(1, self.xs.len() - 1);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (y0, y1) = (self.ys[k - 1], self.ys[k]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_linearly() {
        let s = SampledRep::new(Domain::Interval, vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(s.eval(-0.5), 0.5);
        assert_eq!(s.eval(1.0), 1.0);
        assert_eq!(s.eval(0.25), 0.25);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(SampledRep::new(Domain::Interval, vec![-1.0, 0.5], vec![0.0, 0.0]).is_err());
        assert!(SampledRep::new(Domain::Interval, vec![-1.0, 1.0, 0.0], vec![0.0; 3]).is_err());
        assert!(SampledRep::new(Domain::Interval, vec![-1.0, 1.0], vec![0.0, f64::NAN]).is_err());
    }
}
