//! Function classes: algebraic, trigonometric and rational polynomials,
//! generalized algebraic polynomials (GAP) and sampled functions.

mod gap;
mod jacobi;
mod polynomial;
mod random;
mod rational;
mod sampled;
mod text;
mod trig;

use crate::error::{Error, Result};
use crate::measure::{Domain, Evaluable};

pub use gap::{GapFactor, GapRep};
pub use jacobi::jacobi22;
pub use polynomial::PolynomialRep;
pub use random::{random_family, FunctionKind};
pub use rational::{check_no_poles, PoleCheck, RationalRep};
pub use sampled::SampledRep;
pub use trig::TrigPolynomialRep;

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionRep {
    Polynomial(PolynomialRep),
    Trig(TrigPolynomialRep),
    Rational(RationalRep),
    Gap(GapRep),
    Sampled(SampledRep),
}

impl FunctionRep {
    pub fn kind_name(&self) -> &'static str {
        match self {
            FunctionRep::Polynomial(_) => "polynomial",
            FunctionRep::Trig(_) => "trig",
            FunctionRep::Rational(_) => "rational",
            FunctionRep::Gap(_) => "gap",
            FunctionRep::Sampled(_) => "sampled",
        }
    }

    pub fn try_eval(&self, x: f64) -> Result<f64> {
        Ok(match self {
            FunctionRep::Polynomial(p) => p.eval(x),
            FunctionRep::Trig(t) => t.eval(x),
            FunctionRep::Rational(r) => return r.try_eval(x),
            FunctionRep::Gap(g) => g.eval(x),
            FunctionRep::Sampled(s) => s.eval(x),
        })
    }

    /// Degree in the sense of the representation's class. GAP degrees are
    /// real; the zero polynomial and sampled functions have none.
    pub fn degree(&self) -> Option<f64> {
        match self {
            FunctionRep::Polynomial(p) => p.degree().map(|d| d as f64),
            FunctionRep::Trig(t) => t.degree().map(|d| d as f64),
            FunctionRep::Rational(r) => Some(r.degree() as f64),
            FunctionRep::Gap(g) => Some(g.degree()),
            FunctionRep::Sampled(_) => None,
        }
    }

    /// Exact `r`-th derivative within the same family.
    pub fn derivative(&self, r: usize) -> Result<FunctionRep> {
        if r == 0 {
            return Err(Error::Range("derivative order must be >= 1".into()));
        }
        match self {
            FunctionRep::Polynomial(p) => Ok(FunctionRep::Polynomial(p.derivative_n(r)?)),
            FunctionRep::Trig(t) => {
                let mut q = t.clone();
                for _ in 0..r {
                    q = q.derivative()?;
                }
                Ok(FunctionRep::Trig(q))
            }
            FunctionRep::Rational(q) => Ok(FunctionRep::Rational(q.derivative_n(r)?)),
            FunctionRep::Gap(_) => Err(Error::Unsupported(
                "the derivative of a GAP is not a GAP; use derivative_fn".into(),
            )),
            FunctionRep::Sampled(_) => Err(Error::Unsupported("sampled functions have no exact derivative".into())),
        }
    }

    /// `r`-th derivative as an evaluable function. GAPs support `r = 1`
    /// through logarithmic differentiation.
    pub fn derivative_fn(&self, r: usize) -> Result<Derivative> {
        match self {
            FunctionRep::Gap(g) if r == 1 => Ok(Derivative::Gap(g.clone())),
            FunctionRep::Gap(_) => Err(Error::Unsupported("GAP derivatives are available for r = 1 only".into())),
            other => Ok(Derivative::Rep(other.derivative(r)?)),
        }
    }

    pub fn scale(&self, s: f64) -> Result<FunctionRep> {
        Ok(match self {
            FunctionRep::Polynomial(p) => FunctionRep::Polynomial(p.scale(s)),
            FunctionRep::Trig(t) => FunctionRep::Trig(t.scale(s)),
            FunctionRep::Rational(r) => FunctionRep::Rational(r.scale(s)),
            FunctionRep::Sampled(x) => {
                let (xs, ys): (Vec<f64>, Vec<f64>) = x.points().map(|(a, b)| (a, b * s)).unzip();
                FunctionRep::Sampled(SampledRep::new(x.domain(), xs, ys)?)
            }
            FunctionRep::Gap(_) => return Err(Error::Unsupported("GAPs are not closed under scaling".into())),
        })
    }
}

impl Evaluable for FunctionRep {
    /// Pole-proximity failures evaluate to NaN, which the integrators
    /// report as a non-finite evaluation at that abscissa.
    fn eval(&self, x: f64) -> f64 {
        self.try_eval(x).unwrap_or(f64::NAN)
    }

    fn domain(&self) -> Domain {
        match self {
            FunctionRep::Trig(_) => Domain::Circle,
            FunctionRep::Sampled(s) => s.domain(),
            _ => Domain::Interval,
        }
    }
}

/// Evaluable derivative of a [`FunctionRep`].
#[derive(Debug, Clone, PartialEq)]
pub enum Derivative {
    Rep(FunctionRep),
    Gap(GapRep),
}

impl Evaluable for Derivative {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Derivative::Rep(r) => r.eval(x),
            Derivative::Gap(g) => g.derivative_at(x),
        }
    }

    fn domain(&self) -> Domain {
        match self {
            Derivative::Rep(r) => r.domain(),
            Derivative::Gap(_) => Domain::Interval,
        }
    }
}
