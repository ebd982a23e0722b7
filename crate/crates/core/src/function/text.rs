//! Text form used by configuration files:
//!
//! ```text
//! poly[-1, 0, 2]
//! trig[a0, a1, a2; b1, b2]
//! rational[n0, n1; d0, d1, d2]
//! gap[(0, 1, 1), (0.5, -0.2, 2.5)]
//! samples[interval; (-1, 0), (0, 1), (1, 0)]
//! ```
//!
//! Numbers are written in Rust's shortest round-trip form, so parsing the
//! output of `Display` reproduces every coefficient bit for bit.

use std::fmt;
use std::str::FromStr;

use super::{FunctionRep, GapFactor, GapRep, PolynomialRep, RationalRep, SampledRep, TrigPolynomialRep};
use crate::error::{Error, Result};
use crate::measure::Domain;

fn write_list(f: &mut fmt::Formatter<'_>, v: &[f64]) -> fmt::Result {
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{c:?}")?;
    }
    Ok(())
}

impl fmt::Display for FunctionRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionRep::Polynomial(p) => {
                f.write_str("poly[")?;
                write_list(f, p.coeffs())?;
            }
            FunctionRep::Trig(t) => {
                f.write_str("trig[")?;
                write_list(f, t.cos_coeffs())?;
                f.write_str("; ")?;
                write_list(f, t.sin_coeffs())?;
            }
            FunctionRep::Rational(r) => {
                f.write_str("rational[")?;
                write_list(f, r.num().coeffs())?;
                f.write_str("; ")?;
                write_list(f, r.den().coeffs())?;
            }
            FunctionRep::Gap(g) => {
                f.write_str("gap[")?;
                for (i, q) in g.factors().iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "({:?}, {:?}, {:?})", q.re, q.im, q.exponent)?;
                }
            }
            FunctionRep::Sampled(s) => {
                let d = match s.domain() {
                    Domain::Interval => "interval",
                    Domain::Circle => "circle",
                };
                write!(f, "samples[{d}")?;
                for (x, y) in s.points() {
                    write!(f, "; ({x:?}, {y:?})")?;
                }
            }
        }
        f.write_str("]")
    }
}

fn number(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid number {:?}", s.trim())))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite number {:?}", s.trim())));
    }
    Ok(v)
}

fn numbers(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(number).collect()
}

/// Contents of `( ... )` groups separated by commas.
fn tuples(s: &str) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(Error::Parse(format!("expected '(' at {rest:?}")));
        };
        let Some(close) = body.find(')') else {
            return Err(Error::Parse("unclosed '('".into()));
        };
        out.push(numbers(&body[..close])?);
        rest = body[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(Error::Parse("trailing ','".into()));
            }
        } else if !rest.is_empty() {
            return Err(Error::Parse(format!("expected ',' at {rest:?}")));
        }
    }
    Ok(out)
}

fn two_parts<'a>(kind: &str, body: &'a str) -> Result<(&'a str, &'a str)> {
    let mut parts = body.splitn(3, ';');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(Error::Parse(format!("{kind}[...] needs exactly two ';'-separated lists"))),
    }
}

impl FromStr for FunctionRep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s
            .find('[')
            .ok_or_else(|| Error::Parse(format!("expected kind[...], got {s:?}")))?;
        let body = s[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse("missing closing ']'".into()))?;
        let kind = s[..open].trim();
        match kind {
            "poly" => {
                let c = numbers(body)?;
                if c.is_empty() {
                    return Err(Error::Parse("poly[] needs at least one coefficient".into()));
                }
                Ok(FunctionRep::Polynomial(PolynomialRep::new(c)))
            }
            "trig" => {
                let (a, b) = match body.contains(';') {
                    true => two_parts(kind, body)?,
                    false => (body, ""),
                };
                Ok(FunctionRep::Trig(TrigPolynomialRep::new(numbers(a)?, numbers(b)?)?))
            }
            "rational" => {
                let (n, d) = two_parts(kind, body)?;
                Ok(FunctionRep::Rational(RationalRep::new(
                    PolynomialRep::new(numbers(n)?),
                    PolynomialRep::new(numbers(d)?),
                )?))
            }
            "gap" => {
                let factors = tuples(body)?
                    .into_iter()
                    .map(|t| match t[..] {
                        [re, im, exponent] => Ok(GapFactor { re, im, exponent }),
                        _ => Err(Error::Parse("gap factors are (re, im, exponent) triples".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(FunctionRep::Gap(GapRep::new(factors)?))
            }
            "samples" => {
                let (d, pts) = body.split_once(';').unwrap_or((body, ""));
                let domain = match d.trim() {
                    "interval" => Domain::Interval,
                    "circle" => Domain::Circle,
                    other => return Err(Error::Parse(format!("unknown domain {other:?}"))),
                };
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for t in tuples(&pts.replace(';', ","))? {
                    let [x, y] = t[..] else {
                        return Err(Error::Parse("samples are (x, y) pairs".into()));
                    };
                    xs.push(x);
                    ys.push(y);
                }
                Ok(FunctionRep::Sampled(SampledRep::new(domain, xs, ys)?))
            }
            other => Err(Error::Parse(format!(
                "unknown function kind {other:?} (expected poly, trig, rational, gap or samples)"
            ))),
        }
    }
}
