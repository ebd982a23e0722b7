use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FunctionRep, GapFactor, GapRep, PolynomialRep, RationalRep, TrigPolynomialRep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    Polynomial,
    Trig,
    Rational,
    Gap,
}

impl std::str::FromStr for FunctionKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "polynomial" => Ok(Self::Polynomial),
            "trig" => Ok(Self::Trig),
            "rational" => Ok(Self::Rational),
            "gap" => Ok(Self::Gap),
            _ => Err(format!("unknown function kind {s:?} (expected polynomial, trig, rational or gap)")),
        }
    }
}

/// Uniform on `±[lo, hi]` with a random sign.
fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let v = rng.gen_range(lo..=hi);
    if rng.gen::<bool>() {
        v
    } else {
        -v
    }
}

fn coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut c: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    c[n] = signed(rng, 0.5, 1.0);
    c
}

/// Deterministic pseudorandom member of a class with exact degree `n`.
///
/// Rational denominators are products of `(x - c)² + d²` with `d >= 1/2`,
/// times `x - c` with `|c| >= 3/2` when `n` is odd, so they stay away from
/// zero on `[-1, 1]`. GAP factors have non-real roots.
pub fn random_family(kind: FunctionKind, n: usize, seed: u64) -> FunctionRep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ kind as u64);
    match kind {
        FunctionKind::Polynomial => FunctionRep::Polynomial(PolynomialRep::new(coeffs(&mut rng, n))),
        FunctionKind::Trig => {
            let mut a: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            a[n] = signed(&mut rng, 0.5, 1.0);
            FunctionRep::Trig(TrigPolynomialRep::new(a, b).expect("a0 present"))
        }
        FunctionKind::Rational => {
            let num = PolynomialRep::new(coeffs(&mut rng, n));
            let mut den = PolynomialRep::constant(1.0);
            for _ in 0..n / 2 {
                let c = rng.gen_range(-1.0..=1.0);
                let d: f64 = rng.gen_range(0.5..=1.5);
                let q = PolynomialRep::new(vec![c * c + d * d, -2.0 * c, 1.0]);
                den = den.mul(&q).expect("bounded coefficients");
            }
            if n % 2 == 1 {
                let c = signed(&mut rng, 1.5, 2.5);
                den = den.mul(&PolynomialRep::new(vec![-c, 1.0])).expect("bounded coefficients");
            }
            FunctionRep::Rational(RationalRep::new(num, den).expect("nonzero denominator"))
        }
        FunctionKind::Gap => {
            let k = (n / 2).max(1).min(n);
            let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..=1.0)).collect();
            let total: f64 = weights.iter().sum();
            let spare = (n - k) as f64;
            let mut factors = Vec::with_capacity(k);
            let mut used = 0.0;
            for (j, w) in weights.iter().enumerate() {
                let exponent = if j + 1 == k { n as f64 - used } else { 1.0 + spare * w / total };
                used += exponent;
                factors.push(GapFactor {
                    re: rng.gen_range(-1.2..=1.2),
                    im: signed(&mut rng, 0.05, 1.0),
                    exponent,
                });
            }
            FunctionRep::Gap(GapRep::new(factors).expect("exponents >= 1"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::check_no_poles;

    const KINDS: [FunctionKind; 4] = [
        FunctionKind::Polynomial,
        FunctionKind::Trig,
        FunctionKind::Rational,
        FunctionKind::Gap,
    ];

    #[test]
    fn exact_degree() {
        for kind in KINDS {
            for n in 0..25 {
                let f = random_family(kind, n, 7);
                let d = f.degree().unwrap();
                assert!((d - n as f64).abs() < 1e-12, "{kind:?} {n}: {d}");
            }
        }
    }

    #[test]
    fn constant_is_nonzero() {
        let FunctionRep::Polynomial(p) = random_family(FunctionKind::Polynomial, 0, 3) else {
            panic!()
        };
        assert!(p.coeffs()[0].abs() >= 0.5);
    }

    #[test]
    fn rational_members_have_no_poles() {
        for n in 0..30 {
            for seed in 0..5 {
                let FunctionRep::Rational(r) = random_family(FunctionKind::Rational, n, seed) else {
                    panic!()
                };
                assert!(check_no_poles(&r).ok, "n = {n}, seed = {seed}");
            }
        }
    }

    #[test]
    fn deterministic() {
        for kind in KINDS {
            assert_eq!(random_family(kind, 9, 42), random_family(kind, 9, 42));
        }
        assert_ne!(
            random_family(FunctionKind::Polynomial, 9, 1),
            random_family(FunctionKind::Polynomial, 9, 2)
        );
    }
}
