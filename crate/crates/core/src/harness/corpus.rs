use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::function::{jacobi22, random_family, FunctionKind, FunctionRep, PolynomialRep};
use crate::measure::QuadratureConfig;
use crate::norms::{
    equivalence_constants, g_norm, g_norm_from, luxemburg_norm, weighted_lorentz_g, EquivalenceConstants, LorentzIndex,
    OrliczN,
};
use crate::transform::{psi, PhiSpec};

/// Seed of the default corpus.
pub const CORPUS_SEED: u64 = 2718;
/// Relative slack on the lower equivalence inequality. For constants the
/// lower side is an equality when `C₃ = 1`.
pub const LOWER_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusMember {
    pub label: String,
    pub rep: FunctionRep,
}

fn member(label: String, rep: FunctionRep) -> CorpusMember {
    CorpusMember { label, rep }
}

/// Twenty random polynomials of degrees 1 to 30, the Chebyshev and Jacobi
/// polynomials of degrees 2, 5, 10, 20, 30, and ten each of random GAP,
/// pole-free rational and trigonometric functions.
pub fn standard_corpus(seed: u64) -> Result<Vec<CorpusMember>> {
    let mut out = Vec::with_capacity(60);
    for i in 0..20u64 {
        let d = 1 + (i as usize * 29) / 19;
        out.push(member(
            format!("poly-{i}-deg{d}"),
            random_family(FunctionKind::Polynomial, d, seed.wrapping_add(i)),
        ));
    }
    for d in [2, 5, 10, 20, 30] {
        out.push(member(format!("chebyshev-{d}"), FunctionRep::Polynomial(PolynomialRep::chebyshev(d))));
    }
    for d in [2, 5, 10, 20, 30] {
        out.push(member(format!("jacobi22-{d}"), FunctionRep::Polynomial(jacobi22(d)?)));
    }
    for (kind, tag) in [
        (FunctionKind::Gap, "gap"),
        (FunctionKind::Rational, "rational"),
        (FunctionKind::Trig, "trig"),
    ] {
        for i in 0..10u64 {
            let d = 1 + i as usize;
            out.push(member(
                format!("{tag}-{i}-deg{d}"),
                random_family(kind, d, seed.wrapping_add(100 + i)),
            ));
        }
    }
    Ok(out)
}

/// The polynomial members of [`standard_corpus`].
pub fn polynomial_corpus(seed: u64) -> Result<Vec<CorpusMember>> {
    Ok(standard_corpus(seed)?
        .into_iter()
        .filter(|m| matches!(m.rep, FunctionRep::Polynomial(_)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceEntry {
    pub label: String,
    pub b: f64,
    pub g: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// Upper check with `C₄` replaced by `e² C₄`.
    pub upper_ok_substituted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub phi: String,
    pub constants: EquivalenceConstants,
    pub entries: Vec<EquivalenceEntry>,
    pub lower_violations: usize,
    pub upper_violations: usize,
    /// Whether `e² C₄` had to stand in for `C₄`.
    pub substitution_used: bool,
    /// Upper violations left after the substitution.
    pub violations_after_substitution: usize,
    /// `min` and `max` of `B / G` over the corpus: the empirical constant pair.
    pub ratio_min: f64,
    pub ratio_max: f64,
}

impl EquivalenceReport {
    pub fn passes(&self) -> bool {
        self.lower_violations == 0 && self.violations_after_substitution == 0
    }
}

/// `C₃⁻¹ ‖f‖G ≤ ‖f‖B ≤ C₄ ‖f‖G` over a corpus.
pub fn equivalence_check(n: &OrliczN, corpus: &[CorpusMember], cfg: &QuadratureConfig) -> Result<EquivalenceReport> {
    let consts = equivalence_constants(n)?;
    let values: Vec<Result<(f64, f64)>> = corpus
        .par_iter()
        .map(|m| Ok((luxemburg_norm(&m.rep, n, cfg)?, g_norm(&m.rep, n.phi(), cfg)?)))
        .collect();
    let mut entries = Vec::with_capacity(corpus.len());
    for (m, v) in corpus.iter().zip(values) {
        let (b, g) = v?;
        let upper = |log_c4: f64| b.ln() <= log_c4 + g.ln();
        entries.push(EquivalenceEntry {
            label: m.label.clone(),
            b,
            g,
            lower_ok: g / consts.c3 <= b * (1.0 + LOWER_SLACK),
            upper_ok: upper(consts.log_c4),
            upper_ok_substituted: upper(consts.log_c4 + 2.0),
        });
    }
    let lower_violations = entries.iter().filter(|e| !e.lower_ok).count();
    let upper_violations = entries.iter().filter(|e| !e.upper_ok).count();
    let substitution_used = upper_violations > 0;
    let violations_after_substitution = if substitution_used {
        entries.iter().filter(|e| !e.upper_ok_substituted).count()
    } else {
        0
    };
    let ratios = entries.iter().map(|e| e.b / e.g);
    let ratio_min = ratios.clone().fold(f64::INFINITY, f64::min);
    let ratio_max = ratios.fold(0.0, f64::max);
    Ok(EquivalenceReport {
        phi: n.phi().name(),
        constants: consts,
        entries,
        lower_violations,
        upper_violations,
        substitution_used,
        violations_after_substitution,
        ratio_min,
        ratio_max,
    })
}

/// The sandwich `S ≤ ‖f‖G ≤ c · S` with `S = sup_{p >= 4} ‖f‖_p / ψ(p)`,
/// for the literal factor `max(1, ψ(4))` and for `max(1, ψ(4)/ψ(1))`, which
/// follows from Lyapunov's inequality and monotonicity of `ψ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JensenLyapunovEntry {
    pub label: String,
    pub g: f64,
    pub sup_from_4: f64,
    pub lower_ok: bool,
    pub literal_ok: bool,
    pub corrected_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JensenLyapunovReport {
    pub phi: String,
    pub literal_factor: f64,
    pub corrected_factor: f64,
    pub entries: Vec<JensenLyapunovEntry>,
}

pub fn jensen_lyapunov(phi: &PhiSpec, corpus: &[CorpusMember], cfg: &QuadratureConfig) -> Result<JensenLyapunovReport> {
    let psi4 = psi(phi, 4.0)?;
    let literal_factor = psi4.max(1.0);
    let corrected_factor = (psi4 / psi(phi, 1.0)?).max(1.0);
    let rel = 1.0 + 1e-8;
    let entries = corpus
        .par_iter()
        .map(|m| {
            let g = g_norm(&m.rep, phi, cfg)?;
            let s = g_norm_from(&m.rep, phi, 4.0, cfg)?.value;
            Ok(JensenLyapunovEntry {
                label: m.label.clone(),
                g,
                sup_from_4: s,
                lower_ok: s <= g * rel,
                literal_ok: g <= literal_factor * s * rel,
                corrected_ok: g <= corrected_factor * s * rel,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JensenLyapunovReport {
        phi: phi.name(),
        literal_factor,
        corrected_factor,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeWayEntry {
    pub label: String,
    pub b: f64,
    pub g: f64,
    /// `G*_b` for `b = 1, 2, ∞`.
    pub g_star: [f64; 3],
}

/// Pairwise ratio ranges among `B`, `G` and `G*_b`, `b ∈ {1, 2, ∞}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeWayReport {
    pub phi: String,
    pub names: Vec<String>,
    pub entries: Vec<ThreeWayEntry>,
    /// `(i, j, min, max)` of norm `i` over norm `j`.
    pub ratio_ranges: Vec<(usize, usize, f64, f64)>,
}

impl ThreeWayReport {
    /// Every pairwise ratio range is finite and positive.
    pub fn bounded(&self) -> bool {
        self.ratio_ranges
            .iter()
            .all(|(_, _, lo, hi)| *lo > 0.0 && hi.is_finite())
    }
}

pub fn three_way_equivalence(n: &OrliczN, corpus: &[CorpusMember], cfg: &QuadratureConfig) -> Result<ThreeWayReport> {
    let phi = n.phi();
    let bs = [LorentzIndex::Finite(1.0), LorentzIndex::Finite(2.0), LorentzIndex::Infinite];
    let entries = corpus
        .par_iter()
        .map(|m| {
            let mut g_star = [0.0; 3];
            for (slot, b) in g_star.iter_mut().zip(bs) {
                *slot = weighted_lorentz_g(&m.rep, phi, b, cfg)?;
            }
            Ok(ThreeWayEntry {
                label: m.label.clone(),
                b: luxemburg_norm(&m.rep, n, cfg)?,
                g: g_norm(&m.rep, phi, cfg)?,
                g_star,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let col = |e: &ThreeWayEntry, i: usize| match i {
        0 => e.b,
        1 => e.g,
        k => e.g_star[k - 2],
    };
    let mut ratio_ranges = Vec::new();
    for i in 0..5 {
        for j in (i + 1)..5 {
            let rs = entries.iter().map(|e| col(e, i) / col(e, j));
            let lo = rs.clone().fold(f64::INFINITY, f64::min);
            let hi = rs.fold(0.0, f64::max);
            ratio_ranges.push((i, j, lo, hi));
        }
    }
    Ok(ThreeWayReport {
        phi: phi.name(),
        names: ["B", "G", "G*_1", "G*_2", "G*_inf"].iter().map(|s| s.to_string()).collect(),
        entries,
        ratio_ranges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::construct_n;

    #[test]
    fn corpus_shape() {
        let c = standard_corpus(CORPUS_SEED).unwrap();
        assert_eq!(c.len(), 60);
        let degs: Vec<f64> = c[..20].iter().map(|m| m.rep.degree().unwrap()).collect();
        assert_eq!(degs[0], 1.0);
        assert_eq!(degs[19], 30.0);
        assert!(c.iter().all(|m| m.rep.degree().unwrap() <= 30.0));
        assert_eq!(polynomial_corpus(CORPUS_SEED).unwrap().len(), 30);
        assert_eq!(standard_corpus(CORPUS_SEED).unwrap(), c);
    }

    #[test]
    fn jensen_lyapunov_literal_factor_fails_for_constants() {
        // ‖1‖G = 1/ψ(1) while the literal upper side is max(1, ψ(4)) / ψ(4)
        let cfg = QuadratureConfig::default();
        let phi = PhiSpec::power(2.0).unwrap();
        let one = vec![member("one".into(), FunctionRep::Polynomial(PolynomialRep::constant(1.0)))];
        let rep = jensen_lyapunov(&phi, &one, &cfg).unwrap();
        let e = &rep.entries[0];
        assert!((e.g - 2.331_643_981).abs() < 1e-6);
        assert!(!e.literal_ok);
        assert!(e.corrected_ok && e.lower_ok);
        // ψ(p) = (p/2)^{1/2} e^{-1/2}, so ψ(4)/ψ(1) = 2
        assert!((rep.corrected_factor - 2.0).abs() < 1e-8);
        assert!((e.sup_from_4 - 0.5f64.exp() / 2f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn equivalence_on_a_small_corpus() {
        let cfg = QuadratureConfig::default();
        let n = construct_n(&PhiSpec::power(2.0).unwrap()).unwrap();
        let corpus: Vec<CorpusMember> = standard_corpus(CORPUS_SEED).unwrap().into_iter().step_by(6).collect();
        let rep = equivalence_check(&n, &corpus, &cfg).unwrap();
        assert!(rep.passes(), "{rep:?}");
        assert!(rep.ratio_min > 0.0 && rep.ratio_max.is_finite());
        let three = three_way_equivalence(&n, &corpus[..4], &cfg).unwrap();
        assert!(three.bounded());
        assert_eq!(three.ratio_ranges.len(), 10);
    }
}
