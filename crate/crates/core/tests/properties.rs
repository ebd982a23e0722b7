use approx::assert_relative_eq;
use proptest::prelude::*;

use markov_orlicz::function::{FunctionRep, GapFactor, GapRep, PolynomialRep, RationalRep, TrigPolynomialRep};
use markov_orlicz::harness::{bernstein_trig_check, markov_ratio};
use markov_orlicz::measure::{distribution, lp_quasinorm, QuadratureConfig, Scaled};
use markov_orlicz::norms::{construct_n, g_norm, lorentz_norm, luxemburg_norm, LorentzIndex, NormSpec};
use markov_orlicz::transform::{psi, ConjugateCache, PhiSpec};

fn poly() -> impl Strategy<Value = PolynomialRep> {
    prop::collection::vec(-1.0f64..1.0, 2..8)
        .prop_filter("nonzero leading coefficient", |c| c.last().unwrap().abs() > 0.05)
        .prop_map(PolynomialRep::new)
}

fn trig() -> impl Strategy<Value = TrigPolynomialRep> {
    (1usize..6).prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0f64..1.0, n + 1),
            prop::collection::vec(-1.0f64..1.0, n + 1),
        )
            .prop_filter("degree n", |(c, s)| c[c.len() - 1].hypot(s[s.len() - 1]) > 0.05)
            .prop_map(|(c, s)| TrigPolynomialRep::new(c, s).unwrap())
    })
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn lp_is_homogeneous(q in poly(), c in 0.01f64..100.0, p in 0.5f64..8.0) {
        let f = FunctionRep::Polynomial(q);
        let g = Scaled { factor: -c, inner: &f };
        let a = lp_quasinorm(&g, p, &cfg()).unwrap();
        let b = lp_quasinorm(&f, p, &cfg()).unwrap();
        prop_assert!((a / (c * b) - 1.0).abs() < 1e-8, "{a} vs {c}·{b}");
    }

    #[test]
    fn lp_is_monotone_in_p(q in poly(), p in 0.5f64..6.0, dp in 0.1f64..6.0) {
        let f = FunctionRep::Polynomial(q);
        let lo = lp_quasinorm(&f, p, &cfg()).unwrap();
        let hi = lp_quasinorm(&f, p + dp, &cfg()).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-10), "‖f‖_{p} = {lo} > ‖f‖_{} = {hi}", p + dp);
    }

    #[test]
    fn chebyshev_inequality(q in poly(), p in 1.0f64..6.0, frac in 0.05f64..0.95) {
        let f = FunctionRep::Polynomial(q);
        let norm = lp_quasinorm(&f, p, &cfg()).unwrap();
        let w = frac * 2.0 * norm;
        let t = distribution(&f, w).unwrap();
        prop_assert!(w.powf(p) * t <= norm.powf(p) * (1.0 + 1e-9));
    }

    #[test]
    fn layer_cake_matches_lp(q in poly(), p in 1.0f64..6.0) {
        let f = FunctionRep::Polynomial(q);
        let a = lorentz_norm(&f, p, LorentzIndex::EqualsP, &cfg()).unwrap();
        let b = lp_quasinorm(&f, p, &cfg()).unwrap();
        prop_assert!((a / b - 1.0).abs() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn derivative_lowers_degree(q in poly()) {
        let d = q.degree().unwrap();
        prop_assert_eq!(q.derivative().unwrap().degree(), if d == 0 { None } else { Some(d - 1) });
    }

    #[test]
    fn bernstein_holds_for_trig(q in trig(), p in prop::sample::select(vec![1.0, 2.0, 4.0])) {
        for norm in [NormSpec::Lp(p), NormSpec::Sup] {
            let c = bernstein_trig_check(&q, &norm, &cfg()).unwrap();
            prop_assert!(c.holds, "margin {}", c.margin);
        }
    }

    #[test]
    fn gap_degree_is_additive(
        a in prop::collection::vec((-2.0f64..2.0, -1.0f64..1.0, 1.0f64..3.0), 1..4),
        b in prop::collection::vec((-2.0f64..2.0, -1.0f64..1.0, 1.0f64..3.0), 1..4),
        k in 1usize..5,
    ) {
        let make = |v: &[(f64, f64, f64)]| {
            GapRep::new(v.iter().map(|&(re, im, exponent)| GapFactor { re, im, exponent }).collect()).unwrap()
        };
        let (ga, gb) = (make(&a), make(&b));
        prop_assert!((ga.concat(&gb).degree() - ga.degree() - gb.degree()).abs() < 1e-12);
        prop_assert!((ga.repeat(k).degree() - k as f64 * ga.degree()).abs() < 1e-12);
        let x = 0.37;
        prop_assert!((ga.concat(&gb).eval(x) - ga.eval(x) * gb.eval(x)).abs() <= 1e-12 * (1.0 + ga.eval(x) * gb.eval(x)));
    }

    #[test]
    fn rational_derivative_degree_and_value(num in poly(), a in 0.1f64..2.0, r in 1usize..4) {
        // den = x² + a has no real zeros
        let q = RationalRep::new(num, PolynomialRep::new(vec![a, 0.0, 1.0])).unwrap();
        let d = q.derivative_n(r).unwrap();
        prop_assert!(d.degree() <= (r + 1) * q.degree());
        if r == 1 {
            let (x, h) = (0.3, 1e-5);
            let fd = (q.try_eval(x + h).unwrap() - q.try_eval(x - h).unwrap()) / (2.0 * h);
            let exact = d.try_eval(x).unwrap();
            prop_assert!((fd - exact).abs() <= 1e-5 * (1.0 + exact.abs()), "{fd} vs {exact}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn orlicz_norms_are_homogeneous(q in poly(), c in 0.05f64..20.0) {
        let phi = PhiSpec::power(2.0).unwrap();
        let n = construct_n(&phi).unwrap();
        let f = FunctionRep::Polynomial(q);
        let g = Scaled { factor: c, inner: &f };
        let lux = (luxemburg_norm(&g, &n, &cfg()).unwrap(), luxemburg_norm(&f, &n, &cfg()).unwrap());
        prop_assert!((lux.0 / (c * lux.1) - 1.0).abs() < 1e-8, "{lux:?}");
        let gn = (g_norm(&g, &phi, &cfg()).unwrap(), g_norm(&f, &phi, &cfg()).unwrap());
        prop_assert!((gn.0 / (c * gn.1) - 1.0).abs() < 1e-8, "{gn:?}");
    }

    #[test]
    fn markov_ratio_is_scale_invariant(q in poly(), c in 0.05f64..20.0) {
        let phi = PhiSpec::power(2.0).unwrap();
        let f = FunctionRep::Polynomial(q.clone());
        let g = FunctionRep::Polynomial(q.scale(c));
        for norm in [NormSpec::Lp(3.0), NormSpec::G(phi.clone())] {
            let a = markov_ratio(&f, &norm, &cfg()).unwrap();
            let b = markov_ratio(&g, &norm, &cfg()).unwrap();
            prop_assert!((a / b - 1.0).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn psi_is_nondecreasing(m in 0.5f64..4.0, r in 0.0f64..2.0, p in 0.5f64..30.0, dp in 0.1f64..10.0) {
        let phi = PhiSpec::power_log(m, r).unwrap();
        let a = psi(&phi, p).unwrap();
        let b = psi(&phi, p + dp).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-9), "ψ({p}) = {a} > ψ({}) = {b}", p + dp);
    }
}

#[test]
fn hstar_is_convex_on_the_grid() {
    for phi in [
        PhiSpec::power(2.0).unwrap(),
        PhiSpec::power_log(1.0, 1.0).unwrap(),
        PhiSpec::log_power(1.0).unwrap(),
    ] {
        let cache = ConjugateCache::standard(&phi).unwrap();
        let (p, h) = (cache.grid(), cache.hstar_values());
        for i in 1..p.len() - 1 {
            let left = (h[i] - h[i - 1]) / (p[i] - p[i - 1]);
            let right = (h[i + 1] - h[i]) / (p[i + 1] - p[i]);
            assert!(
                right >= left - 1e-6 * (1.0 + left.abs()),
                "{}: slope drops at p = {}: {left} -> {right}",
                phi.name(),
                p[i]
            );
        }
    }
}

#[test]
fn sine_attains_bernstein_equality() {
    for n in [1, 4, 9] {
        let q = TrigPolynomialRep::sine(n);
        let c = bernstein_trig_check(&q, &NormSpec::Lp(2.0), &cfg()).unwrap();
        assert_relative_eq!(c.norm_dq, n as f64 * c.norm_q, max_relative = 1e-10);
    }
}
