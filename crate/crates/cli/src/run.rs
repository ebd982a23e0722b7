//! Dispatch of a parsed experiment to the library.

use markov_orlicz::function::{random_family, FunctionRep, RationalRep};
use markov_orlicz::harness::{
    bernstein_trig_check, degree_scaled_rational, equivalence_check, extremal_search, jensen_lyapunov, k_constant,
    lp_rational_check, markov_sweep, rational_orlicz_check, standard_corpus, tail_check, tail_converse, MarkovBound,
    RationalCheck, SweepFamily, CORPUS_SEED,
};
use markov_orlicz::measure::{Domain, OnDomain};
use markov_orlicz::norms::{construct_n, equivalence_constants, NormSpec};
use markov_orlicz::transform::{fenchel_moreau_check, phi_membership_check, psi, ConjugateCache, PhiSpec};
use markov_orlicz::Error;
use serde_json::{json, Value};

use crate::config::{Command, ExperimentConfig, FunctionInput, NormKind, SweepFamilyKind};
use crate::report::{ReportEnvelope, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

struct Outcome {
    payload: Value,
    table: Table,
    violations: usize,
}

fn log(verbose: bool, msg: impl AsRef<str>) {
    if verbose {
        eprintln!("[markov-orlicz] {}", msg.as_ref());
    }
}

/// Runs the experiment. The exit code is 0 when every checked inequality
/// holds, 2 when one is violated and 1 when a computation failed; failed
/// runs still produce an envelope carrying the error.
pub fn run(cfg: &ExperimentConfig, verbose: bool) -> ReportEnvelope {
    log(verbose, format!("running {}", cfg.command.name()));
    let phi = cfg.phi.spec();
    let constants = phi.as_ref().ok().map_or(json!({}), constants_block);
    let result = phi.and_then(|phi| dispatch(cfg, &phi, verbose));
    match result {
        Ok(o) => {
            let code = if o.violations > 0 { EXIT_VIOLATION } else { EXIT_OK };
            log(verbose, format!("done: {} violation(s)", o.violations));
            ReportEnvelope::new(cfg, o.payload, constants, code, o.table)
        }
        Err(e) => {
            log(verbose, format!("error: {e}"));
            let mut payload = json!({ "error": e.to_string() });
            if let Error::PoleOnDomain { witness } = e {
                payload["pole_witness"] = json!(witness);
            }
            let mut table = Table::new(&["error"]);
            table.push(vec![e.to_string().into()]);
            ReportEnvelope::new(cfg, payload, constants, EXIT_ERROR, table)
        }
    }
}

/// `C₁, C₂, C₃, C₄, k₀, K(4), ψ(4)` where they exist for `φ`.
fn constants_block(phi: &PhiSpec) -> Value {
    let mut out = json!({ "phi": phi.name() });
    if let Ok(k4) = k_constant(4.0) {
        out["k4"] = json!(k4);
    }
    if let Ok(p4) = psi(phi, 4.0) {
        out["psi4"] = json!(p4);
    }
    if let Ok(n) = construct_n(phi) {
        out["c1"] = json!(n.c1());
        out["c2"] = json!(n.c2());
        if let Ok(c) = equivalence_constants(&n) {
            out["c3"] = json!(c.c3);
            out["k0"] = json!(c.k0);
            out["log_c4"] = json!(c.log_c4);
            out["c4"] = json!(c.c4);
            out["log_c4_shifted"] = json!(c.log_c4_shifted);
        }
    }
    out
}

fn norm_spec(cfg: &ExperimentConfig, phi: &PhiSpec) -> markov_orlicz::Result<NormSpec> {
    let n = &cfg.norm;
    Ok(match n.kind {
        NormKind::Lp => NormSpec::Lp(n.p),
        NormKind::Sup => NormSpec::Sup,
        NormKind::Orlicz => NormSpec::Luxemburg(construct_n(phi)?),
        NormKind::G => NormSpec::G(phi.clone()),
        NormKind::Lorentz => NormSpec::Lorentz { p: n.p, b: n.b },
        NormKind::WeightedLorentz => NormSpec::WeightedLorentz {
            phi: phi.clone(),
            b: n.b,
        },
        NormKind::V => NormSpec::V {
            phi: phi.clone(),
            r: n.r,
        },
    })
}

fn function_of(cfg: &ExperimentConfig, input: &FunctionInput) -> FunctionRep {
    match input {
        FunctionInput::Inline(f) => f.clone(),
        FunctionInput::Generator { kind, degree } => random_family(*kind, *degree, cfg.seed.unwrap_or(0)),
    }
}

fn dispatch(cfg: &ExperimentConfig, phi: &PhiSpec, verbose: bool) -> markov_orlicz::Result<Outcome> {
    let q = &cfg.quadrature;
    match cfg.command {
        Command::Norm => {
            let f = function_of(cfg, cfg.function.as_ref().expect("validated"));
            let spec = norm_spec(cfg, phi)?;
            let v = spec.evaluate(&f, q)?;
            let mut table = Table::new(&["norm_kind", "function", "value", "inner_maximizer_p"]);
            table.push(vec![
                spec.kind().into(),
                f.to_string().into(),
                v.value.into(),
                v.inner_maximizer_p.into(),
            ]);
            let mut violations = 0;
            // Bernstein holds in every norm here; check it for trigonometric input
            let mut bernstein = Value::Null;
            if let FunctionRep::Trig(t) = &f {
                if t.degree().is_some() {
                    let b = bernstein_trig_check(t, &spec, q)?;
                    violations += usize::from(!b.holds);
                    bernstein = json!(b);
                }
            }
            Ok(Outcome {
                payload: json!({
                    "norm_kind": spec.kind(),
                    "parameters": {
                        "phi": phi.name(),
                        "p": cfg.norm.p,
                        "b": cfg.norm.b,
                        "r": cfg.norm.r,
                    },
                    "function": f.to_string(),
                    "value": v.value,
                    "inner_maximizer_p": v.inner_maximizer_p,
                    "tolerance_met": true,
                    "bernstein": bernstein,
                }),
                table,
                violations,
            })
        }
        Command::Transform => {
            let membership = phi_membership_check(phi);
            let cache = ConjugateCache::standard(phi)?;
            let ys: Vec<f64> = (0..=50).map(|i| -2.0 + 0.1 * i as f64).collect();
            let fm = fenchel_moreau_check(phi, &ys)?;
            let mut table = Table::new(&["p", "hstar", "psi"]);
            let psis = cache.psi_values();
            for ((p, h), s) in cache.grid().iter().zip(cache.hstar_values()).zip(&psis) {
                table.push(vec![(*p).into(), (*h).into(), (*s).into()]);
            }
            Ok(Outcome {
                payload: json!({
                    "phi": phi.name(),
                    "membership": membership,
                    "p": cache.grid(),
                    "hstar": cache.hstar_values(),
                    "psi": psis,
                    "fenchel_moreau_max_deviation": fm,
                    "fenchel_moreau_range": [-2.0, 3.0],
                }),
                table,
                violations: usize::from(!membership.pass),
            })
        }
        Command::MarkovSweep => {
            let family = match cfg.sweep_family {
                SweepFamilyKind::Jacobi22 => SweepFamily::Jacobi22,
                SweepFamilyKind::Chebyshev => SweepFamily::Chebyshev,
                SweepFamilyKind::RandomPoly => SweepFamily::RandomPoly {
                    seed: cfg.seed.unwrap_or(0),
                },
            };
            let spec = norm_spec(cfg, phi)?;
            log(verbose, format!("sweep {} over {} degrees", family.tag(), cfg.sweep_n.len()));
            let mut rep = markov_sweep(phi, family, &cfg.sweep_n, &spec, q)?;
            if cfg.bound_scale != 1.0 {
                rep.rescale_bounds(cfg.bound_scale);
            }
            let slope = rep.fit.map(|f| f.slope);
            let mut table = Table::new(&["family", "phi", "n", "ratio", "bound", "margin", "slope"]);
            for e in &rep.entries {
                table.push(vec![
                    rep.family.clone().into(),
                    rep.phi.clone().into(),
                    e.n.into(),
                    e.ratio.into(),
                    e.bound.into(),
                    e.margin.into(),
                    slope.into(),
                ]);
            }
            Ok(Outcome {
                violations: rep.violations(),
                payload: json!({ "bound_scale": cfg.bound_scale, "report": rep }),
                table,
            })
        }
        Command::Equivalence => {
            let n = construct_n(phi)?;
            let corpus = standard_corpus(cfg.seed.unwrap_or(CORPUS_SEED))?;
            log(verbose, format!("equivalence over {} corpus members", corpus.len()));
            let rep = equivalence_check(&n, &corpus, q)?;
            let jl = jensen_lyapunov(phi, &corpus, q)?;
            let mut table = Table::new(&[
                "label",
                "b_norm",
                "g_norm",
                "ratio",
                "lower_ok",
                "upper_ok",
                "upper_ok_substituted",
            ]);
            for e in &rep.entries {
                table.push(vec![
                    e.label.clone().into(),
                    e.b.into(),
                    e.g.into(),
                    (e.b / e.g).into(),
                    e.lower_ok.into(),
                    e.upper_ok.into(),
                    e.upper_ok_substituted.into(),
                ]);
            }
            let violations = rep.lower_violations + rep.violations_after_substitution;
            Ok(Outcome {
                payload: json!({
                    "corpus_seed": cfg.seed.unwrap_or(CORPUS_SEED),
                    "equivalence": rep,
                    "c4_substitution": if rep.substitution_used { "e^2 * C4" } else { "none" },
                    "jensen_lyapunov": jl,
                }),
                table,
                violations,
            })
        }
        Command::Rational => rational(cfg, phi),
        Command::Tail => {
            let t = &cfg.tail;
            let (label, f): (String, Box<dyn Fn(f64) -> f64 + Sync>) = match (t.s, &cfg.function) {
                (Some(s), _) => {
                    let a = t.r as f64 * s;
                    (format!("(1-x)^(-{a})"), Box::new(move |x: f64| (1.0 - x).powf(-a)))
                }
                (None, Some(input)) => {
                    let rep = function_of(cfg, input);
                    (rep.to_string(), Box::new(move |x: f64| rep.try_eval(x).unwrap_or(f64::NAN)))
                }
                (None, None) => unreachable!("validated"),
            };
            let f = OnDomain::new(Domain::Interval, f);
            let forward = tail_check(&f, t.m, t.r, t.u_max, t.prefactor, q)?;
            let converse = tail_converse(&f, t.m, t.r, q)?;
            let mut table = Table::new(&["u", "measured", "model", "bound"]);
            for ((u, m), b) in forward.u.iter().zip(&forward.measured).zip(&forward.model) {
                table.push(vec![(*u).into(), (*m).into(), (*b).into(), (forward.tested_prefactor * b).into()]);
            }
            Ok(Outcome {
                violations: usize::from(forward.max_violation > 0.0),
                payload: json!({ "function": label, "forward": forward, "converse": converse }),
                table,
            })
        }
        Command::Extremal => {
            let spec = norm_spec(cfg, phi)?;
            let res = extremal_search(cfg.extremal_n, &spec, cfg.extremal_restarts, cfg.seed.unwrap_or(0), q)?;
            let bound = MarkovBound::new(phi)?;
            let log_bound = bound.log_bound(res.n) + cfg.bound_scale.ln();
            let holds = res.ratio.ln() <= log_bound;
            let mut table = Table::new(&["k", "chebyshev_coefficient"]);
            for (k, c) in res.chebyshev.iter().enumerate() {
                table.push(vec![k.into(), (*c).into()]);
            }
            Ok(Outcome {
                payload: json!({
                    "norm_kind": spec.kind(),
                    "result": res,
                    "log_bound": log_bound,
                    "bound_holds": holds,
                }),
                table,
                violations: usize::from(!holds),
            })
        }
    }
}

fn rational(cfg: &ExperimentConfig, phi: &PhiSpec) -> markov_orlicz::Result<Outcome> {
    let rc = &cfg.rational;
    let q = &cfg.quadrature;
    let mut members: Vec<(String, RationalRep)> = rc.reps.iter().map(|r| (FunctionRep::Rational(r.clone()).to_string(), r.clone())).collect();
    for &a in &rc.a {
        for &k in &rc.k {
            let label = if k == 0 { format!("1/(x^2+{a})") } else { format!("T_{k}/(x^2+{a})") };
            members.push((label, degree_scaled_rational(a, k)?));
        }
    }
    let orlicz = match rc.p {
        Some(_) => None,
        None => {
            let n = construct_n(phi)?;
            let c = equivalence_constants(&n)?;
            Some((n, c))
        }
    };
    let shift = cfg.bound_scale.ln();
    let mut rows = Vec::new();
    for (label, rep) in &members {
        for &r in &rc.r {
            let c: RationalCheck = match (&orlicz, rc.p) {
                (Some((n, consts)), _) => rational_orlicz_check(rep, n, consts, r, q)?,
                (None, Some(p)) => lp_rational_check(rep, p, r, q)?,
                (None, None) => unreachable!(),
            };
            let log_rhs = c.log_rhs + shift;
            let holds = c.log_lhs <= log_rhs;
            rows.push((label.clone(), c, log_rhs, holds));
        }
    }
    let mut table = Table::new(&["function", "r", "degree", "lhs", "log_rhs", "margin", "holds"]);
    let mut checks = Vec::new();
    for (label, c, log_rhs, holds) in &rows {
        let margin = log_rhs.exp() - c.lhs;
        table.push(vec![
            label.clone().into(),
            c.r.into(),
            c.degree.into(),
            c.lhs.into(),
            (*log_rhs).into(),
            margin.into(),
            (*holds).into(),
        ]);
        checks.push(json!({
            "function": label,
            "r": c.r,
            "degree": c.degree,
            "lhs": c.lhs,
            "log_lhs": c.log_lhs,
            "log_rhs": log_rhs,
            "margin": margin,
            "holds": holds,
        }));
    }
    let kind = if rc.p.is_some() { "lp" } else { "orlicz" };
    Ok(Outcome {
        violations: rows.iter().filter(|r| !r.3).count(),
        payload: json!({
            "form": kind,
            "p": rc.p,
            "bound_scale": cfg.bound_scale,
            "c4_factor_log": orlicz.as_ref().map(|(_, c)| c.log_c4),
            "checks": checks,
        }),
        table,
    })
}
