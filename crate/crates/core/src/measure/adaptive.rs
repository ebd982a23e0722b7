//! Globally adaptive composite Gauss–Legendre integration.
//!
//! Each panel carries two estimates: the rule applied on the whole panel
//! and the rule applied on its two halves. Their difference is the error
//! estimate; the halves' sum is the accepted value. The panel with the
//! largest error is bisected until the summed error falls below
//! `rel_tol · ∫|g|`.
//!
//! Two accumulation modes exist. The linear mode integrates signed
//! integrands. The log mode takes `ln g` and returns `ln ∫ g`, summing panel
//! contributions with log-sum-exp so that integrands such as `exp(φ(|f|))`
//! never overflow.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::gauss::GaussLegendre;
use super::QuadratureConfig;
use crate::error::{Error, Result};

const MIN_INITIAL_PANELS: usize = 8;
const MAX_PANELS: usize = 60_000;
const RECOMPUTE_EVERY: usize = 64;

/// Segment of the integration range together with its endpoint grading.
#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    grading: u32,
}

impl Segment {
    /// Maps `u ∈ [0, 1]` to `(x, dx/du)`. Returns `None` when the graded
    /// map rounds onto an endpoint, where the transformed integrand has
    /// limit zero.
    #[inline]
    fn map(&self, u: f64) -> Option<(f64, f64)> {
        let len = self.b - self.a;
        if self.grading <= 1 {
            return Some((self.a + len * u, len));
        }
        let k = self.grading as i32;
        let p = u.powi(k);
        let q = (1.0 - u).powi(k);
        let den = p + q;
        let w = p / den;
        let dw = k as f64 * u.powi(k - 1) * (1.0 - u).powi(k - 1) / (den * den);
        let x = if w < 0.5 {
            self.a + len * w
        } else {
            self.b - len * (q / den)
        };
        if x <= self.a || x >= self.b || dw == 0.0 {
            None
        } else {
            Some((x, len * dw))
        }
    }
}

fn build_segments(breaks: &[f64], grading: u32) -> Vec<Segment> {
    let pairs: Vec<(f64, f64)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .collect();
    let per = MIN_INITIAL_PANELS.div_ceil(pairs.len().max(1));
    let mut out = Vec::new();
    for (a, b) in pairs {
        if grading > 1 {
            out.push(Segment { a, b, grading });
            continue;
        }
        for i in 0..per {
            let lo = a + (b - a) * i as f64 / per as f64;
            let hi = if i + 1 == per {
                b
            } else {
                a + (b - a) * (i + 1) as f64 / per as f64
            };
            out.push(Segment { a: lo, b: hi, grading });
        }
    }
    out
}

fn initial_panels(segments: &[Segment]) -> Vec<(usize, f64, f64)> {
    if segments.iter().any(|s| s.grading > 1) {
        let per = MIN_INITIAL_PANELS.div_ceil(segments.len().max(1));
        segments
            .iter()
            .enumerate()
            .flat_map(|(i, _)| {
                (0..per).map(move |k| (i, k as f64 / per as f64, (k + 1) as f64 / per as f64))
            })
            .collect()
    } else {
        (0..segments.len()).map(|i| (i, 0.0, 1.0)).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct HeapKey {
    err: f64,
    idx: usize,
}

impl PartialEq for HeapKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapKey {}
impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}

#[derive(Debug, Clone, Copy)]
struct LinPanel {
    seg: usize,
    lo: f64,
    hi: f64,
    depth: u32,
    whole: f64,
    left: f64,
    right: f64,
    abs: f64,
}

impl LinPanel {
    fn value(&self) -> f64 {
        self.left + self.right
    }
    fn err(&self) -> f64 {
        (self.value() - self.whole).abs()
    }
}

struct LinRule<'a, F> {
    rule: &'a GaussLegendre,
    segments: &'a [Segment],
    f: F,
}

impl<F: FnMut(f64) -> f64> LinRule<'_, F> {
    /// Returns `(∫g, ∫|g|)` over `[lo, hi]` in the segment's `u` coordinate.
    fn apply(&mut self, seg: usize, lo: f64, hi: f64) -> Result<(f64, f64)> {
        let s = self.segments[seg];
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let mut sum = 0.0;
        let mut abs = 0.0;
        for (t, w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            let u = c + h * t;
            let Some((x, jac)) = s.map(u) else { continue };
            let g = (self.f)(x);
            if !g.is_finite() {
                return Err(Error::NonFiniteEvaluation { x });
            }
            sum += w * g * jac;
            abs += w * g.abs() * jac;
        }
        Ok((sum * h, abs * h))
    }

    fn panel(&mut self, seg: usize, lo: f64, hi: f64, depth: u32, whole: f64) -> Result<LinPanel> {
        let mid = 0.5 * (lo + hi);
        let (left, al) = self.apply(seg, lo, mid)?;
        let (right, ar) = self.apply(seg, mid, hi)?;
        Ok(LinPanel {
            seg,
            lo,
            hi,
            depth,
            whole,
            left,
            right,
            abs: al + ar,
        })
    }
}

/// Integrates a signed integrand over the union of `[breaks[i], breaks[i+1]]`.
pub(crate) fn integrate_linear<F: FnMut(f64) -> f64>(
    breaks: &[f64],
    f: F,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let rule = GaussLegendre::new(cfg.nodes_per_panel);
    let segments = build_segments(breaks, cfg.grading);
    let mut ctx = LinRule {
        rule: &rule,
        segments: &segments,
        f,
    };
    let mut panels: Vec<LinPanel> = Vec::new();
    let mut heap = BinaryHeap::new();
    for (seg, lo, hi) in initial_panels(&segments) {
        let (whole, _) = ctx.apply(seg, lo, hi)?;
        let p = ctx.panel(seg, lo, hi, 0, whole)?;
        heap.push(HeapKey {
            err: p.err(),
            idx: panels.len(),
        });
        panels.push(p);
    }
    let mut live = vec![true; panels.len()];
    let totals = |panels: &[LinPanel], live: &[bool]| {
        panels
            .iter()
            .zip(live)
            .filter(|(_, l)| **l)
            .fold((0.0, 0.0, 0.0), |(v, e, a), (p, _)| {
                (v + p.value(), e + p.err(), a + p.abs)
            })
    };
    let (_, mut err, mut abs) = totals(&panels, &live);
    let mut splits = 0usize;
    loop {
        if err <= cfg.rel_tol * abs || abs == 0.0 {
            let (v, e, a) = totals(&panels, &live);
            if e <= cfg.rel_tol * a || a == 0.0 {
                return Ok(v);
            }
            (err, abs) = (e, a);
        }
        let Some(top) = heap.pop() else {
            let (v, e, _) = totals(&panels, &live);
            return Err(Error::ConvergenceFailure {
                estimate: v,
                error_bound: e,
            });
        };
        let p = panels[top.idx];
        if p.depth >= cfg.max_depth {
            continue;
        }
        if panels.len() + 2 > MAX_PANELS {
            let (v, e, _) = totals(&panels, &live);
            return Err(Error::ConvergenceFailure {
                estimate: v,
                error_bound: e,
            });
        }
        let mid = 0.5 * (p.lo + p.hi);
        let l = ctx.panel(p.seg, p.lo, mid, p.depth + 1, p.left)?;
        let r = ctx.panel(p.seg, mid, p.hi, p.depth + 1, p.right)?;
        live[top.idx] = false;
        err += l.err() + r.err() - p.err();
        abs += l.abs + r.abs - p.abs;
        for c in [l, r] {
            heap.push(HeapKey {
                err: c.err(),
                idx: panels.len(),
            });
            panels.push(c);
            live.push(true);
        }
        splits += 1;
        if splits % RECOMPUTE_EVERY == 0 {
            (_, err, abs) = totals(&panels, &live);
        }
    }
}

/// `ln(e^a + e^b)` with `-∞` as the additive identity.
#[inline]
pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln|e^a - e^b|`.
#[inline]
fn log_diff(a: f64, b: f64) -> f64 {
    if a == b {
        return f64::NEG_INFINITY;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (-(lo - hi).exp()).ln_1p()
}

#[derive(Debug, Clone, Copy)]
struct LogPanel {
    seg: usize,
    lo: f64,
    hi: f64,
    depth: u32,
    whole: f64,
    left: f64,
    right: f64,
}

impl LogPanel {
    fn value(&self) -> f64 {
        log_add(self.left, self.right)
    }
    fn err(&self) -> f64 {
        log_diff(self.value(), self.whole)
    }
}

struct LogRule<'a, F> {
    rule: &'a GaussLegendre,
    log_weights: Vec<f64>,
    segments: &'a [Segment],
    f: F,
    buf: Vec<f64>,
}

impl<F: FnMut(f64) -> f64> LogRule<'_, F> {
    fn apply(&mut self, seg: usize, lo: f64, hi: f64) -> Result<f64> {
        let s = self.segments[seg];
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        self.buf.clear();
        let mut max = f64::NEG_INFINITY;
        for (t, lw) in self.rule.nodes.iter().zip(&self.log_weights) {
            let u = c + h * t;
            let Some((x, jac)) = s.map(u) else { continue };
            let g = (self.f)(x);
            if g.is_nan() || g == f64::INFINITY {
                return Err(Error::NonFiniteEvaluation { x });
            }
            let term = g + lw + jac.ln();
            max = max.max(term);
            self.buf.push(term);
        }
        if max == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        let s: f64 = self.buf.iter().map(|t| (t - max).exp()).sum();
        Ok(max + s.ln() + h.ln())
    }

    fn panel(&mut self, seg: usize, lo: f64, hi: f64, depth: u32, whole: f64) -> Result<LogPanel> {
        let mid = 0.5 * (lo + hi);
        let left = self.apply(seg, lo, mid)?;
        let right = self.apply(seg, mid, hi)?;
        Ok(LogPanel {
            seg,
            lo,
            hi,
            depth,
            whole,
            left,
            right,
        })
    }
}

/// Given `ln g`, returns `ln ∫ g` over the union of the break segments.
/// Returns `-∞` when the integrand vanishes identically on the nodes.
pub(crate) fn integrate_log<F: FnMut(f64) -> f64>(
    breaks: &[f64],
    log_g: F,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let rule = GaussLegendre::new(cfg.nodes_per_panel);
    let log_weights = rule.weights.iter().map(|w| w.ln()).collect();
    let segments = build_segments(breaks, cfg.grading);
    let mut ctx = LogRule {
        rule: &rule,
        log_weights,
        segments: &segments,
        f: log_g,
        buf: Vec::with_capacity(cfg.nodes_per_panel),
    };
    let mut panels: Vec<LogPanel> = Vec::new();
    let mut heap = BinaryHeap::new();
    for (seg, lo, hi) in initial_panels(&segments) {
        let whole = ctx.apply(seg, lo, hi)?;
        let p = ctx.panel(seg, lo, hi, 0, whole)?;
        heap.push(HeapKey {
            err: p.err(),
            idx: panels.len(),
        });
        panels.push(p);
    }
    let mut live = vec![true; panels.len()];
    // Totals are kept as linear sums scaled by e^{-reference}.
    let totals = |panels: &[LogPanel], live: &[bool]| {
        let reference = panels
            .iter()
            .zip(live)
            .filter(|(_, l)| **l)
            .map(|(p, _)| p.value())
            .fold(f64::NEG_INFINITY, f64::max);
        if reference == f64::NEG_INFINITY {
            return (reference, 0.0, 0.0);
        }
        let (v, e) = panels
            .iter()
            .zip(live)
            .filter(|(_, l)| **l)
            .fold((0.0, 0.0), |(v, e), (p, _)| {
                (v + (p.value() - reference).exp(), e + (p.err() - reference).exp())
            });
        (reference, v, e)
    };
    let (mut reference, mut value, mut err) = totals(&panels, &live);
    let mut splits = 0usize;
    loop {
        if reference == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        if err <= cfg.rel_tol * value {
            let (r, v, e) = totals(&panels, &live);
            if r == f64::NEG_INFINITY {
                return Ok(r);
            }
            if e <= cfg.rel_tol * v {
                return Ok(r + v.ln());
            }
            (reference, value, err) = (r, v, e);
        }
        let failure = |panels: &[LogPanel], live: &[bool]| {
            let (r, v, e) = totals(panels, live);
            Error::ConvergenceFailure {
                estimate: (r + v.ln()).exp(),
                error_bound: (r + e.ln()).exp(),
            }
        };
        let Some(top) = heap.pop() else {
            return Err(failure(&panels, &live));
        };
        let p = panels[top.idx];
        if p.depth >= cfg.max_depth {
            continue;
        }
        if panels.len() + 2 > MAX_PANELS {
            return Err(failure(&panels, &live));
        }
        let mid = 0.5 * (p.lo + p.hi);
        let l = ctx.panel(p.seg, p.lo, mid, p.depth + 1, p.left)?;
        let r = ctx.panel(p.seg, mid, p.hi, p.depth + 1, p.right)?;
        live[top.idx] = false;
        for c in [l, r] {
            heap.push(HeapKey {
                err: c.err(),
                idx: panels.len(),
            });
            panels.push(c);
            live.push(true);
        }
        splits += 1;
        let grew = l.value().max(r.value()) > reference + 300.0;
        if grew || splits % RECOMPUTE_EVERY == 0 {
            (reference, value, err) = totals(&panels, &live);
        } else {
            value += (l.value() - reference).exp() + (r.value() - reference).exp()
                - (p.value() - reference).exp();
            err += (l.err() - reference).exp() + (r.err() - reference).exp()
                - (p.err() - reference).exp();
            value = value.max(0.0);
            err = err.max(0.0);
        }
    }
}
