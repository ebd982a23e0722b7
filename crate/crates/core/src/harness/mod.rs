//! Constants, Markov and Bernstein ratio sweeps, inequality checks, tail fits
//! and the extremal-polynomial search.

mod checks;
mod constants;
mod corpus;
mod extremal;
mod fit;
mod markov;
mod tail;

pub use checks::{
    bernstein_trig_check, degree_scaled_rational, gap_check, inverse_quadratic, lp_rational_check,
    rational_orlicz_check, BernsteinCheck, GapEntry, GapReport, RationalCheck, BERNSTEIN_SLACK, GAP_TREND_LIMIT,
};
pub use constants::{d_constant, k_constant, ln_d_constant};
pub use corpus::{
    equivalence_check, jensen_lyapunov, polynomial_corpus, standard_corpus, three_way_equivalence, CorpusMember,
    EquivalenceEntry, EquivalenceReport, JensenLyapunovEntry, JensenLyapunovReport, ThreeWayEntry, ThreeWayReport,
    CORPUS_SEED, LOWER_SLACK,
};
pub use extremal::{extremal_search, ExtremalResult};
pub use fit::{fit_line, fit_loglog, LineFit};
pub use markov::{markov_ratio, markov_sweep, MarkovBound, RatioEntry, RatioReport, SweepFamily, MIN_FIT_POINTS};
pub use tail::{converse_model, tail_check, tail_converse, tail_model, ConverseReport, TailReport, TAIL_GRADING};
