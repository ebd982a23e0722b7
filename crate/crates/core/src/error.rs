use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite function value at x = {x}")]
    NonFiniteEvaluation { x: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    ConvergenceFailure { estimate: f64, error_bound: f64 },

    #[error("denominator {value:e} too close to zero at x = {x} (pole proximity)")]
    PoleProximity { x: f64, value: f64 },

    #[error("denominator has a pole on the domain near x = {witness}")]
    PoleOnDomain { witness: f64 },

    #[error("coefficient magnitude exceeded 1e300 while forming the representation")]
    Overflow,

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("Young-Fenchel supremum diverges for {phi} at p = {p}")]
    ConjugateDivergence { phi: String, p: f64 },

    #[error("supremum over p still increasing at p = {p_max} after range extension")]
    ScanDivergence { p_max: f64 },

    #[error("splice construction failed for {phi}: no root of u·φ'(u) = 1 in [1e-3, 1e3]; supply a custom splice")]
    SpliceConstruction { phi: String },

    #[error("series tail not certifiably geometric within {terms} terms for {phi}")]
    Summability { phi: String, terms: usize },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}
