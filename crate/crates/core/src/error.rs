use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaloisError {
    /// NaN reached an extended-real constructor.
    #[error("NaN is not an extended real number")]
    NotANumber,

    /// A kernel, form, grid or function violates its contract.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Sampled values of a scalar map increased by more than the tolerance.
    #[error("map is not nonincreasing: h({s0}) = {v0} < h({s1}) = {v1} with {s0} < {s1}")]
    NonMonotone { s0: f64, s1: f64, v0: f64, v1: f64 },

    /// A function was given on the wrong side or with the wrong number of values.
    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("the family is not a covering of its universe")]
    NotACover,

    #[error("exhaustive search over {size} indices exceeds the limit of {limit}")]
    LimitExceeded { size: usize, limit: usize },

    #[error("Bf = g has no solution")]
    NoSolution,

    /// The pre-scan of the Lipschitz fixed-point experiment found a violating pair.
    #[error("not omega-Lipschitz: |g({u}) - g({v})| = {gap} > omega = {bound}")]
    NotLipschitz { u: f64, v: f64, gap: f64, bound: f64 },

    /// An invariant the library relies on did not hold.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = GaloisError> = std::result::Result<T, E>;
