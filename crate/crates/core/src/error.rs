use std::path::PathBuf;

/// Every failure the library can report.
///
/// Variants split into two families: recoverable precision problems
/// (`AmbiguousBoundary`, `AmbiguousQuotient`, `PrecisionExhausted`) that a
/// caller may answer by retrying at higher precision, and hard faults
/// (`MethodDisagreement`, `IntegralityFailure`, `IdentityMismatch`,
/// `SelfCheckFailed`) that indicate a bug or a wrong model.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("error interval [{lo}, {hi}] contains an integer; retry at higher precision")]
    AmbiguousBoundary { lo: String, hi: String },

    #[error("precision exhausted: needed {needed_bits} bits, ceiling is {ceiling_bits}")]
    PrecisionExhausted { needed_bits: usize, ceiling_bits: usize },

    #[error("request exceeds cap: {what} ({value} > {cap})")]
    OverCap { what: &'static str, value: u64, cap: u64 },

    #[error("self check failed for {name}: {detail}")]
    SelfCheckFailed { name: &'static str, detail: String },

    #[error("I_{n}: quadrature methods disagree (|diff| = {diff:e}, allowed {allowed:e})")]
    MethodDisagreement { n: u64, diff: f64, allowed: f64 },

    #[error("n = {n}: d_2n*A_n is {residual:e} away from an integer (tolerance {tolerance:e})")]
    IntegralityFailure { n: u64, residual: f64, tolerance: f64 },

    #[error("n = {n}: linear form identity violated (|diff| = {diff:e}, bound {bound:e})")]
    IdentityMismatch { n: u64, diff: f64, bound: f64 },

    #[error("continued fraction quotient {index} is not certified by the input interval")]
    AmbiguousQuotient { index: usize, certified: usize },

    #[error("depth {depth} exceeds cap {cap}")]
    DepthCap { depth: usize, cap: usize },

    #[error("tau = 2*sigma*log(4/e) is excluded (sigma = {sigma}, tau = {tau})")]
    BranchBoundary { sigma: f64, tau: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors that signal a computation fault rather than bad input
    /// or a recoverable precision shortfall.
    pub fn is_fault(&self) -> bool {
        matches!(
            self,
            Error::MethodDisagreement { .. }
                | Error::IntegralityFailure { .. }
                | Error::IdentityMismatch { .. }
                | Error::SelfCheckFailed { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
