use thiserror::Error;

/// Errors raised by the probability core, the region evaluators and the
/// frontier search.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a scalar function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A probability vector or channel row fails the stochastic constraints.
    #[error("invalid distribution `{name}`{}: {reason}", row.map(|r| format!(" (row {r})")).unwrap_or_default())]
    InvalidDistribution {
        name: String,
        row: Option<usize>,
        reason: String,
    },

    /// Alphabets, variable names or modes do not fit together.
    #[error("structural error: {0}")]
    Structural(String),

    /// No action distribution meets the requested cost cap.
    #[error("infeasible cost cap {cap}: minimum achievable expected cost is {min_cost}")]
    InfeasibleCost { cap: f64, min_cost: f64 },

    /// An enumeration or tensor would exceed its size guard.
    #[error("size guard exceeded: {what} needs {count} but the limit is {limit}")]
    SizeGuard {
        what: &'static str,
        count: u128,
        limit: u128,
    },

    /// A rate point violates an identity it was expected to satisfy.
    #[error("consistency error: {0}")]
    Consistency(String),

    /// The analytic bound is only valid under a precondition that fails.
    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;
