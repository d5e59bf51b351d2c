use thiserror::Error;

use crate::partition::Partition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dominance order needs equal weights, got {0} and {1}")]
    WeightMismatch(usize, usize),

    /// A denominator vanished at the chosen (q, t).
    #[error("non-generic parameters: vanishing denominator in {0}")]
    Degenerate(String),

    #[error("pole at evaluation point: {0}")]
    Pole(String),

    #[error("partition ({lambda}) is not in H_{{{n},{m}}}")]
    NotInFatHook { lambda: Partition, n: usize, m: usize },

    #[error("rectangle ({m}^{n}) is not contained in ({lambda})")]
    RectangleNotContained { lambda: Partition, n: usize, m: usize },

    #[error("transition to power sums needs at least {degree} variables, got {nvars}")]
    NotInvertible { nvars: usize, degree: usize },

    #[error("expected a symmetric function in the {expected} basis, got {found}")]
    BasisMismatch { expected: &'static str, found: &'static str },

    #[error("radii xi={xi}, xi'={xip} violate |log(xi/xi')| > |log(q/t)|/2")]
    InvalidRadii { xi: f64, xip: f64 },

    #[error("invalid quadrature setup: {0}")]
    InvalidSpec(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("cannot parse {0:?}")]
    Parse(String),
}
