use thiserror::Error;

/// Errors surfaced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor was handed parameters outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A moment that does not exist was requested (power laws with too small
    /// an exponent have no mean or second moment).
    #[error("divergent moment: {0}")]
    DivergentMoment(String),

    /// The Beta mixing weight of the posterior is degenerate
    /// (`n − σ·K_n ≤ 0`; only reachable at the σ = 1 boundary).
    #[error("degenerate beta: n - sigma*K_n = {0} is not positive")]
    DegenerateBeta(f64),

    /// Stick-breaking failed to push the residual mass below the target
    /// within the iteration cap; signals pathological parameters.
    #[error("stick-breaking residual never fell below the target after {0} sticks")]
    IterationCap(usize),

    /// Too few posterior draws to form empirical quantiles.
    #[error("need at least {min} draws for interval quantiles, got {got}")]
    InsufficientDraws { got: usize, min: usize },

    /// A credible-band scale fell below the floor with flooring disabled.
    #[error("posterior CDF standard deviation {sd:.3e} below floor {floor:.3e} at t = {t}")]
    DegenerateScale { t: f64, sd: f64, floor: f64 },

    /// A function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A dataset file could not be parsed.
    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
