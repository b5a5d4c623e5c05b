//! Error type shared by all library modules.

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when validating inputs or evaluating the
/// closed forms. Each variant names the violated invariant or precondition.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("factor {index}: mean-reversion rate beta must be > 0, got {value}")]
    NonPositiveBeta { index: usize, value: f64 },

    #[error("factor {index}: volatility sigma must be > 0, got {value}")]
    NonPositiveSigmaFactor { index: usize, value: f64 },

    #[error("long-term volatility sigma must be finite and >= 0, got {value}")]
    NegativeSigma { value: f64 },

    #[error("seasonality level must be strictly positive and finite: {detail}")]
    SeasonalityNotPositive { detail: String },

    #[error("tabulated seasonality knot times must be strictly increasing near index {index}")]
    SeasonalityKnotsNotIncreasing { index: usize },

    #[error("market state has {got} factor levels but the model has {expected} factors")]
    StateLengthMismatch { expected: usize, got: usize },

    #[error("parameter {name} must be finite, got {value}")]
    NonFiniteParam { name: String, value: f64 },

    #[error("moneyness delta must be > 0, got {value}")]
    NonPositiveMoneyness { value: f64 },

    #[error("half life must be > 0, got {value}")]
    NonPositiveHalfLife { value: f64 },

    #[error("seasonality bounds horizon [{start}, {end}] is empty")]
    EmptyHorizon { start: f64, end: f64 },

    #[error("time order violated: {what} (required {requirement})")]
    TimeOrderViolation { what: String, requirement: &'static str },

    #[error("grid must be sorted ascending, entries {index} and {} are out of order", index + 1)]
    UnsortedGrid { index: usize },

    #[error("Simpson quadrature needs an odd node count >= 3, got {nodes}")]
    BadNodeCount { nodes: usize },

    #[error("strike must be > 0, got {value}")]
    NonPositiveStrike { value: f64 },

    #[error("discount factor must lie in (0, 1], got {value}")]
    BadDiscount { value: f64 },

    #[error("forward price must be > 0, got {value}")]
    NonPositiveForward { value: f64 },

    #[error("total volatility is zero; {what} is undefined in this limit")]
    ZeroVolatility { what: &'static str },

    #[error("factor selection {{{indices:?}}} is not a subset of 1..={n}")]
    InvalidSubset { indices: Vec<usize>, n: usize },

    #[error("error bounds require r = 0 (got r = {r}); no discounted variant exists")]
    NonzeroRateUnsupported { r: f64 },

    #[error("sigma_B = sigma * sqrt(tau - t) is zero; bound coefficients are singular")]
    ZeroSigmaB,

    #[error(
        "hedging bounds do not cover sigma_B^2 < 2 ln(delta) < sigma_B^2 + sum c_i: \
         2 ln(delta) = {two_ln_delta}, sigma_B^2 = {sigma_b_sq}, sum c_i = {c_sum}"
    )]
    RegimeNotCovered {
        two_ln_delta: f64,
        sigma_b_sq: f64,
        c_sum: f64,
    },

    #[error("invalid Monte Carlo config: {reason}")]
    InvalidMcConfig { reason: String },
}
