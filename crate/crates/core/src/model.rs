//! Domain types, parameter validation, and unit conventions shared by all
//! other modules.
//!
//! Times are in days throughout; `mu` and `r` are per day, volatilities per
//! square-root day. Factor indices are 1-based in every public surface and
//! error message. All types are immutable once validated.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic, bounded seasonality level Lambda(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Seasonality {
    /// Flat level.
    Constant(f64),
    /// Knots `(time in days, level)` with linear interpolation between knots
    /// and flat extrapolation outside.
    Tabulated(Vec<(f64, f64)>),
}

impl Seasonality {
    pub fn validate(&self) -> Result<()> {
        match self {
            Seasonality::Constant(v) => {
                if !(v.is_finite() && *v > 0.0) {
                    return Err(Error::SeasonalityNotPositive {
                        detail: format!("constant level {v}"),
                    });
                }
            }
            Seasonality::Tabulated(knots) => {
                if knots.is_empty() {
                    return Err(Error::SeasonalityNotPositive {
                        detail: "tabulated form has no knots".to_string(),
                    });
                }
                for (i, (time, level)) in knots.iter().enumerate() {
                    if !time.is_finite() {
                        return Err(Error::NonFiniteParam {
                            name: format!("seasonality knot time {}", i + 1),
                            value: *time,
                        });
                    }
                    if !(level.is_finite() && *level > 0.0) {
                        return Err(Error::SeasonalityNotPositive {
                            detail: format!("knot {} level {level}", i + 1),
                        });
                    }
                }
                for (i, pair) in knots.windows(2).enumerate() {
                    if pair[1].0 <= pair[0].0 {
                        return Err(Error::SeasonalityKnotsNotIncreasing { index: i });
                    }
                }
            }
        }
        Ok(())
    }

    /// Level at time `t` (days).
    pub fn level(&self, t: f64) -> f64 {
        match self {
            Seasonality::Constant(v) => *v,
            Seasonality::Tabulated(knots) => {
                let first = knots.first().expect("validated: non-empty");
                let last = knots.last().expect("validated: non-empty");
                if t <= first.0 {
                    return first.1;
                }
                if t >= last.0 {
                    return last.1;
                }
                let hi = knots.partition_point(|(kt, _)| *kt < t);
                let (t0, v0) = knots[hi - 1];
                let (t1, v1) = knots[hi];
                v0 + (t - t0) / (t1 - t0) * (v1 - v0)
            }
        }
    }

    /// Lower and upper bounds of the level over `[start, end]`, including
    /// the interpolated endpoints.
    pub fn bounds(&self, start: f64, end: f64) -> Result<(f64, f64)> {
        if !(end >= start) {
            return Err(Error::EmptyHorizon { start, end });
        }
        match self {
            Seasonality::Constant(v) => Ok((*v, *v)),
            Seasonality::Tabulated(knots) => {
                let mut lo = self.level(start).min(self.level(end));
                let mut hi = self.level(start).max(self.level(end));
                for (kt, kv) in knots {
                    if *kt > start && *kt < end {
                        lo = lo.min(*kv);
                        hi = hi.max(*kv);
                    }
                }
                Ok((lo, hi))
            }
        }
    }
}

/// One stationary Ornstein-Uhlenbeck factor, dY = -beta Y dt + sigma dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanRevertingFactor {
    /// Mean-reversion rate per day; half life = ln 2 / beta.
    pub beta: f64,
    /// Volatility per square-root day.
    pub sigma: f64,
}

/// The spot model S(t) = Lambda(t) exp{X(t) + sum_i Y_i(t)} with a drifted
/// Brownian long-term factor X and mean-reverting factors Y_i, i in I.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotModel {
    pub seasonality: Seasonality,
    /// Drift of the long-term factor, per day.
    pub mu: f64,
    /// Volatility of the long-term factor, per square-root day.
    pub sigma: f64,
    /// Mean-reverting factors; index set I = {1..n}, 1-based.
    pub factors: Vec<MeanRevertingFactor>,
}

impl SpotModel {
    pub fn n_factors(&self) -> usize {
        self.factors.len()
    }

    /// Growth rate b = mu + sigma^2 / 2 of the deterministic forward.
    pub fn growth_rate(&self) -> f64 {
        self.mu + 0.5 * self.sigma * self.sigma
    }

    pub fn validate(&self) -> Result<()> {
        self.seasonality.validate()?;
        if !self.mu.is_finite() {
            return Err(Error::NonFiniteParam {
                name: "mu".to_string(),
                value: self.mu,
            });
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::NegativeSigma { value: self.sigma });
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if !(factor.beta.is_finite() && factor.beta > 0.0) {
                return Err(Error::NonPositiveBeta {
                    index: i + 1,
                    value: factor.beta,
                });
            }
            if !(factor.sigma.is_finite() && factor.sigma > 0.0) {
                return Err(Error::NonPositiveSigmaFactor {
                    index: i + 1,
                    value: factor.sigma,
                });
            }
        }
        Ok(())
    }
}

/// Market state at valuation time: t, X(t), and the factor levels Y_i(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketState {
    /// Valuation time in days.
    pub t: f64,
    /// Current long-term level X(t), in log-price units.
    pub x: f64,
    /// Current factor levels Y_i(t), one per model factor.
    pub y: Vec<f64>,
}

impl MarketState {
    /// Flat state X = Y_i = 0 at time `t` for a model with `n` factors.
    pub fn zero(t: f64, n: usize) -> Self {
        MarketState {
            t,
            x: 0.0,
            y: vec![0.0; n],
        }
    }
}

/// Validates the model invariants and the state against the model.
pub fn validate(model: &SpotModel, state: &MarketState) -> Result<()> {
    model.validate()?;
    if state.y.len() != model.n_factors() {
        return Err(Error::StateLengthMismatch {
            expected: model.n_factors(),
            got: state.y.len(),
        });
    }
    for (name, value) in [("t", state.t), ("x", state.x)] {
        if !value.is_finite() {
            return Err(Error::NonFiniteParam {
                name: name.to_string(),
                value,
            });
        }
    }
    for (i, y) in state.y.iter().enumerate() {
        if !y.is_finite() {
            return Err(Error::NonFiniteParam {
                name: format!("y[{}]", i + 1),
                value: *y,
            });
        }
    }
    Ok(())
}

/// Converts a half life in days to a mean-reversion rate per day.
pub fn half_life_to_beta(half_life: f64) -> Result<f64> {
    if !(half_life.is_finite() && half_life > 0.0) {
        return Err(Error::NonPositiveHalfLife { value: half_life });
    }
    Ok(std::f64::consts::LN_2 / half_life)
}

/// Strike rule: an absolute level, or a moneyness delta = f(t,T)/K from
/// which the strike is derived off the initial curve at pricing time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Strike {
    #[serde(rename = "K")]
    Absolute(f64),
    #[serde(rename = "delta")]
    Moneyness(f64),
}

impl Strike {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Strike::Absolute(k) => {
                if !(k.is_finite() && k > 0.0) {
                    return Err(Error::NonPositiveStrike { value: k });
                }
            }
            Strike::Moneyness(d) => {
                if !(d.is_finite() && d > 0.0) {
                    return Err(Error::NonPositiveMoneyness { value: d });
                }
            }
        }
        Ok(())
    }
}

/// European call specification: exercise at `tau`, delivery-period midpoint
/// `T` (the delivery period has length 2(T - tau)), strike rule and rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionSpec {
    /// Exercise time in days.
    pub tau: f64,
    /// Delivery midpoint in days.
    #[serde(rename = "T")]
    pub delivery: f64,
    pub strike: Strike,
    /// Continuously-compounded rate per day.
    pub r: f64,
}

impl OptionSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("tau", self.tau), ("T", self.delivery)] {
            if !value.is_finite() {
                return Err(Error::NonFiniteParam {
                    name: name.to_string(),
                    value,
                });
            }
        }
        self.strike.validate()?;
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(Error::NonFiniteParam {
                name: "r".to_string(),
                value: self.r,
            });
        }
        Ok(())
    }

    /// Discount factor e^{-r (tau - t)} from valuation time `t`.
    pub fn discount_from(&self, t: f64) -> f64 {
        (-self.r * (self.tau - t)).exp()
    }
}

/// A subset J of the model's factor indices (1-based) retained in an
/// approximate price; the complement I \ J is the neglected set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSelection {
    #[serde(rename = "J")]
    indices: BTreeSet<usize>,
}

impl FactorSelection {
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        FactorSelection {
            indices: indices.into_iter().collect(),
        }
    }

    /// The full index set I = {1..n}.
    pub fn full(n: usize) -> Self {
        FactorSelection {
            indices: (1..=n).collect(),
        }
    }

    pub fn empty() -> Self {
        FactorSelection {
            indices: BTreeSet::new(),
        }
    }

    pub fn validate_for(&self, n_factors: usize) -> Result<()> {
        if self.indices.iter().any(|&i| i == 0 || i > n_factors) {
            return Err(Error::InvalidSubset {
                indices: self.indices.iter().copied().collect(),
                n: n_factors,
            });
        }
        Ok(())
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.contains(&index)
    }

    /// Selected indices, ascending, 1-based.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    /// The neglected complement I \ J, ascending, 1-based.
    pub fn neglected(&self, n_factors: usize) -> Vec<usize> {
        (1..=n_factors).filter(|i| !self.contains(*i)).collect()
    }

    pub fn is_full(&self, n_factors: usize) -> bool {
        self.indices.len() == n_factors && self.validate_for(n_factors).is_ok()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// A complete pricing scenario; serializes to the library's JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(flatten)]
    pub model: SpotModel,
    pub state: MarketState,
    pub option: OptionSpec,
    pub selection: FactorSelection,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        validate(&self.model, &self.state)?;
        self.option.validate()?;
        self.selection.validate_for(self.model.n_factors())?;
        if self.option.tau < self.state.t {
            return Err(Error::TimeOrderViolation {
                what: format!("tau = {} before t = {}", self.option.tau, self.state.t),
                requirement: "t <= tau",
            });
        }
        if self.option.delivery < self.option.tau {
            return Err(Error::TimeOrderViolation {
                what: format!(
                    "T = {} before tau = {}",
                    self.option.delivery, self.option.tau
                ),
                requirement: "tau <= T",
            });
        }
        Ok(())
    }

    /// The reference scenario used across the test suite and shipped with
    /// the CLI: flat seasonality 10, a two-day-half-life spike factor and a
    /// two-week slow factor (beta ln2/2 and ln2/14, both sigma 0.01),
    /// sigma = 0.01, mu = 0, r = 0, ATM option exercising at day 10 with
    /// delivery midpoint 25, keeping only the fast factor (J = {1}).
    pub fn example() -> Self {
        Scenario {
            model: SpotModel {
                seasonality: Seasonality::Constant(10.0),
                mu: 0.0,
                sigma: 0.01,
                factors: vec![
                    MeanRevertingFactor {
                        beta: 0.3466,
                        sigma: 0.01,
                    },
                    MeanRevertingFactor {
                        beta: 0.0495,
                        sigma: 0.01,
                    },
                ],
            },
            state: MarketState::zero(0.0, 2),
            option: OptionSpec {
                tau: 10.0,
                delivery: 25.0,
                strike: Strike::Moneyness(1.0),
                r: 0.0,
            },
            selection: FactorSelection::new([1]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_scenario_is_valid() {
        let sc = Scenario::example();
        sc.validate().unwrap();
        assert_eq!(sc.model.n_factors(), 2);
        assert_eq!(sc.selection.neglected(2), vec![2]);
    }

    #[test]
    fn zero_beta_is_rejected() {
        let mut sc = Scenario::example();
        sc.model.factors[0].beta = 0.0;
        assert_eq!(
            sc.model.validate(),
            Err(Error::NonPositiveBeta {
                index: 1,
                value: 0.0
            })
        );
    }

    #[test]
    fn state_length_mismatch_is_rejected() {
        let sc = Scenario::example();
        let short = MarketState {
            t: 0.0,
            x: 0.0,
            y: vec![0.0],
        };
        assert_eq!(
            validate(&sc.model, &short),
            Err(Error::StateLengthMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn non_positive_factor_sigma_is_rejected() {
        let mut sc = Scenario::example();
        sc.model.factors[1].sigma = -0.01;
        assert!(matches!(
            sc.model.validate(),
            Err(Error::NonPositiveSigmaFactor { index: 2, .. })
        ));
    }

    #[test]
    fn half_life_conversion() {
        assert!((half_life_to_beta(2.0).unwrap() - 0.3466).abs() < 1e-4);
        assert!((half_life_to_beta(14.0).unwrap() - 0.0495).abs() < 1e-4);
        assert!((half_life_to_beta(std::f64::consts::LN_2).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            half_life_to_beta(0.0),
            Err(Error::NonPositiveHalfLife { .. })
        ));
    }

    #[test]
    fn half_life_round_trips_through_beta() {
        for beta in [0.0123, 0.0495, 0.3466, 1.0, 4.2] {
            let h = std::f64::consts::LN_2 / beta;
            let back = half_life_to_beta(h).unwrap();
            assert!((back - beta).abs() <= 1e-12 * beta);
        }
    }

    #[test]
    fn seasonality_bounds_constant() {
        let s = Seasonality::Constant(10.0);
        assert_eq!(s.bounds(0.0, 80.0).unwrap(), (10.0, 10.0));
    }

    #[test]
    fn seasonality_bounds_tabulated() {
        let s = Seasonality::Tabulated(vec![(0.0, 8.0), (10.0, 12.0)]);
        assert_eq!(s.bounds(0.0, 10.0).unwrap(), (8.0, 12.0));
        assert_eq!(s.bounds(5.0, 5.0).unwrap(), (10.0, 10.0));
        // flat extrapolation outside the knots
        assert_eq!(s.bounds(-5.0, -1.0).unwrap(), (8.0, 8.0));
        assert!(matches!(
            s.bounds(3.0, 1.0),
            Err(Error::EmptyHorizon { .. })
        ));
    }

    #[test]
    fn seasonality_rejects_non_increasing_knots() {
        let s = Seasonality::Tabulated(vec![(0.0, 8.0), (0.0, 9.0)]);
        assert_eq!(
            s.validate(),
            Err(Error::SeasonalityKnotsNotIncreasing { index: 0 })
        );
        let neg = Seasonality::Tabulated(vec![(0.0, -1.0)]);
        assert!(matches!(
            neg.validate(),
            Err(Error::SeasonalityNotPositive { .. })
        ));
    }

    #[test]
    fn selection_subset_rules() {
        let sel = FactorSelection::new([1, 3]);
        assert!(sel.validate_for(3).is_ok());
        assert!(matches!(
            sel.validate_for(2),
            Err(Error::InvalidSubset { .. })
        ));
        assert!(FactorSelection::full(3).is_full(3));
        assert_eq!(sel.neglected(3), vec![2]);
        assert!(FactorSelection::empty().validate_for(0).is_ok());
    }
}
