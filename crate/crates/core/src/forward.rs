//! Closed-form instantaneous forward prices and the average-delivery
//! forward by quadrature.
//!
//! The instantaneous forward is f(t,T) = E[S(T) | F_t], available in closed
//! form as h(t,T) exp{X(t) + sum_i e^{-beta_i (T-t)} Y_i(t)} with the
//! deterministic part h. The average-delivery forward over [T1, T2] has no
//! closed form, but by linearity of conditional expectation it equals the
//! time average of f(t, u), which we integrate with composite Simpson.

use crate::error::{Error, Result};
use crate::model::{MarketState, SpotModel};
use crate::quad::composite_simpson;

/// One point of the forward curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardQuote {
    /// Valuation time (days).
    pub t: f64,
    /// Delivery time (days).
    pub delivery: f64,
    /// Forward price f(t, T).
    pub price: f64,
    /// Deterministic part h(t, T).
    pub deterministic_part: f64,
}

fn check_order(t: f64, delivery: f64) -> Result<()> {
    if delivery < t {
        return Err(Error::TimeOrderViolation {
            what: format!("delivery T = {delivery} before t = {t}"),
            requirement: "T >= t",
        });
    }
    Ok(())
}

fn deterministic_part_unchecked(model: &SpotModel, t: f64, delivery: f64) -> f64 {
    let dt = delivery - t;
    let mut exponent = model.growth_rate() * dt;
    for factor in &model.factors {
        let c_inf = factor.sigma * factor.sigma / (2.0 * factor.beta);
        exponent += 0.5 * c_inf * (1.0 - (-2.0 * factor.beta * dt).exp());
    }
    model.seasonality.level(delivery) * exponent.exp()
}

fn forward_unchecked(model: &SpotModel, state: &MarketState, delivery: f64) -> ForwardQuote {
    let h = deterministic_part_unchecked(model, state.t, delivery);
    let mut exponent = state.x;
    for (factor, y) in model.factors.iter().zip(&state.y) {
        exponent += (-factor.beta * (delivery - state.t)).exp() * y;
    }
    ForwardQuote {
        t: state.t,
        delivery,
        price: h * exponent.exp(),
        deterministic_part: h,
    }
}

/// Deterministic part h(t,T) = Lambda(T) exp{(mu + sigma^2/2)(T - t)
/// + 1/2 sum_i sigma_i^2/(2 beta_i) (1 - e^{-2 beta_i (T-t)})}.
pub fn deterministic_part(model: &SpotModel, t: f64, delivery: f64) -> Result<f64> {
    check_order(t, delivery)?;
    Ok(deterministic_part_unchecked(model, t, delivery))
}

/// Forward price f(t,T) = h(t,T) exp{X(t) + sum_i e^{-beta_i (T-t)} Y_i(t)}.
pub fn forward_price(model: &SpotModel, state: &MarketState, delivery: f64) -> Result<ForwardQuote> {
    check_order(state.t, delivery)?;
    Ok(forward_unchecked(model, state, delivery))
}

/// Forward curve on a sorted grid of delivery times.
pub fn forward_curve(
    model: &SpotModel,
    state: &MarketState,
    grid: &[f64],
) -> Result<Vec<ForwardQuote>> {
    for (i, pair) in grid.windows(2).enumerate() {
        if pair[1] < pair[0] {
            return Err(Error::UnsortedGrid { index: i });
        }
    }
    if let Some(first) = grid.first() {
        check_order(state.t, *first)?;
    }
    Ok(grid
        .iter()
        .map(|delivery| forward_unchecked(model, state, *delivery))
        .collect())
}

/// Average-delivery forward F(t, T1, T2) = (1/(T2-T1)) integral of f(t, u)
/// over [T1, T2], by composite Simpson on `nodes` points (odd, >= 3).
pub fn average_forward(
    model: &SpotModel,
    state: &MarketState,
    t1: f64,
    t2: f64,
    nodes: usize,
) -> Result<f64> {
    check_order(state.t, t1)?;
    if !(t2 > t1) {
        return Err(Error::TimeOrderViolation {
            what: format!("delivery window [{t1}, {t2}]"),
            requirement: "T1 < T2",
        });
    }
    let integral = composite_simpson(
        |u| forward_unchecked(model, state, u).price,
        t1,
        t2,
        nodes,
    )?;
    Ok(integral / (t2 - t1))
}
