//! Composite volatility of the log-forward over [t, tau], Black's formula
//! for calls on forwards, delta, and vega in variance.
//!
//! The log return of f(., T) over [t, tau] is Gaussian with standard
//! deviation sigma_sel(T) = sqrt(sigma^2 (tau - t)
//! + sum_{i in sel} c_i e^{-2 beta_i (T - tau)}), where
//! c_i = sigma_i^2/(2 beta_i) (1 - e^{-2 beta_i (tau - t)}) is the variance
//! each factor accumulates up to exercise. Black's formula then prices the
//! call; a reduced selection J changes the volatility only, never the
//! initial curve (always the full-I f(t,T)).

use crate::error::{Error, Result};
use crate::forward::forward_price;
use crate::model::{FactorSelection, MarketState, MeanRevertingFactor, OptionSpec, SpotModel, Strike};
use crate::normal;

/// Volatility decomposition at a given delivery time.
#[derive(Debug, Clone, PartialEq)]
pub struct VolBreakdown {
    /// Non-stationary floor sigma_B = sigma * sqrt(tau - t).
    pub sigma_b: f64,
    /// c_i for every model factor (1-based index i maps to c[i - 1]).
    pub c: Vec<f64>,
    /// sigma_sel(T): std dev of the log-forward return for the selection.
    pub total: f64,
    pub selection: FactorSelection,
}

impl VolBreakdown {
    /// Variance total^2.
    pub fn variance(&self) -> f64 {
        self.total * self.total
    }

    /// T-independent upper volatility cap sqrt(sigma_B^2 + sum_{i in I} c_i).
    pub fn cap(&self) -> f64 {
        (self.sigma_b * self.sigma_b + self.c.iter().sum::<f64>()).sqrt()
    }
}

/// Variance contribution c_i = sigma_i^2/(2 beta_i) (1 - e^{-2 beta_i (tau-t)}).
pub fn c_coefficient(factor: &MeanRevertingFactor, t: f64, tau: f64) -> Result<f64> {
    if tau < t {
        return Err(Error::TimeOrderViolation {
            what: format!("tau = {tau} before t = {t}"),
            requirement: "tau >= t",
        });
    }
    let sig2 = factor.sigma * factor.sigma;
    Ok(sig2 / (2.0 * factor.beta) * (1.0 - (-2.0 * factor.beta * (tau - t)).exp()))
}

/// Volatility breakdown of the log forward over [t, tau] at delivery T for
/// a factor selection; an empty selection yields the floor sigma_B.
pub fn total_vol(
    model: &SpotModel,
    t: f64,
    tau: f64,
    delivery: f64,
    selection: &FactorSelection,
) -> Result<VolBreakdown> {
    if !(t <= tau && tau <= delivery) {
        return Err(Error::TimeOrderViolation {
            what: format!("t = {t}, tau = {tau}, T = {delivery}"),
            requirement: "t <= tau <= T",
        });
    }
    selection.validate_for(model.n_factors())?;
    let sigma_b_sq = model.sigma * model.sigma * (tau - t);
    let mut c = Vec::with_capacity(model.n_factors());
    let mut variance = sigma_b_sq;
    for (i, factor) in model.factors.iter().enumerate() {
        let ci = c_coefficient(factor, t, tau)?;
        if selection.contains(i + 1) {
            variance += ci * (-2.0 * factor.beta * (delivery - tau)).exp();
        }
        c.push(ci);
    }
    Ok(VolBreakdown {
        sigma_b: sigma_b_sq.sqrt(),
        c,
        total: variance.sqrt(),
        selection: selection.clone(),
    })
}

/// Standard normal CDF, accurate to better than 1e-12 absolute.
pub use crate::normal::cdf as std_normal_cdf;

/// Inputs to Black's formula on a forward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackInputs {
    /// Forward price f(t, T).
    pub forward: f64,
    /// Strike K.
    pub strike: f64,
    /// Std dev of the log return over [t, tau].
    pub total_std: f64,
    /// Discount factor e^{-r (tau - t)}.
    pub discount: f64,
}

impl BlackInputs {
    pub fn validate(&self) -> Result<()> {
        if !(self.forward.is_finite() && self.forward > 0.0) {
            return Err(Error::NonPositiveForward {
                value: self.forward,
            });
        }
        if !(self.strike.is_finite() && self.strike > 0.0) {
            return Err(Error::NonPositiveStrike { value: self.strike });
        }
        if !(self.total_std.is_finite() && self.total_std >= 0.0) {
            return Err(Error::NonFiniteParam {
                name: "total_std".to_string(),
                value: self.total_std,
            });
        }
        if !(self.discount.is_finite() && self.discount > 0.0 && self.discount <= 1.0) {
            return Err(Error::BadDiscount {
                value: self.discount,
            });
        }
        Ok(())
    }

    // d1 and d2 from log(f/K) directly, avoiding cancellation through delta.
    fn d1_d2(&self) -> (f64, f64) {
        let z = self.total_std * self.total_std;
        let d2 = ((self.forward / self.strike).ln() - 0.5 * z) / self.total_std;
        (d2 + self.total_std, d2)
    }
}

/// Black call price discount * (f Phi(d1) - K Phi(d2)); at zero volatility
/// this is the discounted intrinsic value (the continuous limit).
pub fn black_call(inputs: &BlackInputs) -> Result<f64> {
    inputs.validate()?;
    if inputs.total_std == 0.0 {
        return Ok(inputs.discount * (inputs.forward - inputs.strike).max(0.0));
    }
    let (d1, d2) = inputs.d1_d2();
    Ok(inputs.discount
        * (inputs.forward * normal::cdf(d1) - inputs.strike * normal::cdf(d2)))
}

/// Delta hedge discount * Phi(d1), the derivative of the call in the forward.
pub fn black_delta(inputs: &BlackInputs) -> Result<f64> {
    inputs.validate()?;
    if inputs.total_std == 0.0 {
        if inputs.forward == inputs.strike {
            return Err(Error::ZeroVolatility {
                what: "black_delta at f = K",
            });
        }
        return Ok(if inputs.forward > inputs.strike {
            inputs.discount
        } else {
            0.0
        });
    }
    let (d1, _) = inputs.d1_d2();
    Ok(inputs.discount * normal::cdf(d1))
}

/// dC/dz = f phi(d1(z)) / (2 sqrt(z)) with z the variance of the log return.
pub fn vega_in_variance(inputs: &BlackInputs) -> Result<f64> {
    inputs.validate()?;
    if inputs.total_std == 0.0 {
        return Err(Error::ZeroVolatility {
            what: "vega_in_variance",
        });
    }
    let (d1, _) = inputs.d1_d2();
    Ok(inputs.forward * normal::pdf(d1) / (2.0 * inputs.total_std))
}

/// Strike level implied by the spec: K itself, or f_I(t,T)/delta under the
/// moneyness rule (the initial curve is always the full-I one).
pub fn resolve_strike(model: &SpotModel, state: &MarketState, spec: &OptionSpec) -> Result<f64> {
    spec.strike.validate()?;
    match spec.strike {
        Strike::Absolute(k) => Ok(k),
        Strike::Moneyness(delta) => {
            let f = forward_price(model, state, spec.delivery)?.price;
            Ok(f / delta)
        }
    }
}

/// Moneyness delta = f_I(t,T) / K implied by the spec.
pub fn moneyness(model: &SpotModel, state: &MarketState, spec: &OptionSpec) -> Result<f64> {
    spec.strike.validate()?;
    match spec.strike {
        Strike::Moneyness(delta) => Ok(delta),
        Strike::Absolute(k) => {
            let f = forward_price(model, state, spec.delivery)?.price;
            Ok(f / k)
        }
    }
}

/// Assembles the Black inputs for a spec under a factor selection: the
/// full-I initial curve, the resolved strike, sigma_sel(T), and the
/// discount over [t, tau].
pub fn black_inputs(
    model: &SpotModel,
    state: &MarketState,
    spec: &OptionSpec,
    selection: &FactorSelection,
) -> Result<BlackInputs> {
    if !(state.t <= spec.tau && spec.tau <= spec.delivery) {
        return Err(Error::TimeOrderViolation {
            what: format!(
                "t = {}, tau = {}, T = {}",
                state.t, spec.tau, spec.delivery
            ),
            requirement: "t <= tau <= T",
        });
    }
    let forward = forward_price(model, state, spec.delivery)?.price;
    let strike = resolve_strike(model, state, spec)?;
    let vol = total_vol(model, state.t, spec.tau, spec.delivery, selection)?;
    Ok(BlackInputs {
        forward,
        strike,
        total_std: vol.total,
        discount: spec.discount_from(state.t),
    })
}

/// Call price under the selection: C_I for the full set, C_J for a subset
/// (reduced volatility, unchanged initial curve).
pub fn option_price(
    model: &SpotModel,
    state: &MarketState,
    spec: &OptionSpec,
    selection: &FactorSelection,
) -> Result<f64> {
    black_call(&black_inputs(model, state, spec, selection)?)
}
