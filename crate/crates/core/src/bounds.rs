//! Exact pricing/hedging errors from neglecting factors, and their
//! closed-form lower/upper bounds.
//!
//! Dropping a factor subset changes the option's volatility only (the
//! initial curve stays the full-I one), so by the mean value theorem the
//! price gap C_I - C_J equals the vega in variance at an intermediate
//! variance times the variance gap sum_{i in I\J} c_i e^{-2 beta_i (T-tau)}.
//! Bounding the vega factors over the variance interval
//! [sigma_B^2, sigma_B^2 + sum c_i] and the initial curve by
//! Lambda_l/Lambda_u yields coefficients alpha <= gamma with
//!
//!   alpha * S(T) <= C_I - C_J <= gamma * S(T),
//!   S(T) = sum_{i in I\J} c_i e^{-(2 beta_i - b)(T - tau)},  b = mu + sigma^2/2.
//!
//! The hedging error |Delta_I - Delta_J| admits the same treatment with
//! coefficients h <= g and the plain decay rate 2 beta_i (no b shift),
//! valid outside the regime sigma_B^2 < 2 ln(delta) < sigma_B^2 + sum c_i
//! where the derivative of Phi(d1(z)) changes sign.
//!
//! Both bound derivations require r = 0; non-zero rates are rejected
//! rather than heuristically discounted.

use crate::error::{Error, Result};
use crate::forward::forward_price;
use crate::model::{FactorSelection, MarketState, OptionSpec, SpotModel};
use crate::pricing::{
    black_delta, black_inputs, c_coefficient, moneyness, option_price, resolve_strike,
    vega_in_variance, BlackInputs,
};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// One neglected factor's contribution to the bound decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayTerm {
    /// 1-based factor index in I \ J.
    pub index: usize,
    /// Variance contribution c_i accumulated up to exercise.
    pub c: f64,
    /// Exponential decay rate: 2 beta_i - b for pricing, 2 beta_i for hedging.
    pub rate: f64,
}

/// Exact error together with its closed-form envelope at one delivery time.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBoundReport {
    /// Delivery midpoint T (days).
    pub delivery: f64,
    /// C_I - C_J (currency) or |Delta_I - Delta_J| (dimensionless).
    pub exact: f64,
    pub lower: f64,
    pub upper: f64,
    /// alpha (pricing) or h (hedging).
    pub lower_coeff: f64,
    /// gamma (pricing) or g (hedging).
    pub upper_coeff: f64,
    /// b = mu + sigma^2/2 per day (shifts the pricing decay only).
    pub growth_rate: f64,
    pub decay_terms: Vec<DecayTerm>,
}

/// Convergence diagnostic for one neglected factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorRate {
    pub index: usize,
    /// 2 beta_i - b.
    pub rate: f64,
    pub converges: bool,
}

/// Whether the pricing error vanishes as the delivery horizon grows.
#[derive(Debug, Clone, PartialEq)]
pub struct RateDiagnostic {
    pub factors: Vec<FactorRate>,
    pub all_converge: bool,
}

/// C_I - C_J: full-selection price minus the reduced-selection price, both
/// on the shared full-I initial curve. Non-negative for J subset of I.
pub fn exact_pricing_error(
    model: &SpotModel,
    state: &MarketState,
    spec: &OptionSpec,
    reduced: &FactorSelection,
) -> Result<f64> {
    reduced.validate_for(model.n_factors())?;
    let full = option_price(model, state, spec, &FactorSelection::full(model.n_factors()))?;
    let part = option_price(model, state, spec, reduced)?;
    Ok(full - part)
}

/// |Delta_I - Delta_J| under the shared initial curve.
pub fn exact_hedging_error(
    model: &SpotModel,
    state: &MarketState,
    spec: &OptionSpec,
    reduced: &FactorSelection,
) -> Result<f64> {
    reduced.validate_for(model.n_factors())?;
    let full = black_delta(&black_inputs(
        model,
        state,
        spec,
        &FactorSelection::full(model.n_factors()),
    )?)?;
    let part = black_delta(&black_inputs(model, state, spec, reduced)?)?;
    Ok((full - part).abs())
}

struct BoundContext {
    delta: f64,
    b: f64,
    sigma_b_sq: f64,
    /// c_i for every factor.
    c: Vec<f64>,
    c_sum: f64,
    /// sum_i sigma_i^2 / (2 beta_i), the tau -> infinity limit of c_sum.
    c_inf_sum: f64,
    neglected: Vec<usize>,
}

fn bound_context(
    model: &SpotModel,
    state: &MarketState,
    spec: &OptionSpec,
    reduced: &FactorSelection,
) -> Result<BoundContext> {
    reduced.validate_for(model.n_factors())?;
    if spec.r != 0.0 {
        return Err(Error::NonzeroRateUnsupported { r: spec.r });
    }
    if !(state.t <= spec.tau && spec.tau <= spec.delivery) {
        return Err(Error::TimeOrderViolation {
            what: format!(
                "t = {}, tau = {}, T = {}",
                state.t, spec.tau, spec.delivery
            ),
            requirement: "t <= tau <= T",
        });
    }
    let sigma_b_sq = model.sigma * model.sigma * (spec.tau - state.t);
    if sigma_b_sq <= 0.0 {
        return Err(Error::ZeroSigmaB);
    }
    let c: Vec<f64> = model
        .factors
        .iter()
        .map(|f| c_coefficient(f, state.t, spec.tau))
        .collect::<Result<_>>()?;
    Ok(BoundContext {
        delta: moneyness(model, state, spec)?,
        b: model.growth_rate(),
        sigma_b_sq,
        c_sum: c.iter().sum(),
        c_inf_sum: model
            .factors
            .iter()
            .map(|f| f.sigma * f.sigma / (2.0 * f.beta))
            .sum(),
        c,
        neglected: reduced.neglected(model.n_factors()),
    })
}

fn decay_sum(terms: &[DecayTerm], horizon: f64) -> f64 {
    terms.iter().map(|d| d.c * (-d.rate * horizon).exp()).sum()
}

/// Closed-form envelope of the pricing error C_I - C_J at the spec's
/// delivery time. The seasonality bounds Lambda_l, Lambda_u are taken over
/// `horizon`, defaulting to [t, T]. Requires r = 0 and sigma_B > 0.
pub fn pricing_error_bounds(
    model: &SpotModel,
    state: &MarketState,
    spec: &OptionSpec,
    reduced: &FactorSelection,
    horizon: Option<(f64, f64)>,
) -> Result<ErrorBoundReport> {
    let ctx = bound_context(model, state, spec, reduced)?;
    let (start, end) = horizon.unwrap_or((state.t, spec.delivery));
    let (lambda_lo, lambda_hi) = model.seasonality.bounds(start, end)?;

    let sigma_b = ctx.sigma_b_sq.sqrt();
    let var_cap = ctx.sigma_b_sq + ctx.c_sum;
    let y_neg: f64 = state.y.iter().filter(|y| **y <= 0.0).sum();
    let y_pos: f64 = state.y.iter().filter(|y| **y > 0.0).sum();
    let time_to_exercise = spec.tau - state.t;

    // Lower coefficient: smallest vega in variance times the lowest initial
    // curve, the normal density bounded below at the farthest d2 can get.
    let d2_reach = ctx.delta.ln().abs() / sigma_b + 0.5 * var_cap.sqrt();
    let alpha = lambda_lo / ctx.delta / (2.0 * (2.0 * std::f64::consts::PI * var_cap).sqrt())
        * (ctx.b * time_to_exercise - 0.5 * d2_reach * d2_reach + state.x + y_neg).exp();
    // Upper coefficient: the proof's bound on the initial curve carries
    // exp{sum_i sigma_i^2/(4 beta_i)} (the proposition statement drops it,
    // which breaks the envelope for long horizons).
    let gamma = lambda_hi / ctx.delta / (2.0 * (2.0 * std::f64::consts::PI * ctx.sigma_b_sq).sqrt())
        * (ctx.b * time_to_exercise + 0.5 * ctx.c_inf_sum + state.x + y_pos).exp();

    let decay_terms: Vec<DecayTerm> = ctx
        .neglected
        .iter()
        .map(|&i| DecayTerm {
            index: i,
            c: ctx.c[i - 1],
            rate: 2.0 * model.factors[i - 1].beta - ctx.b,
        })
        .collect();
    let series = decay_sum(&decay_terms, spec.delivery - spec.tau);

    Ok(ErrorBoundReport {
        delivery: spec.delivery,
        exact: exact_pricing_error(model, state, spec, reduced)?,
        lower: alpha * series,
        upper: gamma * series,
        lower_coeff: alpha,
        upper_coeff: gamma,
        growth_rate: ctx.b,
        decay_terms,
    })
}

/// Asymptotic pricing-error proxy: the vega in variance pinned at the
/// variance floor sigma_B^2 (on the live initial curve, which carries the
/// e^{b(T-tau)} growth) times the exact variance gap
/// sum_{i in I\J} c_i e^{-2 beta_i (T-tau)}. An approximation of the
/// error's large-T shape, not a bound.
pub fn asymptotic_error(
    model: &SpotModel,
    state: &MarketState,
    spec: &OptionSpec,
    reduced: &FactorSelection,
    delivery: f64,
) -> Result<f64> {
    let spec_at = OptionSpec {
        delivery,
        ..*spec
    };
    let ctx = bound_context(model, state, &spec_at, reduced)?;
    let forward = forward_price(model, state, delivery)?.price;
    let strike = resolve_strike(model, state, &spec_at)?;
    let vega_at_floor = vega_in_variance(&BlackInputs {
        forward,
        strike,
        total_std: ctx.sigma_b_sq.sqrt(),
        discount: 1.0,
    })?;
    let gap: f64 = ctx
        .neglected
        .iter()
        .map(|&i| {
            ctx.c[i - 1] * (-2.0 * model.factors[i - 1].beta * (delivery - spec_at.tau)).exp()
        })
        .sum();
    Ok(vega_at_floor * gap)
}

/// Per neglected factor: the decay rate 2 beta_i - b and whether the
/// pricing error converges to zero as T grows (rate > 0).
pub fn rate_diagnostic(model: &SpotModel, reduced: &FactorSelection) -> Result<RateDiagnostic> {
    reduced.validate_for(model.n_factors())?;
    let b = model.growth_rate();
    let factors: Vec<FactorRate> = reduced
        .neglected(model.n_factors())
        .into_iter()
        .map(|i| {
            let rate = 2.0 * model.factors[i - 1].beta - b;
            FactorRate {
                index: i,
                rate,
                converges: rate > 0.0,
            }
        })
        .collect();
    let all_converge = factors.iter().all(|f| f.converges);
    Ok(RateDiagnostic {
        factors,
        all_converge,
    })
}

/// Closed-form envelope of the hedging error |Delta_I - Delta_J| at the
/// spec's delivery time. Covered regimes: 2 ln(delta) <= sigma_B^2 or
/// 2 ln(delta) >= sigma_B^2 + sum c_i; the gap in between is refused.
pub fn hedging_error_bounds(
    model: &SpotModel,
    state: &MarketState,
    spec: &OptionSpec,
    reduced: &FactorSelection,
) -> Result<ErrorBoundReport> {
    let ctx = bound_context(model, state, spec, reduced)?;
    let two_ln_delta = 2.0 * ctx.delta.ln();
    let var_cap = ctx.sigma_b_sq + ctx.c_sum;

    let low_regime = two_ln_delta <= ctx.sigma_b_sq;
    if !low_regime && two_ln_delta < var_cap {
        return Err(Error::RegimeNotCovered {
            two_ln_delta,
            sigma_b_sq: ctx.sigma_b_sq,
            c_sum: ctx.c_sum,
        });
    }

    let ln_delta = ctx.delta.ln();
    let k = (-0.5 * (ln_delta * ln_delta / ctx.sigma_b_sq + ln_delta.abs() + 0.25 * var_cap)).exp();
    let scale = 1.0 / (4.0 * SQRT_2PI);
    // |z - 2 ln delta| is extremal at the interval ends; which end is the
    // max/min flips between the two covered regimes.
    let (g, h) = if low_regime {
        (
            scale * ctx.sigma_b_sq.powf(-1.5) * (var_cap - two_ln_delta).abs(),
            k * scale * var_cap.powf(-1.5) * (ctx.sigma_b_sq - two_ln_delta).abs(),
        )
    } else {
        (
            scale * ctx.sigma_b_sq.powf(-1.5) * (ctx.sigma_b_sq - two_ln_delta).abs(),
            k * scale * var_cap.powf(-1.5) * (var_cap - two_ln_delta).abs(),
        )
    };

    let decay_terms: Vec<DecayTerm> = ctx
        .neglected
        .iter()
        .map(|&i| DecayTerm {
            index: i,
            c: ctx.c[i - 1],
            rate: 2.0 * model.factors[i - 1].beta,
        })
        .collect();
    let series = decay_sum(&decay_terms, spec.delivery - spec.tau);

    Ok(ErrorBoundReport {
        delivery: spec.delivery,
        exact: exact_hedging_error(model, state, spec, reduced)?,
        lower: h * series,
        upper: g * series,
        lower_coeff: h,
        upper_coeff: g,
        growth_rate: ctx.b,
        decay_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FactorSelection, Scenario, Strike};

    fn example() -> Scenario {
        Scenario::example()
    }

    fn spec_at(sc: &Scenario, delivery: f64) -> OptionSpec {
        OptionSpec {
            delivery,
            ..sc.option
        }
    }

    // Frozen from 40-digit evaluation of the proof-derived coefficients.
    const ALPHA: f64 = 47.3070923482;
    const GAMMA: f64 = 63.1462963412;
    const LOWER_25: f64 = 0.0068067807424;
    const UPPER_25: f64 = 0.0090858045285;
    const EXACT_25: f64 = 0.0087792146577;
    const HEDGE_G: f64 = 5.61046500132;
    const HEDGE_H: f64 = 1.32901636812;
    const HEDGE_LOWER_25: f64 = 1.91082148015e-4;
    const HEDGE_UPPER_25: f64 = 8.06656508927e-4;
    const HEDGE_EXACT_25: f64 = 4.38178030071e-4;

    #[test]
    fn exact_pricing_error_example() {
        let sc = example();
        let err = exact_pricing_error(&sc.model, &sc.state, &sc.option, &sc.selection).unwrap();
        assert!((err - EXACT_25).abs() < 1e-10);
        assert!((err - 0.008774).abs() < 1e-4);
        assert!(err >= 0.0);
    }

    #[test]
    fn exact_pricing_error_vanishes_for_full_selection() {
        let sc = example();
        let err =
            exact_pricing_error(&sc.model, &sc.state, &sc.option, &FactorSelection::full(2))
                .unwrap();
        assert_eq!(err, 0.0);
    }

    #[test]
    fn relative_pricing_error_example_values() {
        let sc = example();
        let err = exact_pricing_error(&sc.model, &sc.state, &sc.option, &sc.selection).unwrap();
        let reduced = option_price(&sc.model, &sc.state, &sc.option, &sc.selection).unwrap();
        let rel25 = err / reduced;
        assert!((0.065..=0.075).contains(&rel25), "rel25 = {rel25}");

        let spec55 = spec_at(&sc, 55.0);
        let err55 = exact_pricing_error(&sc.model, &sc.state, &spec55, &sc.selection).unwrap();
        let reduced55 = option_price(&sc.model, &sc.state, &spec55, &sc.selection).unwrap();
        assert!(err55 / reduced55 < 0.005);
    }

    #[test]
    fn pricing_bounds_example_values() {
        let sc = example();
        let report =
            pricing_error_bounds(&sc.model, &sc.state, &sc.option, &sc.selection, None).unwrap();
        assert!((report.lower_coeff - ALPHA).abs() < 1e-6);
        assert!((report.upper_coeff - GAMMA).abs() < 1e-6);
        assert_eq!(report.growth_rate, 5e-5);
        assert!((report.lower - LOWER_25).abs() < 1e-10);
        assert!((report.upper - UPPER_25).abs() < 1e-10);
        // spec tolerances
        assert!((report.lower - 0.006807).abs() < 1e-5);
        assert!((report.upper - 0.009080).abs() < 1e-5);
        assert!(report.lower <= report.exact && report.exact <= report.upper);
        assert_eq!(report.decay_terms.len(), 1);
        assert_eq!(report.decay_terms[0].index, 2);
        assert!((report.decay_terms[0].rate - 0.09895).abs() < 1e-12);
    }

    #[test]
    fn pricing_bounds_sandwich_on_example_grid() {
        let sc = example();
        for t_delivery in 11..=80 {
            let spec = spec_at(&sc, t_delivery as f64);
            let r = pricing_error_bounds(&sc.model, &sc.state, &spec, &sc.selection, None).unwrap();
            assert!(
                r.lower <= r.exact && r.exact <= r.upper && r.lower >= 0.0,
                "T = {t_delivery}: lower {} exact {} upper {}",
                r.lower,
                r.exact,
                r.upper
            );
        }
    }

    #[test]
    fn pricing_bounds_zero_for_full_selection() {
        let sc = example();
        let r = pricing_error_bounds(&sc.model, &sc.state, &sc.option, &FactorSelection::full(2), None)
            .unwrap();
        assert_eq!(r.lower, 0.0);
        assert_eq!(r.upper, 0.0);
        assert!(r.decay_terms.is_empty());
    }

    #[test]
    fn pricing_bounds_reject_nonzero_rate_and_zero_sigma_b() {
        let mut sc = example();
        sc.option.r = 1e-4;
        assert!(matches!(
            pricing_error_bounds(&sc.model, &sc.state, &sc.option, &sc.selection, None),
            Err(Error::NonzeroRateUnsupported { .. })
        ));
        let mut sc2 = example();
        sc2.model.sigma = 0.0;
        assert_eq!(
            pricing_error_bounds(&sc2.model, &sc2.state, &sc2.option, &sc2.selection, None),
            Err(Error::ZeroSigmaB)
        );
    }

    #[test]
    fn asymptotic_error_sits_inside_bounds_at_long_horizons() {
        let sc = example();
        for t_delivery in [50.0, 60.0, 70.0, 80.0] {
            let spec = spec_at(&sc, t_delivery);
            let r = pricing_error_bounds(&sc.model, &sc.state, &spec, &sc.selection, None).unwrap();
            let a =
                asymptotic_error(&sc.model, &sc.state, &sc.option, &sc.selection, t_delivery)
                    .unwrap();
            assert!(r.lower <= a && a <= r.upper, "T = {t_delivery}: {a} not in [{}, {}]", r.lower, r.upper);
            let ratio = a / r.exact;
            assert!((0.5..=2.0).contains(&ratio), "T = {t_delivery}: ratio {ratio}");
        }
    }

    #[test]
    fn asymptotic_error_vanishes_for_full_selection() {
        let sc = example();
        let a = asymptotic_error(&sc.model, &sc.state, &sc.option, &FactorSelection::full(2), 80.0)
            .unwrap();
        assert_eq!(a, 0.0);
    }

    #[test]
    fn rate_diagnostic_example() {
        let sc = example();
        let d = rate_diagnostic(&sc.model, &sc.selection).unwrap();
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].index, 2);
        assert!((d.factors[0].rate - 0.09895).abs() < 1e-12);
        assert!(d.factors[0].converges);
        assert!(d.all_converge);
    }

    #[test]
    fn rate_diagnostic_flags_divergence_and_handles_full_selection() {
        let mut sc = example();
        sc.model.mu = 0.2; // b > 2 beta_2
        let d = rate_diagnostic(&sc.model, &sc.selection).unwrap();
        assert!(!d.factors[0].converges);
        assert!(!d.all_converge);

        let full = rate_diagnostic(&sc.model, &FactorSelection::full(2)).unwrap();
        assert!(full.factors.is_empty());
        assert!(full.all_converge);
    }

    #[test]
    fn exact_hedging_error_example() {
        let sc = example();
        let err = exact_hedging_error(&sc.model, &sc.state, &sc.option, &sc.selection).unwrap();
        assert!((err - HEDGE_EXACT_25).abs() < 1e-10);
        assert!((err - 4.382e-4).abs() < 1e-6);
        assert_eq!(
            exact_hedging_error(&sc.model, &sc.state, &sc.option, &FactorSelection::full(2))
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn exact_hedging_error_decreases_on_example_grid() {
        let sc = example();
        let mut last = f64::INFINITY;
        for t_delivery in 25..=80 {
            let spec = spec_at(&sc, t_delivery as f64);
            let err = exact_hedging_error(&sc.model, &sc.state, &spec, &sc.selection).unwrap();
            assert!(err < last, "not decreasing at T = {t_delivery}");
            last = err;
        }
    }

    #[test]
    fn hedging_bounds_example_values() {
        let sc = example();
        let r = hedging_error_bounds(&sc.model, &sc.state, &sc.option, &sc.selection).unwrap();
        assert!((r.upper_coeff - HEDGE_G).abs() < 1e-8);
        assert!((r.lower_coeff - HEDGE_H).abs() < 1e-8);
        assert!((r.lower - HEDGE_LOWER_25).abs() < 1e-12);
        assert!((r.upper - HEDGE_UPPER_25).abs() < 1e-12);
        // spec tolerances
        assert!((r.upper_coeff - 5.6105).abs() < 1e-4);
        assert!((r.lower_coeff - 1.3291).abs() < 1e-4);
        assert!((r.lower - 1.911e-4).abs() < 1e-7);
        assert!((r.upper - 8.066e-4).abs() < 1e-7);
        assert!(r.lower <= r.exact && r.exact <= r.upper);
        assert_eq!(r.decay_terms[0].rate, 2.0 * sc.model.factors[1].beta);
    }

    #[test]
    fn hedging_bounds_zero_for_full_selection() {
        let sc = example();
        let r = hedging_error_bounds(&sc.model, &sc.state, &sc.option, &FactorSelection::full(2))
            .unwrap();
        assert_eq!((r.lower, r.upper, r.exact), (0.0, 0.0, 0.0));
    }

    #[test]
    fn hedging_bounds_refuse_uncovered_regime() {
        let sc = example();
        // 2 ln(delta) placed midway between sigma_B^2 and sigma_B^2 + sum c_i.
        let sigma_b_sq = 1e-3f64;
        let c_sum = 7.7888872736e-4f64;
        let delta = ((2.0 * sigma_b_sq + c_sum) / 4.0).exp();
        let spec = OptionSpec {
            strike: Strike::Moneyness(delta),
            ..sc.option
        };
        assert!(matches!(
            hedging_error_bounds(&sc.model, &sc.state, &spec, &sc.selection),
            Err(Error::RegimeNotCovered { .. })
        ));
    }

    #[test]
    fn hedging_bounds_cover_the_high_moneyness_regime() {
        // 2 ln(delta) >= sigma_B^2 + sum c_i needs volatilities large enough
        // that the deltas stay resolvable in f64.
        let mut sc = example();
        sc.model.sigma = 0.2;
        sc.model.factors[0].sigma = 0.2;
        sc.model.factors[1].sigma = 0.2;
        let spec = OptionSpec {
            strike: Strike::Moneyness(1.6),
            ..sc.option
        };
        let r = hedging_error_bounds(&sc.model, &sc.state, &spec, &sc.selection).unwrap();
        assert!(r.lower <= r.exact && r.exact <= r.upper);
        assert!(r.lower > 0.0);
    }

    #[test]
    fn log_upper_bound_is_affine_with_the_neglected_rate() {
        let sc = example();
        // Single neglected factor: log(upper) is exactly affine in T with
        // slope -(2 beta_2 - b); fit over T in 40..80.
        let mut points = Vec::new();
        for t_delivery in 40..=80 {
            let spec = spec_at(&sc, t_delivery as f64);
            let r = pricing_error_bounds(&sc.model, &sc.state, &spec, &sc.selection, None).unwrap();
            points.push((t_delivery as f64, r.upper.ln()));
        }
        let n = points.len() as f64;
        let mean_t = points.iter().map(|p| p.0).sum::<f64>() / n;
        let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
        let slope = points
            .iter()
            .map(|p| (p.0 - mean_t) * (p.1 - mean_y))
            .sum::<f64>()
            / points.iter().map(|p| (p.0 - mean_t).powi(2)).sum::<f64>();
        assert!((slope - (-0.09895)).abs() < 1e-6, "slope = {slope}");
        let max_residual = points
            .iter()
            .map(|p| (p.1 - (mean_y + slope * (p.0 - mean_t))).abs())
            .fold(0.0, f64::max);
        assert!(max_residual <= 1e-9, "residual = {max_residual}");
    }
}
