//! Seeded Monte Carlo oracle: exact Gaussian transitions for the factors,
//! estimators for forwards, option prices, and the average-delivery
//! forward, with confidence intervals and chunk-count-independent
//! determinism.
//!
//! X and the Y_i admit exact one-step transition laws, so the only time
//! discretization anywhere is the trapezoid average inside
//! [`mc_average_forward`]. Every path draws from its own ChaCha12 stream
//! keyed by (seed, path index); estimator values are written into a
//! per-path buffer (chunks only partition the fill across threads) and
//! reduced sequentially, so results are bit-identical for any chunk count.
//! Standard normals come from the inverse-CDF transform, which makes the
//! antithetic mirror Z -> -Z exact.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::forward_price;
use crate::model::{FactorSelection, MarketState, OptionSpec, SpotModel, Strike};
use crate::normal;
use crate::pricing::c_coefficient;

/// 97.5% normal quantile used for the reported confidence intervals.
pub const CI95_MULTIPLIER: f64 = 1.959964;

/// Simulation configuration. Estimates are a pure function of
/// (seed, paths, antithetic); `chunks` only controls parallelism.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub seed: u64,
    #[serde(default = "default_paths")]
    pub paths: u64,
    #[serde(default = "default_antithetic")]
    pub antithetic: bool,
    #[serde(default = "default_chunks")]
    pub chunks: usize,
}

fn default_paths() -> u64 {
    1_000_000
}

fn default_antithetic() -> bool {
    true
}

fn default_chunks() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

impl McConfig {
    /// Defaults: 10^6 paths, antithetic on, chunks = available parallelism.
    pub fn new(seed: u64) -> Self {
        McConfig {
            seed,
            paths: default_paths(),
            antithetic: default_antithetic(),
            chunks: default_chunks(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.paths < 2 {
            return Err(Error::InvalidMcConfig {
                reason: format!("paths must be >= 2, got {}", self.paths),
            });
        }
        if self.antithetic && self.paths % 2 != 0 {
            return Err(Error::InvalidMcConfig {
                reason: format!(
                    "paths must be even with antithetic sampling, got {}",
                    self.paths
                ),
            });
        }
        if self.chunks == 0 {
            return Err(Error::InvalidMcConfig {
                reason: "chunks must be >= 1".to_string(),
            });
        }
        Ok(())
    }
}

/// Point estimate with its standard error and 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
    pub paths: u64,
    pub seed: u64,
}

impl McEstimate {
    fn from_stats(mean: f64, stderr: f64, cfg: &McConfig) -> Self {
        McEstimate {
            mean,
            stderr,
            ci95: (
                mean - CI95_MULTIPLIER * stderr,
                mean + CI95_MULTIPLIER * stderr,
            ),
            paths: cfg.paths,
            seed: cfg.seed,
        }
    }
}

/// z-score of a Monte Carlo estimate against a closed-form value; 0 when a
/// degenerate (zero-stderr) estimate matches the value exactly.
pub fn z_score(estimate: &McEstimate, closed_form: f64) -> f64 {
    let diff = estimate.mean - closed_form;
    if estimate.stderr > 0.0 {
        diff / estimate.stderr
    } else if diff.abs() <= 1e-12 * (1.0 + closed_form.abs()) {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    }
}

/// Reproducible standard-normal stream for one path: ChaCha12 keyed by the
/// seed, stream id = path index, with an optional sign mirror for the
/// antithetic partner.
pub struct NormalSource {
    rng: ChaCha12Rng,
    mirror: bool,
}

impl NormalSource {
    pub fn for_path(seed: u64, path: u64, mirror: bool) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(path);
        NormalSource { rng, mirror }
    }

    /// Next standard normal via the inverse CDF of a uniform in (0, 1).
    pub fn sample(&mut self) -> f64 {
        let u = ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0);
        let z = normal::inv_cdf(u);
        if self.mirror {
            -z
        } else {
            z
        }
    }
}

/// Terminal factor levels from one exact transition.
#[derive(Debug, Clone, PartialEq)]
pub struct Terminal {
    pub x: f64,
    pub y: Vec<f64>,
}

// One exact step: X(u) = X + mu dt + sigma sqrt(dt) Z0;
// Y_i(u) = e^{-beta_i dt} Y_i + sqrt(sigma_i^2/(2 beta_i)(1 - e^{-2 beta_i dt})) Z_i.
// Draw order: Z0 first, then factors in index order.
fn step_exact(
    model: &SpotModel,
    x: f64,
    y: &mut [f64],
    dt: f64,
    normals: &mut NormalSource,
) -> f64 {
    let x_next = x + model.mu * dt + model.sigma * dt.sqrt() * normals.sample();
    for (factor, yi) in model.factors.iter().zip(y.iter_mut()) {
        let decay = (-factor.beta * dt).exp();
        let var = factor.sigma * factor.sigma / (2.0 * factor.beta)
            * (1.0 - (-2.0 * factor.beta * dt).exp());
        *yi = decay * *yi + var.sqrt() * normals.sample();
    }
    x_next
}

/// Exact Gaussian transition of the full state from `state.t` to `u`;
/// no time-discretization error.
pub fn simulate_terminal(
    model: &SpotModel,
    state: &MarketState,
    u: f64,
    normals: &mut NormalSource,
) -> Result<Terminal> {
    if u < state.t {
        return Err(Error::TimeOrderViolation {
            what: format!("horizon u = {u} before t = {}", state.t),
            requirement: "u >= t",
        });
    }
    let mut y = state.y.clone();
    let x = step_exact(model, state.x, &mut y, u - state.t, normals);
    Ok(Terminal { x, y })
}

// Fills one value per sample index; `chunks` partitions the index range
// into contiguous blocks processed in parallel. Values depend only on
// (seed, index), so the outcome is independent of the partitioning.
fn sample_values<F>(n_samples: usize, chunks: usize, eval: F) -> Vec<f64>
where
    F: Fn(u64) -> f64 + Sync,
{
    let mut values = vec![0.0f64; n_samples];
    let chunk_len = n_samples.div_ceil(chunks).max(1);
    values
        .par_chunks_mut(chunk_len)
        .enumerate()
        .for_each(|(k, slice)| {
            let base = (k * chunk_len) as u64;
            for (offset, value) in slice.iter_mut().enumerate() {
                *value = eval(base + offset as u64);
            }
        });
    values
}

fn run_estimator<F>(cfg: &McConfig, eval: F) -> Result<McEstimate>
where
    F: Fn(&mut NormalSource) -> f64 + Sync,
{
    cfg.validate()?;
    let n_samples = if cfg.antithetic {
        (cfg.paths / 2) as usize
    } else {
        cfg.paths as usize
    };
    let values = sample_values(n_samples, cfg.chunks, |idx| {
        if cfg.antithetic {
            let plain = eval(&mut NormalSource::for_path(cfg.seed, idx, false));
            let mirrored = eval(&mut NormalSource::for_path(cfg.seed, idx, true));
            0.5 * (plain + mirrored)
        } else {
            eval(&mut NormalSource::for_path(cfg.seed, idx, false))
        }
    });
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(McEstimate::from_stats(mean, (var / n).sqrt(), cfg))
}

/// MC estimate of f(t,T) = E[S(T) | F_t] from exact terminal draws.
pub fn mc_forward(
    model: &SpotModel,
    state: &MarketState,
    delivery: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    if delivery < state.t {
        return Err(Error::TimeOrderViolation {
            what: format!("delivery T = {delivery} before t = {}", state.t),
            requirement: "T >= t",
        });
    }
    let level = model.seasonality.level(delivery);
    run_estimator(cfg, |normals| {
        let mut y = state.y.clone();
        let x = step_exact(model, state.x, &mut y, delivery - state.t, normals);
        level * (x + y.iter().sum::<f64>()).exp()
    })
}

// Per-component (half-variance, std dev) of the log return Z(t, tau, T)
// restricted to a selection: the Brownian part first, then each selected
// factor with variance c_i e^{-2 beta_i (T - tau)}.
fn log_return_components(
    model: &SpotModel,
    state: &MarketState,
    spec: &OptionSpec,
    selection: &FactorSelection,
) -> Result<Vec<(f64, f64)>> {
    if !(state.t <= spec.tau && spec.tau <= spec.delivery) {
        return Err(Error::TimeOrderViolation {
            what: format!(
                "t = {}, tau = {}, T = {}",
                state.t, spec.tau, spec.delivery
            ),
            requirement: "t <= tau <= T",
        });
    }
    selection.validate_for(model.n_factors())?;
    let mut components = Vec::with_capacity(1 + selection.len());
    let var_b = model.sigma * model.sigma * (spec.tau - state.t);
    components.push((0.5 * var_b, var_b.sqrt()));
    for i in selection.iter() {
        let factor = &model.factors[i - 1];
        let var = c_coefficient(factor, state.t, spec.tau)?
            * (-2.0 * factor.beta * (spec.delivery - spec.tau)).exp();
        components.push((0.5 * var, var.sqrt()));
    }
    Ok(components)
}

// Strike for simulation purposes; unlike the pricing path, K = 0 is allowed
// (the payoff degenerates to the forward, which is the martingale check).
fn mc_strike(model: &SpotModel, state: &MarketState, spec: &OptionSpec) -> Result<f64> {
    match spec.strike {
        Strike::Absolute(k) if k.is_finite() && k >= 0.0 => Ok(k),
        Strike::Absolute(k) => Err(Error::NonPositiveStrike { value: k }),
        Strike::Moneyness(_) => crate::pricing::resolve_strike(model, state, spec),
    }
}

/// MC estimate of the call price: simulates f(tau,T) = f(t,T) exp{Z} with Z
/// restricted to the selection's randomness (full-I initial curve and
/// strike), and discounts the mean payoff.
pub fn mc_option(
    model: &SpotModel,
    state: &MarketState,
    spec: &OptionSpec,
    selection: &FactorSelection,
    cfg: &McConfig,
) -> Result<McEstimate> {
    let components = log_return_components(model, state, spec, selection)?;
    let f0 = forward_price(model, state, spec.delivery)?.price;
    let strike = mc_strike(model, state, spec)?;
    let discount = spec.discount_from(state.t);
    run_estimator(cfg, |normals| {
        let mut log_return = 0.0;
        for (half_var, sd) in &components {
            log_return += sd * normals.sample() - half_var;
        }
        discount * (f0 * log_return.exp() - strike).max(0.0)
    })
}

/// MC estimate of the average-delivery forward F(t,T1,T2): per path, S is
/// simulated on a uniform grid of `time_steps` intervals over [T1, T2] via
/// sequential exact transitions and averaged with the trapezoid rule (the
/// only discretization bias in the module).
pub fn mc_average_forward(
    model: &SpotModel,
    state: &MarketState,
    t1: f64,
    t2: f64,
    time_steps: usize,
    cfg: &McConfig,
) -> Result<McEstimate> {
    if t1 < state.t {
        return Err(Error::TimeOrderViolation {
            what: format!("T1 = {t1} before t = {}", state.t),
            requirement: "T1 >= t",
        });
    }
    if !(t2 > t1) {
        return Err(Error::TimeOrderViolation {
            what: format!("delivery window [{t1}, {t2}]"),
            requirement: "T1 < T2",
        });
    }
    if time_steps < 2 {
        return Err(Error::InvalidMcConfig {
            reason: format!("time_steps must be >= 2, got {time_steps}"),
        });
    }
    let dt = (t2 - t1) / time_steps as f64;
    let levels: Vec<f64> = (0..=time_steps)
        .map(|i| model.seasonality.level(t1 + i as f64 * dt))
        .collect();
    run_estimator(cfg, |normals| {
        let mut y = state.y.clone();
        let mut x = step_exact(model, state.x, &mut y, t1 - state.t, normals);
        let spot = |x: f64, y: &[f64], level: f64| level * (x + y.iter().sum::<f64>()).exp();
        let mut acc = 0.5 * spot(x, &y, levels[0]);
        for step in 1..=time_steps {
            x = step_exact(model, x, &mut y, dt, normals);
            let w = if step == time_steps { 0.5 } else { 1.0 };
            acc += w * spot(x, &y, levels[step]);
        }
        acc / time_steps as f64
    })
}

/// Sample variance of the log return Z(t,tau,T) under the selection, with a
/// moment-based standard error, for checking against sigma_sel(T)^2.
///
/// Always draws `cfg.paths` independent samples: mirrored pairs do not
/// reduce the variance of an even statistic, and treating them as i.i.d.
/// would understate the standard error by sqrt(2).
pub fn mc_log_return_variance(
    model: &SpotModel,
    state: &MarketState,
    spec: &OptionSpec,
    selection: &FactorSelection,
    cfg: &McConfig,
) -> Result<McEstimate> {
    cfg.validate()?;
    let components = log_return_components(model, state, spec, selection)?;
    let n_samples = cfg.paths as usize;
    let values = sample_values(n_samples, cfg.chunks, |idx| {
        let normals = &mut NormalSource::for_path(cfg.seed, idx, false);
        let mut log_return = 0.0;
        for (half_var, sd) in &components {
            log_return += sd * normals.sample() - half_var;
        }
        log_return
    });
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let sample_var = m2 * n / (n - 1.0);
    let var_of_var = (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n;
    Ok(McEstimate::from_stats(
        sample_var,
        var_of_var.max(0.0).sqrt(),
        cfg,
    ))
}
