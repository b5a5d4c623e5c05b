//! Scenario file parsing and per-command defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use energy_options::model::Scenario;
use energy_options::montecarlo::McConfig;

use crate::{Failure, CODE_VALIDATION};

/// Uniform delivery grid `T_min, T_min + step, ..., <= T_max`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "T_min")]
    pub t_min: f64,
    #[serde(rename = "T_max")]
    pub t_max: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn nodes(&self) -> Result<Vec<f64>, Failure> {
        if !(self.step > 0.0 && self.t_max >= self.t_min) {
            return Err(Failure::new(
                CODE_VALIDATION,
                format!(
                    "grid: need step > 0 and T_max >= T_min, got {}:{}:{}",
                    self.t_min, self.t_max, self.step
                ),
            ));
        }
        let mut nodes = Vec::new();
        let mut i = 0u64;
        loop {
            let t = self.t_min + i as f64 * self.step;
            if t > self.t_max + 1e-9 {
                break;
            }
            nodes.push(t);
            i += 1;
        }
        Ok(nodes)
    }

    /// Parses the `--grid a:b:step` flag.
    pub fn parse_flag(s: &str) -> Result<Self, Failure> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || {
            Failure::new(
                CODE_VALIDATION,
                format!("grid: expected a:b:step, got {s:?}"),
            )
        };
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        Ok(GridSpec {
            t_min: nums[0],
            t_max: nums[1],
            step: nums[2],
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadSpec {
    pub nodes: usize,
}

/// The scenario JSON document plus the optional `grid`, `mc`, and `quad`
/// blocks recognized by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(flatten)]
    pub scenario: Scenario,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<QuadSpec>,
}

impl ScenarioFile {
    pub fn builtin_example() -> Self {
        ScenarioFile {
            scenario: Scenario::example(),
            grid: None,
            mc: None,
            quad: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::new(
                CODE_VALIDATION,
                format!("cannot read scenario {}: {e}", path.display()),
            )
        })?;
        let file: ScenarioFile = serde_json::from_str(&text).map_err(|e| {
            Failure::new(
                CODE_VALIDATION,
                format!("scenario {}: {e}", path.display()),
            )
        })?;
        file.scenario.validate().map_err(Failure::from)?;
        Ok(file)
    }

    /// Grid for the initial-curve command: from the valuation time out to
    /// tau + 70 days, step 1, unless the file specifies one.
    pub fn curve_grid(&self) -> Result<Vec<f64>, Failure> {
        match self.grid {
            Some(g) => g.nodes(),
            None => GridSpec {
                t_min: self.scenario.state.t,
                t_max: self.scenario.option.tau + 70.0,
                step: 1.0,
            }
            .nodes(),
        }
    }

    /// Grid for the volatility/bounds commands: delivery strictly after
    /// exercise, tau + 1 .. tau + 70, step 1, unless the file specifies one.
    pub fn delivery_grid(&self) -> Result<Vec<f64>, Failure> {
        match self.grid {
            Some(g) => g.nodes(),
            None => GridSpec {
                t_min: self.scenario.option.tau + 1.0,
                t_max: self.scenario.option.tau + 70.0,
                step: 1.0,
            }
            .nodes(),
        }
    }

    pub fn quad_nodes(&self) -> usize {
        self.quad.map(|q| q.nodes).unwrap_or(201)
    }

    /// Monte Carlo config: `--seed`/`--paths` flags override the `mc`
    /// block; a seed must come from one of the two (no silent default).
    pub fn mc_config(&self, seed: Option<u64>, paths: Option<u64>) -> Result<McConfig, Failure> {
        let mut cfg = match (self.mc, seed) {
            (Some(block), _) => block,
            (None, Some(s)) => McConfig::new(s),
            (None, None) => {
                return Err(Failure::new(
                    CODE_VALIDATION,
                    "a Monte Carlo seed is required: pass --seed or add an \"mc\" block \
                     to the scenario",
                ))
            }
        };
        if let Some(s) = seed {
            cfg.seed = s;
        }
        if let Some(p) = paths {
            cfg.paths = p;
        }
        cfg.validate().map_err(Failure::from)?;
        Ok(cfg)
    }
}
