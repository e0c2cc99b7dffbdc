//! Experiment configuration, read from a TOML file.
//!
//! ```toml
//! task = "cls-local"          # see Task for the nine names
//! n_grid = [4096, 8192]       # increasing sample sizes
//! eps_grid = [0.5, 1.0, inf]  # increasing budgets, inf allowed
//! trials = 20
//! master_seed = 1
//! abscissa = "N"              # optional: N, epsN or Neps2
//! timing = false              # fill the wall_ms column
//!
//! [distribution]
//! family = "smooth"           # or "bump" (binary classification only)
//! dim = 1
//! classes = 2                 # classification only
//! beta = 1.0
//! seed = 7                    # picks the amplitude; defaults to master_seed
//! amplitude = 0.3             # optional, overrides the seeded amplitude
//! phase = 0.0                 # optional, used with amplitude (default 0)
//! bound = 1.0                 # bounded regression: label bound T
//! half_width = 0.5            # bounded regression: noise half width
//! moment_order = 2.0          # heavy regression: p
//! moment_bound = 1.0          # heavy regression: M_p
//! bump_h = 0.25               # bump family: cube side
//! bump_signs = [1, -1]        # bump family: one sign per active cube
//!
//! [schedule]
//! c_h = 1.0                   # multiplier on h
//! c_k = 1.0                   # multiplier on k
//! c_t = 1.0                   # multiplier on the clipping radius
//! ```

use super::{Abscissa, Task};
use crate::error::{Error, Result};
use crate::synthdata::{
    bump_classification, smooth_classification, smooth_classification_with_amplitude, smooth_regression,
    smooth_regression_with_amplitude, BumpConfig, Distribution, RegressionNoise,
};
use serde::Deserialize;
use std::path::Path;

/// Data-generating family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Smooth,
    Bump,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionConfig {
    pub family: Family,
    pub dim: usize,
    #[serde(default = "default_classes")]
    pub classes: usize,
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub amplitude: Option<f64>,
    #[serde(default)]
    pub phase: Option<f64>,
    #[serde(default = "one")]
    pub bound: f64,
    #[serde(default)]
    pub half_width: Option<f64>,
    #[serde(default = "two")]
    pub moment_order: f64,
    #[serde(default = "one")]
    pub moment_bound: f64,
    #[serde(default)]
    pub bump_h: Option<f64>,
    #[serde(default)]
    pub bump_signs: Option<Vec<i8>>,
}

impl DistributionConfig {
    /// Smooth family defaults for dimension `dim`.
    pub fn smooth(dim: usize) -> Self {
        Self {
            family: Family::Smooth,
            dim,
            classes: 2,
            beta: 1.0,
            seed: None,
            amplitude: None,
            phase: None,
            bound: 1.0,
            half_width: None,
            moment_order: 2.0,
            moment_bound: 1.0,
            bump_h: None,
            bump_signs: None,
        }
    }
}

/// Multipliers on the schedule constants.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    #[serde(default = "one")]
    pub c_h: f64,
    #[serde(default = "one")]
    pub c_k: f64,
    #[serde(default = "one")]
    pub c_t: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self { c_h: 1.0, c_k: 1.0, c_t: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    pub n_grid: Vec<usize>,
    pub eps_grid: Vec<f64>,
    #[serde(default = "one_usize")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub abscissa: Option<Abscissa>,
    #[serde(default)]
    pub timing: bool,
    pub distribution: DistributionConfig,
    #[serde(default)]
    pub schedule: ScheduleConfig,
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

fn one_usize() -> usize {
    1
}

fn default_classes() -> usize {
    2
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_grid.is_empty() || self.eps_grid.is_empty() {
            return bad("n_grid and eps_grid must be non-empty".into());
        }
        if self.n_grid[0] == 0 || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("n_grid must be strictly increasing positive integers".into());
        }
        if !(self.eps_grid[0] > 0.0) || self.eps_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("eps_grid must be strictly increasing positive reals".into());
        }
        if self.trials == 0 {
            return bad("trials must be >= 1".into());
        }
        let s = &self.schedule;
        if [s.c_h, s.c_k, s.c_t].iter().any(|c| !(*c > 0.0 && c.is_finite())) {
            return bad("schedule multipliers must be positive and finite".into());
        }
        let dist = &self.distribution;
        if dist.family == Family::Bump && (!self.task.is_classification() || dist.classes != 2) {
            return bad("the bump family is binary classification only".into());
        }
        if dist.phase.is_some() && dist.amplitude.is_none() {
            return bad("phase needs an explicit amplitude".into());
        }
        if dist.family == Family::Bump && (dist.bump_h.is_none() || dist.bump_signs.is_none()) {
            return bad("the bump family needs bump_h and bump_signs".into());
        }
        self.build_distribution().map(|_| ()).map_err(|e| match e {
            Error::Config(m) => Error::Config(m),
            other => Error::Config(format!("distribution: {other}")),
        })
    }

    /// The law every trial samples from.
    pub fn build_distribution(&self) -> Result<Distribution> {
        let d = &self.distribution;
        let seed = d.seed.unwrap_or(self.master_seed);
        if self.task.is_classification() {
            return match d.family {
                Family::Bump => {
                    let h = d.bump_h.ok_or_else(|| Error::Config("bump_h missing".into()))?;
                    let signs = d.bump_signs.clone().ok_or_else(|| Error::Config("bump_signs missing".into()))?;
                    bump_classification(&BumpConfig::new(h, signs, d.beta), d.dim)
                }
                Family::Smooth => match d.amplitude {
                    Some(a) => smooth_classification_with_amplitude(d.dim, d.classes, d.beta, a)?
                        .with_phase(d.phase.unwrap_or(0.0)),
                    None => smooth_classification(d.dim, d.classes, d.beta, seed),
                },
            };
        }
        if d.family != Family::Smooth {
            return Err(Error::Config("regression tasks need the smooth family".into()));
        }
        let noise = if self.task.is_heavy() {
            RegressionNoise::Heavy { order: d.moment_order, moment: d.moment_bound }
        } else {
            RegressionNoise::Bounded { bound: d.bound, half_width: d.half_width }
        };
        match d.amplitude {
            Some(a) => smooth_regression_with_amplitude(d.dim, d.beta, a, noise)?.with_phase(d.phase.unwrap_or(0.0)),
            None => smooth_regression(d.dim, d.beta, noise, seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
task = "reg-local-bounded"
n_grid = [100, 200]
eps_grid = [0.5, inf]
trials = 3
master_seed = 9

[distribution]
family = "smooth"
dim = 1
"#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_toml_str(BASE).unwrap();
        assert_eq!(c.task, Task::RegLocalBounded);
        assert_eq!(c.eps_grid[1], f64::INFINITY);
        assert_eq!(c.schedule, ScheduleConfig::default());
        assert_eq!(c.distribution.moment_order, 2.0);
        assert!(!c.timing);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let text = format!("{BASE}\nbogus = 1\n");
        assert!(matches!(ExperimentConfig::from_toml_str(&text), Err(Error::Config(_))));
        let text = BASE.replace("trials = 3", "trials = 3\nwat = 2");
        assert!(ExperimentConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn grids_must_be_sorted() {
        let text = BASE.replace("[100, 200]", "[200, 100]");
        assert!(ExperimentConfig::from_toml_str(&text).is_err());
        let text = BASE.replace("[0.5, inf]", "[]");
        assert!(ExperimentConfig::from_toml_str(&text).is_err());
        let text = BASE.replace("[0.5, inf]", "[0.0, 1.0]");
        assert!(ExperimentConfig::from_toml_str(&text).is_err());
        let text = BASE.replace("trials = 3", "trials = 0");
        assert!(ExperimentConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn invalid_distribution_is_config_error() {
        let text = BASE.replace("dim = 1", "dim = 1\namplitude = 0.9");
        assert!(matches!(ExperimentConfig::from_toml_str(&text), Err(Error::Config(_))));
        let text = BASE.replace("smooth", "bump");
        assert!(ExperimentConfig::from_toml_str(&text).is_err());
    }
}
