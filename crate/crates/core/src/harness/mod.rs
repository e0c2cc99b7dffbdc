//! Experiment orchestration: seeded sweeps over `(N, ε)`, repeated trials,
//! rate fitting and file output.

mod config;
mod output;
mod rate;

pub use config::{DistributionConfig, ExperimentConfig, Family, ScheduleConfig};
pub use output::{format_csv, parse_csv, write_outputs, CSV_HEADER};
pub use rate::{fit_rate, fit_rate_points, theoretical_exponent, Aggregator, RateFit};

use crate::domain::{Dataset, PrivacyBudget};
use crate::error::{Error, Result};
use crate::estimators::{
    clip_radius, fit_central_cube_regressor, fit_central_exp_classifier, fit_knn_regressor,
    fit_local_cube_classifier, h_central_cls, h_central_reg, h_local_cls, k_local_reg, CentralModel, ClipSchedule,
    CubeRegressorOptions,
};
use crate::mechanisms::{privatize_clip_laplace, privatize_kbit, privatize_laplace};
use crate::risk::{excess_risk_classifier, excess_risk_regressor, RiskReport};
use crate::rng::{derive_seed_path, stream};
use crate::synthdata::{sample_dataset, Distribution};
use rayon::prelude::*;
use serde::Deserialize;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// The nine estimation problems a sweep can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    ClsLocal,
    ClsCentral,
    ClsFull,
    RegLocalBounded,
    RegCentralBounded,
    RegFullBounded,
    RegLocalHeavy,
    RegCentralHeavy,
    RegFullHeavy,
}

impl Task {
    pub const ALL: [Task; 9] = [
        Task::ClsLocal,
        Task::ClsCentral,
        Task::ClsFull,
        Task::RegLocalBounded,
        Task::RegCentralBounded,
        Task::RegFullBounded,
        Task::RegLocalHeavy,
        Task::RegCentralHeavy,
        Task::RegFullHeavy,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::ClsLocal => "cls-local",
            Task::ClsCentral => "cls-central",
            Task::ClsFull => "cls-full",
            Task::RegLocalBounded => "reg-local-bounded",
            Task::RegCentralBounded => "reg-central-bounded",
            Task::RegFullBounded => "reg-full-bounded",
            Task::RegLocalHeavy => "reg-local-heavy",
            Task::RegCentralHeavy => "reg-central-heavy",
            Task::RegFullHeavy => "reg-full-heavy",
        }
    }

    pub fn is_classification(&self) -> bool {
        matches!(self, Task::ClsLocal | Task::ClsCentral | Task::ClsFull)
    }

    pub fn is_local(&self) -> bool {
        matches!(self, Task::ClsLocal | Task::RegLocalBounded | Task::RegLocalHeavy)
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Task::ClsFull | Task::RegFullBounded | Task::RegFullHeavy)
    }

    pub fn is_heavy(&self) -> bool {
        matches!(self, Task::RegLocalHeavy | Task::RegCentralHeavy | Task::RegFullHeavy)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown task `{s}`")))
    }
}

/// Quantity on the horizontal axis of a rate fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Abscissa {
    #[serde(rename = "N")]
    N,
    #[serde(rename = "epsN")]
    EpsN,
    #[serde(rename = "Neps2")]
    NEps2,
}

impl Abscissa {
    pub fn as_str(&self) -> &'static str {
        match self {
            Abscissa::N => "N",
            Abscissa::EpsN => "epsN",
            Abscissa::NEps2 => "Neps2",
        }
    }

    pub fn value(&self, n: usize, eps: f64) -> f64 {
        let n = n as f64;
        match self {
            Abscissa::N => n,
            Abscissa::EpsN => eps * n,
            Abscissa::NEps2 => n * eps * eps,
        }
    }
}

impl fmt::Display for Abscissa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Abscissa {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" => Ok(Abscissa::N),
            "epsN" => Ok(Abscissa::EpsN),
            "Neps2" => Ok(Abscissa::NEps2),
            _ => Err(Error::Config(format!("unknown abscissa `{s}` (expected N, epsN or Neps2)"))),
        }
    }
}

/// One fitted-and-scored trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub task: Task,
    pub n: usize,
    pub eps: f64,
    pub trial: usize,
    pub seed: u64,
    pub excess_risk: f64,
    pub std_error: f64,
    pub h: Option<f64>,
    pub k: Option<usize>,
    pub t: Option<f64>,
    pub n0: Option<f64>,
    pub wall_ms: Option<f64>,
}

/// Seed of trial `trial` at sample size `n`. The same data is reused across
/// budgets and tasks, so comparisons along ε are paired.
pub fn trial_seed(master: u64, n: usize, trial: usize) -> u64 {
    derive_seed_path(master, &[n as u64, trial as u64])
}

/// Runs every `(N, ε, trial)` cell of the sweep. Output is sorted by
/// `(N, ε, trial)` and independent of `threads` (`None` uses all cores).
pub fn run_experiment(config: &ExperimentConfig, threads: Option<usize>) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let dist = config.build_distribution()?;
    let mut jobs = Vec::with_capacity(config.n_grid.len() * config.eps_grid.len() * config.trials);
    for &n in &config.n_grid {
        for &eps in &config.eps_grid {
            for trial in 0..config.trials {
                jobs.push((n, eps, trial));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        jobs.par_iter()
            .map(|&(n, eps, trial)| {
                run_trial(config, &dist, n, eps, trial).map_err(|e| Error::Trial {
                    n,
                    eps,
                    trial,
                    source: Box::new(e),
                })
            })
            .collect()
    })
}

/// A single trial: sample, schedule, privatize or fit privately, score.
pub fn run_trial(
    config: &ExperimentConfig,
    dist: &Distribution,
    n: usize,
    eps: f64,
    trial: usize,
) -> Result<TrialRecord> {
    let start = Instant::now();
    let seed = trial_seed(config.master_seed, n, trial);
    let data = sample_dataset(dist, n, seed)?;
    let mut rng = stream(seed, 1);
    let budget = if eps.is_infinite() { PrivacyBudget::INFINITE } else { PrivacyBudget::new(eps)? };
    let params = dist.params();
    let (beta, dim) = (params.beta, dist.dim());
    let sched = config.schedule;
    let task = config.task;
    let model = if task.is_full() { CentralModel::Full } else { CentralModel::Label };
    let mut record = TrialRecord {
        task,
        n,
        eps,
        trial,
        seed,
        excess_risk: 0.0,
        std_error: 0.0,
        h: None,
        k: None,
        t: None,
        n0: None,
        wall_ms: None,
    };
    let report: RiskReport = match task {
        Task::ClsLocal => {
            let classes = data.classes()?;
            let h = h_local_cls(n, budget, classes, beta, dim, sched.c_h)?;
            let bits = data
                .class_labels()?
                .iter()
                .map(|&y| privatize_kbit(y, classes, eps, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            record.h = Some(h);
            excess_risk_classifier(&fit_local_cube_classifier(data.points(), &bits, classes, h)?, dist)?
        }
        Task::ClsCentral | Task::ClsFull => {
            let classes = data.classes()?;
            let h = h_central_cls(n, budget, classes, beta, dim, sched.c_h)?;
            record.h = Some(h);
            excess_risk_classifier(&fit_central_exp_classifier(&data, h, budget, model, &mut rng)?, dist)?
        }
        Task::RegLocalBounded | Task::RegLocalHeavy => {
            let heavy = task.is_heavy().then_some(params.moment_order);
            let k = k_local_reg(n, budget, beta, dim, heavy, sched.c_k)?;
            let z = local_labels(&data, heavy, k, budget, params.label_bound, sched.c_t, &mut rng, &mut record)?;
            record.k = Some(k);
            excess_risk_regressor(&fit_knn_regressor(data.points(), z, k)?, dist)?
        }
        Task::RegCentralBounded | Task::RegFullBounded | Task::RegCentralHeavy | Task::RegFullHeavy => {
            let heavy = task.is_heavy().then_some(params.moment_order);
            let h = h_central_reg(n, budget, beta, dim, heavy, sched.c_h)?;
            let bound = match heavy {
                None => params.label_bound,
                Some(p) => clip_radius(ClipSchedule::Central { budget, n, h, dim, p }, sched.c_t)?,
            };
            let options = CubeRegressorOptions {
                bound,
                clipped: heavy.is_some(),
                model,
                density_lb: params.density_lb,
                theta: params.theta,
            };
            let fitted = fit_central_cube_regressor(&data, h, budget, options, &mut rng)?;
            record.h = Some(h);
            record.t = Some(bound);
            record.n0 = fitted.sample_floor();
            excess_risk_regressor(&fitted, dist)?
        }
    };
    record.excess_risk = report.excess_risk;
    record.std_error = report.std_error;
    if config.timing {
        record.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(record)
}

#[allow(clippy::too_many_arguments)]
fn local_labels<R: rand::Rng>(
    data: &Dataset,
    heavy: Option<f64>,
    k: usize,
    budget: PrivacyBudget,
    label_bound: f64,
    c_t: f64,
    rng: &mut R,
    record: &mut TrialRecord,
) -> Result<Vec<f64>> {
    let eps = budget.epsilon();
    let labels = data.values()?;
    match heavy {
        None => {
            record.t = Some(label_bound);
            labels.iter().map(|&y| privatize_laplace(y, label_bound, eps, rng).map(|z| z.value())).collect()
        }
        Some(p) => {
            let t = clip_radius(ClipSchedule::Local { k, budget, p }, c_t)?;
            record.t = Some(t);
            labels.iter().map(|&y| privatize_clip_laplace(y, t, eps, rng).map(|z| z.value())).collect()
        }
    }
}
