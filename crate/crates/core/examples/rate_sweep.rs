//! Sweeps N for a task and compares the fitted log-log slope with the
//! minimax exponent.
//!
//! ```text
//! cargo run --release --example rate_sweep -- cls-local 1.0
//! ```

use labeldp::harness::{
    fit_rate, run_experiment, theoretical_exponent, Abscissa, Aggregator, DistributionConfig, ExperimentConfig,
    ScheduleConfig, Task,
};
use std::time::Instant;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let task: Task = args.next().as_deref().unwrap_or("cls-local").parse()?;
    let eps: f64 = args.next().as_deref().unwrap_or("1").parse()?;
    let trials: usize = args.next().as_deref().unwrap_or("20").parse()?;
    let config = ExperimentConfig {
        task,
        n_grid: (12..=18).map(|j| 1usize << j).collect(),
        eps_grid: vec![eps],
        trials,
        master_seed: 2024,
        abscissa: Some(Abscissa::N),
        timing: false,
        distribution: DistributionConfig::smooth(1),
        schedule: ScheduleConfig::default(),
    };
    let start = Instant::now();
    let records = run_experiment(&config, None)?;
    let fit = fit_rate(&records, Abscissa::N, Aggregator::Median)?;
    let dist = config.build_distribution()?;
    let p = dist.params();
    let theory = theoretical_exponent(task, p.beta, p.gamma, dist.dim(), p.moment_order, Abscissa::N)?;
    println!("{task} at eps = {eps}: {} trials in {:.1?}", records.len(), start.elapsed());
    for (n, risk) in &fit.points {
        println!("  N = {n:>8}  median excess risk = {risk:.3e}");
    }
    println!("slope {:.3} ± {:.3}, theory {theory:.3}", fit.slope, fit.slope_std_error);
    Ok(())
}
