//! Compares local, central and full-DP estimators at one sample size.
//!
//! ```text
//! cargo run --release --example privacy_models -- 65536
//! ```

use labeldp::harness::{run_experiment, Aggregator, DistributionConfig, ExperimentConfig, ScheduleConfig, Task};

fn median_risk(task: Task, n: usize, eps: f64) -> Result<f64, labeldp::Error> {
    let config = ExperimentConfig {
        task,
        n_grid: vec![n],
        eps_grid: vec![eps],
        trials: 20,
        master_seed: 7,
        abscissa: None,
        timing: false,
        distribution: DistributionConfig::smooth(1),
        schedule: ScheduleConfig::default(),
    };
    let mut risks: Vec<f64> = run_experiment(&config, None)?.iter().map(|r| r.excess_risk).collect();
    Ok(Aggregator::Median.apply(&mut risks))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).as_deref().unwrap_or("65536").parse()?;
    let groups = [
        [Task::ClsLocal, Task::ClsCentral, Task::ClsFull],
        [Task::RegLocalBounded, Task::RegCentralBounded, Task::RegFullBounded],
        [Task::RegLocalHeavy, Task::RegCentralHeavy, Task::RegFullHeavy],
    ];
    println!("median excess risk over 20 trials at N = {n}");
    for eps in [0.5, 1.0] {
        println!("eps = {eps}");
        for [local, central, full] in groups {
            let (l, c, f) = (median_risk(local, n, eps)?, median_risk(central, n, eps)?, median_risk(full, n, eps)?);
            println!(
                "  {local:<18} {l:.3e}   {central:<20} {c:.3e}   {full:<15} {f:.3e}   full/central {:.2}",
                f / c
            );
        }
    }
    Ok(())
}
