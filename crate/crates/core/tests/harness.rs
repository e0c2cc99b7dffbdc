use labeldp::estimators::{fit_knn_regressor, h_central_cls, h_central_reg, h_local_cls, k_local_reg, CubeClassifier, CubeRegressor};
use labeldp::harness::{
    format_csv, parse_csv, run_experiment, trial_seed, write_outputs, DistributionConfig, ExperimentConfig,
    ScheduleConfig, Task,
};
use labeldp::risk::{excess_risk_classifier, excess_risk_regressor};
use labeldp::synthdata::sample_dataset;
use labeldp::{CubePartition, Dataset, PrivacyBudget};

fn config(task: Task) -> ExperimentConfig {
    ExperimentConfig {
        task,
        n_grid: vec![256, 512, 1024],
        eps_grid: vec![0.5, 1.0, f64::INFINITY],
        trials: 3,
        master_seed: 42,
        abscissa: None,
        timing: false,
        distribution: DistributionConfig::smooth(1),
        schedule: ScheduleConfig::default(),
    }
}

#[test]
fn csv_is_byte_identical_across_runs_and_threads() {
    for task in Task::ALL {
        let c = config(task);
        let a = format_csv(&run_experiment(&c, Some(1)).unwrap());
        let b = format_csv(&run_experiment(&c, Some(1)).unwrap());
        let c2 = format_csv(&run_experiment(&c, Some(3)).unwrap());
        assert_eq!(a, b, "{task}");
        assert_eq!(a, c2, "{task}");
        assert_eq!(parse_csv(&a).unwrap().len(), 27);
    }
}

#[test]
fn doubling_trials_keeps_earlier_trials() {
    for task in [Task::ClsCentral, Task::RegLocalHeavy, Task::RegFullBounded] {
        let small = run_experiment(&config(task), Some(2)).unwrap();
        let mut c = config(task);
        c.trials = 6;
        let big = run_experiment(&c, Some(2)).unwrap();
        assert_eq!(big.len(), 2 * small.len());
        let kept: Vec<_> = big.iter().filter(|r| r.trial < 3).cloned().collect();
        assert_eq!(kept, small, "{task}");
    }
}

fn cell(x: &[f64], m: usize) -> usize {
    x.iter().fold(0, |acc, &v| acc * m + ((v * m as f64).floor() as usize).min(m - 1))
}

/// Plurality per cell, ties to the smallest class, empty cells to class 1.
fn plurality(data: &Dataset, h: f64) -> CubeClassifier {
    let part = CubePartition::new(1, h).unwrap();
    let m = part.cells_per_axis();
    let mut counts = vec![[0usize; 2]; m];
    for (x, &y) in data.points().iter().zip(data.class_labels().unwrap()) {
        counts[cell(x, m)][y - 1] += 1;
    }
    let class_of = counts.iter().map(|c| if c[1] > c[0] { 2 } else { 1 }).collect();
    CubeClassifier::new(part, 2, class_of).unwrap()
}

fn cell_means(data: &Dataset, h: f64) -> CubeRegressor {
    let part = CubePartition::new(1, h).unwrap();
    let m = part.cells_per_axis();
    let mut sums = vec![(0.0, 0usize); m];
    for (x, &y) in data.points().iter().zip(data.values().unwrap()) {
        let s = &mut sums[cell(x, m)];
        s.0 += y;
        s.1 += 1;
    }
    let values = sums.iter().map(|&(s, n)| if n == 0 { 0.0 } else { s / n as f64 }).collect();
    CubeRegressor::new(part, values).unwrap()
}

#[test]
fn infinite_budget_matches_non_private_estimators() {
    let inf = PrivacyBudget::INFINITE;
    for task in [Task::ClsLocal, Task::ClsCentral, Task::RegCentralBounded, Task::RegLocalBounded] {
        let c = config(task);
        let dist = c.build_distribution().unwrap();
        for r in run_experiment(&c, Some(1)).unwrap().iter().filter(|r| r.eps.is_infinite()) {
            let data = sample_dataset(&dist, r.n, trial_seed(42, r.n, r.trial)).unwrap();
            let expected = match task {
                Task::ClsLocal => {
                    let h = h_local_cls(r.n, inf, 2, 1.0, 1, 1.0).unwrap();
                    excess_risk_classifier(&plurality(&data, h), &dist).unwrap()
                }
                Task::ClsCentral => {
                    let h = h_central_cls(r.n, inf, 2, 1.0, 1, 1.0).unwrap();
                    excess_risk_classifier(&plurality(&data, h), &dist).unwrap()
                }
                Task::RegCentralBounded => {
                    let h = h_central_reg(r.n, inf, 1.0, 1, None, 1.0).unwrap();
                    excess_risk_regressor(&cell_means(&data, h), &dist).unwrap()
                }
                _ => {
                    let k = k_local_reg(r.n, inf, 1.0, 1, None, 1.0).unwrap();
                    let knn = fit_knn_regressor(data.points(), data.values().unwrap().to_vec(), k).unwrap();
                    excess_risk_regressor(&knn, &dist).unwrap()
                }
            };
            assert_eq!(r.excess_risk, expected.excess_risk, "{task} N={}", r.n);
        }
    }
}

#[test]
fn records_satisfy_their_invariants() {
    for task in Task::ALL {
        for r in run_experiment(&config(task), Some(2)).unwrap() {
            assert!(r.std_error >= 0.0 && r.excess_risk >= -r.std_error, "{r:?}");
            for v in [r.h, r.t, r.n0].into_iter().flatten() {
                assert!(v > 0.0, "{r:?}");
            }
            assert_eq!(r.seed, trial_seed(42, r.n, r.trial));
            assert!(r.wall_ms.is_none());
        }
    }
    let mut c = config(Task::ClsLocal);
    c.timing = true;
    assert!(run_experiment(&c, Some(1)).unwrap().iter().all(|r| r.wall_ms.is_some_and(|w| w >= 0.0)));
}

#[test]
fn outputs_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(Task::RegLocalBounded);
    let records = run_experiment(&c, Some(1)).unwrap();
    let paths = write_outputs(dir.path(), &c, &records).unwrap();
    let names: Vec<String> =
        paths.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert_eq!(names[0], "records.csv");
    assert!(names.contains(&"sweep_reg-local-bounded_N_eps0.5.dat".to_string()), "{names:?}");
    assert!(names.contains(&"sweep_reg-local-bounded_N_epsinf.dat".to_string()), "{names:?}");
    assert_eq!(names.last().unwrap(), "fits.txt");
    let csv = std::fs::read_to_string(dir.path().join("records.csv")).unwrap();
    assert_eq!(csv, format_csv(&records));
    let dat = std::fs::read_to_string(dir.path().join("sweep_reg-local-bounded_N_eps1.dat")).unwrap();
    assert!(dat.starts_with("# ln_abscissa ln_risk\n"));
    assert_eq!(dat.lines().count(), 4);
    let fits = std::fs::read_to_string(dir.path().join("fits.txt")).unwrap();
    assert!(fits.contains("slope = ") && fits.contains("theoretical_exponent = -0.666"));
}
