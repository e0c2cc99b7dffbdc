//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Sweeps run single-threaded.

use labeldp::estimators::{
    fit_central_cube_regressor, fit_central_exp_classifier, fit_knn_regressor, fit_local_cube_classifier,
    sample_exp_mechanism, CentralModel, CubeRegressorOptions, ExpMechanismTrainer, Regressor,
};
use labeldp::harness::{
    fit_rate, format_csv, run_experiment, Abscissa, Aggregator, DistributionConfig, ExperimentConfig, ScheduleConfig,
    Task, TrialRecord,
};
use labeldp::mechanisms::{audit_cdp_exhaustive, audit_ldp_discrete, KBitMechanism, PrivatizedBits, RandomizedResponse};
use labeldp::risk::clip_bias_bound;
use labeldp::rng::{derive_seed, stream};
use labeldp::synthdata::{smooth_regression, RegressionNoise};
use labeldp::{Dataset, Labels, Points, PrivacyBudget, TaskKind};
use rand::Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

const SEED: u64 = 2024;
const TRIALS: usize = 20;

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("exact local audit", 10, local_audit),
        ("exhaustive central audit", 30, central_audit),
        ("infinite-budget oracles", 30, oracles),
        ("local classification rate", 600, local_classification_rate),
        ("local bounded regression rate", 600, local_regression_rate),
        ("central beats local", 300, central_beats_local),
        ("full vs label gap", 300, full_vs_label),
        ("clip bias", 5, clip_bias),
        ("heavy-tail degradation", 900, heavy_degradation),
        ("exponential mechanism frequencies", 10, exp_frequencies),
        ("determinism", 600, determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget_s, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*budget_s) => {
                Err(format!("{detail}; took {elapsed:.1?}, budget {budget_s} s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{elapsed:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

fn local_audit() -> Outcome {
    let mut worst = 0.0f64;
    for classes in 2..=10 {
        for eps in [0.1, 0.5, 1.0, 2.0] {
            let kbit = audit_ldp_discrete(&KBitMechanism { classes, epsilon: eps }).map_err(|e| e.to_string())?;
            let rr = audit_ldp_discrete(&RandomizedResponse { classes, epsilon: eps }).map_err(|e| e.to_string())?;
            for (name, got) in [("kbit", kbit), ("rr", rr)] {
                let gap = (got - eps).abs();
                worst = worst.max(gap);
                if gap > 1e-9 {
                    return Err(format!("{name} K={classes} eps={eps}: measured {got}"));
                }
            }
        }
    }
    Ok(format!("max |measured - eps| = {worst:.2e}"))
}

fn random_binary_dataset(seed: u64, max_samples: usize) -> Dataset {
    let mut r = stream(seed, 0);
    let n = r.gen_range(1..=max_samples);
    let coords = (0..n).map(|_| r.gen::<f64>()).collect();
    let labels = (0..n).map(|_| r.gen_range(1..=2)).collect();
    Dataset::from_parts(TaskKind::Classification { classes: 2 }, Points::new(1, coords).unwrap(), Labels::Classes(labels))
        .unwrap()
}

fn central_audit() -> Outcome {
    let mut worst_ratio = 0.0f64;
    for i in 0..50 {
        let seed = derive_seed(2, i);
        let data = random_binary_dataset(seed, 6);
        let h = if seed.is_multiple_of(2) { 1.0 } else { 0.5 };
        for eps in [0.5, 1.0, 2.0] {
            let trainer = ExpMechanismTrainer { h, budget: PrivacyBudget::new(eps).unwrap(), model: CentralModel::Label };
            for flips in 1..=3 {
                let loss = audit_cdp_exhaustive(&trainer, &data, flips).map_err(|e| e.to_string())?;
                if loss > flips as f64 * eps + 1e-9 {
                    return Err(format!("dataset {i} eps={eps} flips={flips}: loss {loss}"));
                }
                worst_ratio = worst_ratio.max(loss / (flips as f64 * eps));
            }
        }
    }
    Ok(format!("max loss / (g eps) = {worst_ratio:.6}"))
}

fn cell(x: &[f64], m: usize) -> usize {
    x.iter().fold(0, |acc, &v| acc * m + ((v * m as f64).floor() as usize).min(m - 1))
}

fn oracles() -> Outcome {
    let inf = PrivacyBudget::INFINITE;
    for i in 0..200u64 {
        let mut r = stream(derive_seed(3, i), 0);
        let (n, dim, m, classes): (usize, usize, usize, usize) =
            (r.gen_range(1..=50), r.gen_range(1..=3), r.gen_range(1..=4), r.gen_range(2..=4));
        let cells = m.pow(dim as u32);
        let h = 1.0 / m as f64;
        let points = Points::new(dim, (0..n * dim).map(|_| r.gen::<f64>()).collect()).unwrap();
        let cls: Vec<usize> = (0..n).map(|_| r.gen_range(1..=classes)).collect();
        let ys: Vec<f64> = (0..n).map(|_| r.gen_range(-2.0..2.0)).collect();

        let mut counts = vec![vec![0usize; classes]; cells];
        let mut sums = vec![(0.0, 0usize); cells];
        for (j, x) in points.iter().enumerate() {
            counts[cell(x, m)][cls[j] - 1] += 1;
            sums[cell(x, m)].0 += ys[j];
            sums[cell(x, m)].1 += 1;
        }
        let plurality: Vec<usize> = counts
            .iter()
            .map(|c| c.iter().position(|&v| v == *c.iter().max().unwrap()).unwrap() + 1)
            .collect();
        let means: Vec<f64> = sums.iter().map(|&(s, k)| if k == 0 { 0.0 } else { s / k as f64 }).collect();

        let bits: Vec<_> = cls.iter().map(|&y| PrivatizedBits::one_hot(y, classes)).collect();
        let local = fit_local_cube_classifier(&points, &bits, classes, h).map_err(|e| e.to_string())?;
        let cls_data =
            Dataset::from_parts(TaskKind::Classification { classes }, points.clone(), Labels::Classes(cls)).unwrap();
        let central = fit_central_exp_classifier(&cls_data, h, inf, CentralModel::Label, &mut r).unwrap();
        let reg_data = Dataset::from_parts(TaskKind::Regression, points, Labels::Values(ys)).unwrap();
        let opts = CubeRegressorOptions::new(2.0, false, CentralModel::Label);
        let regressor = fit_central_cube_regressor(&reg_data, h, inf, opts, &mut r).unwrap();
        if local.class_of() != &plurality[..] || central.class_of() != &plurality[..] {
            return Err(format!("dataset {i}: classifier differs from plurality"));
        }
        if regressor.value_of() != &means[..] {
            return Err(format!("dataset {i}: regressor differs from cell means"));
        }
    }
    let mut r = stream(3, 1);
    for q in 0..100 {
        let (n, dim) = (r.gen_range(1..=500), r.gen_range(1..=3));
        let k = r.gen_range(1..=n.min(20));
        // a coarse lattice forces distance ties
        let points = Points::new(dim, (0..n * dim).map(|_| r.gen_range(0..8) as f64 / 7.0).collect()).unwrap();
        let z: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let x: Vec<f64> = (0..dim).map(|_| r.gen()).collect();
        let model = fit_knn_regressor(&points, z.clone(), k).unwrap();
        let mut ranked: Vec<(f64, usize)> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum(), i))
            .collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let expect: Vec<usize> = ranked[..k].iter().map(|&(_, i)| i).collect();
        let value = expect.iter().map(|&i| z[i]).sum::<f64>() / k as f64;
        if model.neighbors(&x).unwrap() != expect || model.predict_value(&x).unwrap() != value {
            return Err(format!("kNN query {q} differs from linear scan"));
        }
    }
    Ok("200 datasets and 100 kNN queries exact".into())
}

fn sweep(task: Task, n_grid: Vec<usize>, eps_grid: Vec<f64>) -> Result<Vec<TrialRecord>, String> {
    let config = ExperimentConfig {
        task,
        n_grid,
        eps_grid,
        trials: TRIALS,
        master_seed: SEED,
        abscissa: None,
        timing: false,
        distribution: DistributionConfig::smooth(1),
        schedule: ScheduleConfig::default(),
    };
    run_experiment(&config, Some(1)).map_err(|e| e.to_string())
}

fn slope_vs_n(task: Task, eps: f64) -> Result<(f64, f64), String> {
    let records = sweep(task, (12..=18).map(|j| 1 << j).collect(), vec![eps])?;
    let fit = fit_rate(&records, Abscissa::N, Aggregator::Median).map_err(|e| e.to_string())?;
    Ok((fit.slope, fit.slope_std_error))
}

fn rate_check(task: Task) -> Outcome {
    let (slope, se) = slope_vs_n(task, 1.0)?;
    let detail = format!("slope {slope:.4} ± {se:.4}, target -2/3 ± 0.20");
    if (slope + 2.0 / 3.0).abs() <= 0.20 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn local_classification_rate() -> Outcome {
    rate_check(Task::ClsLocal)
}

fn local_regression_rate() -> Outcome {
    rate_check(Task::RegLocalBounded)
}

fn median_risk(task: Task, n: usize, eps: f64) -> Result<f64, String> {
    let mut risks: Vec<f64> = sweep(task, vec![n], vec![eps])?.iter().map(|r| r.excess_risk).collect();
    Ok(Aggregator::Median.apply(&mut risks))
}

const N_COMPARE: usize = 1 << 16;

fn central_beats_local() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for (central, local) in [(Task::ClsCentral, Task::ClsLocal), (Task::RegCentralBounded, Task::RegLocalBounded)] {
        let (c, l) = (median_risk(central, N_COMPARE, 0.5)?, median_risk(local, N_COMPARE, 0.5)?);
        ok &= c < l;
        detail.push(format!("{central} {c:.3e} vs {local} {l:.3e}"));
    }
    let detail = detail.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn full_vs_label() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for (full, label) in [(Task::ClsFull, Task::ClsCentral), (Task::RegFullBounded, Task::RegCentralBounded)] {
        for eps in [0.5, 1.0] {
            let ratio = median_risk(full, N_COMPARE, eps)? / median_risk(label, N_COMPARE, eps)?;
            ok &= (1.0..=10.0).contains(&ratio);
            detail.push(format!("{full}/{label} eps={eps}: {ratio:.3}"));
        }
    }
    let detail = detail.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn clip_bias() -> Outcome {
    let (order, moment) = (2.0, 1.0);
    let mut tightest = 0.0f64;
    for seed in 0..10 {
        let law = smooth_regression(1, 1.0, RegressionNoise::Heavy { order, moment }, seed).map_err(|e| e.to_string())?;
        let peak = law.heavy_peak().unwrap();
        let tail = moment / peak.powf(order);
        for t in [2.0, 5.0, 10.0, 20.0] {
            let bound = clip_bias_bound(t, order, moment).unwrap();
            for i in 0..256 {
                let x = [(i as f64 + 0.5) / 256.0];
                let eta = law.regression_value(&x).unwrap();
                // exact E[clip(Y, t) | x] over the atoms {-T0, 0, T0}
                let (p_plus, p_minus) = (0.5 * (tail + eta / peak), 0.5 * (tail - eta / peak));
                let clipped = peak.min(t) * (p_plus - p_minus);
                let bias = (clipped - eta).abs();
                if bias > bound {
                    return Err(format!("seed {seed} T={t} x={}: bias {bias} > {bound}", x[0]));
                }
                tightest = tightest.max(bias / bound);
            }
        }
    }
    Ok(format!("max bias / bound = {tightest:.4}"))
}

fn heavy_degradation() -> Outcome {
    let (heavy, heavy_se) = slope_vs_n(Task::RegLocalHeavy, 0.5)?;
    let (bounded, bounded_se) = slope_vs_n(Task::RegLocalBounded, 0.5)?;
    let detail = format!("heavy {heavy:.4} ± {heavy_se:.4} vs bounded {bounded:.4} ± {bounded_se:.4}");
    if heavy > bounded + 0.1 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn exp_frequencies() -> Outcome {
    let draws = 100_000;
    let mut worst_z = 0.0f64;
    for i in 0..20 {
        let mut r = stream(derive_seed(10, i), 0);
        let k = r.gen_range(2..=5);
        let counts: Vec<u64> = (0..k).map(|_| r.gen_range(0..=8)).collect();
        let eps = [0.25, 0.5, 1.0, 2.0][r.gen_range(0..4)];
        let scale = if r.gen::<bool>() { 2.0 } else { 4.0 };
        let weights: Vec<f64> = counts.iter().map(|&c| (eps * c as f64 / scale).exp()).collect();
        let total: f64 = weights.iter().sum();
        let mut hits = vec![0usize; k];
        let mut draw_rng = stream(derive_seed(10, i), 1);
        for _ in 0..draws {
            hits[sample_exp_mechanism(&counts, eps, scale, &mut draw_rng) - 1] += 1;
        }
        for (j, &w) in weights.iter().enumerate() {
            let p = w / total;
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            let z = (hits[j] as f64 - draws as f64 * p).abs() / sigma;
            worst_z = worst_z.max(z);
            if z > 3.0 {
                return Err(format!("pattern {counts:?} eps={eps} s={scale} class {}: {z:.2} sigma", j + 1));
            }
        }
    }
    Ok(format!("largest deviation {worst_z:.2} sigma"))
}

fn determinism() -> Outcome {
    for task in Task::ALL {
        let config = ExperimentConfig {
            task,
            n_grid: vec![512, 2048],
            eps_grid: vec![0.5, 2.0],
            trials: 4,
            master_seed: 77,
            abscissa: None,
            timing: false,
            distribution: DistributionConfig::smooth(1),
            schedule: ScheduleConfig::default(),
        };
        let run = |threads| run_experiment(&config, Some(threads)).map(|r| format_csv(&r)).map_err(|e| e.to_string());
        let (a, b, c) = (run(1)?, run(1)?, run(4)?);
        if a != b {
            return Err(format!("{task}: repeated runs differ"));
        }
        if a != c {
            return Err(format!("{task}: 1 and 4 threads differ"));
        }
    }
    Ok("all nine tasks byte-identical across runs and thread counts".into())
}
