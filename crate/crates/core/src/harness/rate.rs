//! Log-log slope fits and the minimax exponents they are compared with.

use super::{Abscissa, Task, TrialRecord};
use crate::error::{Error, Result};
use serde::Deserialize;
use std::fmt;
use std::str::FromStr;

/// How trials at one abscissa value are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregator {
    #[default]
    Median,
    Mean,
}

impl Aggregator {
    pub fn as_str(&self) -> &'static str {
        match self {
            Aggregator::Median => "median",
            Aggregator::Mean => "mean",
        }
    }

    pub fn apply(&self, values: &mut [f64]) -> f64 {
        match self {
            Aggregator::Mean => values.iter().sum::<f64>() / values.len() as f64,
            Aggregator::Median => {
                values.sort_by(f64::total_cmp);
                let m = values.len() / 2;
                if values.len() % 2 == 1 {
                    values[m]
                } else {
                    0.5 * (values[m - 1] + values[m])
                }
            }
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Aggregator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(Aggregator::Median),
            "mean" => Ok(Aggregator::Mean),
            _ => Err(Error::Config(format!("unknown aggregator `{s}` (expected median or mean)"))),
        }
    }
}

/// Ordinary least squares of `ln risk` on `ln abscissa`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_error: f64,
    pub theoretical_exponent: Option<f64>,
    pub abscissa: Abscissa,
    /// `(abscissa, aggregated risk)` pairs that entered the fit.
    pub points: Vec<(f64, f64)>,
    /// Abscissa values dropped for a nonpositive aggregated risk or an
    /// infinite abscissa.
    pub dropped: Vec<f64>,
}

/// Minimax rate exponent of `task` along `abscissa`.
///
/// Local tasks decay in `N ε²` (so also in `N` at fixed ε); central and
/// full-DP tasks have a statistical term in `N` and a privacy term in `εN`.
/// `gamma` is read for classification, `p` for heavy-tailed regression.
pub fn theoretical_exponent(task: Task, beta: f64, gamma: f64, dim: usize, p: f64, abscissa: Abscissa) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) || dim == 0 {
        return Err(Error::param("beta", "need beta in (0, 1] and dim >= 1"));
    }
    let d = dim as f64;
    if task.is_classification() && !(gamma >= 0.0) {
        return Err(Error::param("gamma", "must be >= 0"));
    }
    if task.is_heavy() && !(p >= 2.0 && p.is_finite()) {
        return Err(Error::param("p", "heavy tails need a finite p >= 2"));
    }
    let mismatch = || Err(Error::TaskMismatch(format!("{task} has no exponent along {abscissa}")));
    let cls_stat = -beta * (gamma + 1.0) / (2.0 * beta + d);
    let reg_stat = -2.0 * beta / (2.0 * beta + d);
    match (task.is_local(), abscissa) {
        (true, Abscissa::EpsN) | (false, Abscissa::NEps2) => mismatch(),
        (true, _) => Ok(match task {
            Task::ClsLocal => cls_stat,
            Task::RegLocalBounded => reg_stat,
            _ => -2.0 * beta * (p - 1.0) / (2.0 * p * beta + d * (p - 1.0)),
        }),
        (false, Abscissa::N) => Ok(if task.is_classification() { cls_stat } else { reg_stat }),
        (false, _) => Ok(if task.is_classification() {
            -beta * (gamma + 1.0) / (beta + d)
        } else if task.is_heavy() {
            -2.0 * beta * (p - 1.0) / (p * beta + d * (p - 1.0))
        } else {
            -2.0 * beta / (d + beta)
        }),
    }
}

/// Aggregates records per abscissa value and fits the log-log slope.
///
/// Records must share one task; along `N` they must also share one ε so
/// that regimes are never mixed.
pub fn fit_rate(records: &[TrialRecord], abscissa: Abscissa, aggregator: Aggregator) -> Result<RateFit> {
    let Some(first) = records.first() else {
        return Err(Error::DegenerateFit("no records".into()));
    };
    if records.iter().any(|r| r.task != first.task) {
        return Err(Error::DegenerateFit("records mix several tasks".into()));
    }
    if abscissa == Abscissa::N && records.iter().any(|r| r.eps.to_bits() != first.eps.to_bits()) {
        return Err(Error::DegenerateFit("a fit along N needs a single eps value".into()));
    }
    let mut groups: Vec<(f64, Vec<f64>)> = Vec::new();
    for r in records {
        let x = abscissa.value(r.n, r.eps);
        match groups.iter_mut().find(|(gx, _)| gx.to_bits() == x.to_bits()) {
            Some((_, v)) => v.push(r.excess_risk),
            None => groups.push((x, vec![r.excess_risk])),
        }
    }
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    let points: Vec<(f64, f64)> = groups.into_iter().map(|(x, mut v)| (x, aggregator.apply(&mut v))).collect();
    fit_rate_points(&points, abscissa)
}

/// Log-log OLS on `(abscissa, risk)` pairs; points with a nonpositive
/// coordinate or an infinite abscissa are dropped.
pub fn fit_rate_points(points: &[(f64, f64)], abscissa: Abscissa) -> Result<RateFit> {
    let (kept, dropped): (Vec<_>, Vec<_>) =
        points.iter().copied().partition(|(x, y)| *x > 0.0 && x.is_finite() && *y > 0.0 && y.is_finite());
    let mut xs: Vec<f64> = kept.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 || xs.len() != kept.len() {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 distinct positive abscissa values with positive risk, have {} of {}",
            xs.len(),
            kept.len()
        )));
    }
    let lx: Vec<f64> = kept.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = kept.iter().map(|p| p.1.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let slope_std_error = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(RateFit {
        slope,
        intercept,
        slope_std_error,
        theoretical_exponent: None,
        abscissa,
        points: kept,
        dropped: dropped.into_iter().map(|p| p.0).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_exponents() {
        let e = theoretical_exponent(Task::ClsLocal, 1.0, 1.0, 1, 2.0, Abscissa::N).unwrap();
        assert!((e + 2.0 / 3.0).abs() < 1e-15);
        let e = theoretical_exponent(Task::RegLocalBounded, 1.0, 1.0, 1, 2.0, Abscissa::NEps2).unwrap();
        assert!((e + 2.0 / 3.0).abs() < 1e-15);
        let e = theoretical_exponent(Task::RegLocalHeavy, 1.0, 1.0, 1, 2.0, Abscissa::N).unwrap();
        assert!((e + 0.4).abs() < 1e-15);
        let e = theoretical_exponent(Task::ClsCentral, 1.0, 1.0, 1, 2.0, Abscissa::EpsN).unwrap();
        assert!((e + 1.0).abs() < 1e-15);
        let e = theoretical_exponent(Task::RegFullBounded, 1.0, 1.0, 1, 2.0, Abscissa::EpsN).unwrap();
        assert!((e + 1.0).abs() < 1e-15);
        let e = theoretical_exponent(Task::RegCentralHeavy, 1.0, 1.0, 1, 2.0, Abscissa::EpsN).unwrap();
        assert!((e + 2.0 / 3.0).abs() < 1e-15);
        assert!(theoretical_exponent(Task::ClsLocal, 1.0, 1.0, 1, 2.0, Abscissa::EpsN).is_err());
        assert!(theoretical_exponent(Task::ClsFull, 1.0, 1.0, 1, 2.0, Abscissa::NEps2).is_err());
        assert!(theoretical_exponent(Task::RegLocalHeavy, 1.0, 1.0, 1, 1.0, Abscissa::N).is_err());
    }

    #[test]
    fn heavy_exponent_tends_to_bounded() {
        let heavy = theoretical_exponent(Task::RegLocalHeavy, 1.0, 0.0, 1, 1e9, Abscissa::N).unwrap();
        let bounded = theoretical_exponent(Task::RegLocalBounded, 1.0, 0.0, 1, 2.0, Abscissa::N).unwrap();
        assert!((heavy - bounded).abs() < 1e-8);
    }

    #[test]
    fn exact_power_law() {
        let pts: Vec<_> = (10..=16).map(|j| (2f64.powi(j), 2f64.powf(-2.0 * j as f64 / 3.0))).collect();
        let fit = fit_rate_points(&pts, Abscissa::N).unwrap();
        assert!((fit.slope + 2.0 / 3.0).abs() < 1e-12);
        assert!(fit.slope_std_error < 1e-12);
    }

    #[test]
    fn three_collinear_points() {
        let e = std::f64::consts::E;
        let fit = fit_rate_points(&[(1.0, 1.0), (e, 1.0 / e), (e * e, 1.0 / (e * e))], Abscissa::N).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        assert!(fit_rate_points(&[(1.0, 1.0), (2.0, 0.5)], Abscissa::N).is_err());
        // a nonpositive risk is dropped and the rest still fit
        let fit = fit_rate_points(&[(1.0, 1.0), (2.0, 0.5), (3.0, 0.0), (4.0, 0.25)], Abscissa::N).unwrap();
        assert_eq!(fit.dropped, vec![3.0]);
        assert!(fit_rate_points(&[(1.0, 1.0), (2.0, 0.5), (3.0, -1.0)], Abscissa::N).is_err());
    }

    #[test]
    fn aggregators() {
        assert_eq!(Aggregator::Median.apply(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(Aggregator::Median.apply(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(Aggregator::Mean.apply(&mut [4.0, 1.0, 1.0]), 2.0);
    }

    fn record(n: usize, eps: f64, risk: f64) -> TrialRecord {
        TrialRecord {
            task: Task::ClsLocal,
            n,
            eps,
            trial: 0,
            seed: 0,
            excess_risk: risk,
            std_error: 0.0,
            h: Some(0.1),
            k: None,
            t: None,
            n0: None,
            wall_ms: None,
        }
    }

    #[test]
    fn fit_from_records() {
        let recs: Vec<_> = [100, 200, 400, 800]
            .iter()
            .flat_map(|&n| {
                let base = (n as f64).powf(-0.5);
                [record(n, 1.0, base * 0.5), record(n, 1.0, base), record(n, 1.0, base * 9.0)]
            })
            .collect();
        let fit = fit_rate(&recs, Abscissa::N, Aggregator::Median).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        let mut mixed = recs.clone();
        mixed.push(record(100, 2.0, 0.1));
        assert!(fit_rate(&mixed, Abscissa::N, Aggregator::Median).is_err());
        assert!(fit_rate(&mixed, Abscissa::NEps2, Aggregator::Median).is_ok());
    }
}
