//! Heavy-tailed labels: the clipping bias against its bound, then the
//! clipped local kNN regressor as N grows.
//!
//! ```text
//! cargo run --release --example heavy_tails
//! ```

use labeldp::estimators::{clip_radius, fit_knn_regressor, k_local_reg, ClipSchedule};
use labeldp::mechanisms::privatize_clip_laplace;
use labeldp::risk::{clip_bias_bound, excess_risk_regressor};
use labeldp::rng::stream;
use labeldp::synthdata::{sample_dataset, smooth_regression, RegressionNoise};
use labeldp::PrivacyBudget;

fn main() -> labeldp::Result<()> {
    let (p, moment) = (2.0, 1.0);
    let dist = smooth_regression(1, 1.0, RegressionNoise::Heavy { order: p, moment }, 8)?;
    println!("three-point law with peak T0 = {:.3}", dist.heavy_peak().unwrap_or(f64::NAN));

    for t in [0.5, 1.0, 2.0, 5.0] {
        let worst = (0..=200)
            .map(|i| {
                let x = [i as f64 / 200.0];
                let exact = dist.clipped_mean(&x, t)? - dist.regression_value(&x)?;
                Ok(exact.abs())
            })
            .collect::<labeldp::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("T = {t:<4} max clipping bias {worst:.4}  bound {:.4}", clip_bias_bound(t, p, moment)?);
    }

    let eps = 0.5;
    let budget = PrivacyBudget::new(eps)?;
    for n in [1 << 12, 1 << 14, 1 << 16] {
        let data = sample_dataset(&dist, n, 9)?;
        let k = k_local_reg(n, budget, 1.0, 1, Some(p), 1.0)?;
        let t = clip_radius(ClipSchedule::Local { k, budget, p }, 1.0)?;
        let mut rng = stream(10, 1);
        let z = data
            .values()?
            .iter()
            .map(|&y| privatize_clip_laplace(y, t, eps, &mut rng).map(|z| z.value()))
            .collect::<labeldp::Result<Vec<_>>>()?;
        let model = fit_knn_regressor(data.points(), z, k)?;
        let risk = excess_risk_regressor(&model, &dist)?;
        println!("N = {n:<6} k = {k:<5} T = {t:.3}  excess risk = {:.3e}", risk.excess_risk);
    }
    Ok(())
}
