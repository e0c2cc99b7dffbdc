//! Central cube regressors: label privacy against full privacy, where the
//! curator also protects features by flooring every cube's denominator.
//!
//! ```text
//! cargo run --release --example central_regression
//! ```

use labeldp::estimators::{fit_central_cube_regressor, h_central_reg, CentralModel, CubeRegressorOptions};
use labeldp::risk::excess_risk_regressor;
use labeldp::rng::stream;
use labeldp::synthdata::{sample_dataset, smooth_regression, RegressionNoise};
use labeldp::PrivacyBudget;

fn main() -> labeldp::Result<()> {
    let n = 1 << 15;
    let bound = 1.0;
    let dist = smooth_regression(1, 1.0, RegressionNoise::Bounded { bound, half_width: None }, 3)?;
    let data = sample_dataset(&dist, n, 4)?;

    for eps in [0.1, 0.5, 2.0] {
        let budget = PrivacyBudget::new(eps)?;
        let h = h_central_reg(n, budget, 1.0, 1, None, 1.0)?;
        for model in [CentralModel::Label, CentralModel::Full] {
            let options = CubeRegressorOptions::new(bound, false, model);
            let fitted = fit_central_cube_regressor(&data, h, budget, options, &mut stream(5, 1))?;
            let risk = excess_risk_regressor(&fitted, &dist)?;
            let floor = fitted.sample_floor().map_or(String::from("-"), |n0| format!("{n0:.1}"));
            println!("eps = {eps:<4} h = {h:.4}  {model:?}: n0 = {floor:<6} excess risk = {:.3e}", risk.excess_risk);
        }
    }
    Ok(())
}
