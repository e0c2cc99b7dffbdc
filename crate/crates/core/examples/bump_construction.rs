//! The bump family behind minimax lower bounds: many small signed bumps,
//! each flipping the Bayes class inside one cube.
//!
//! ```text
//! cargo run --release --example bump_construction
//! ```

use labeldp::estimators::{fit_central_exp_classifier, CentralModel};
use labeldp::risk::excess_risk_classifier;
use labeldp::rng::stream;
use labeldp::synthdata::{bump_classification, sample_dataset, BumpConfig};
use labeldp::PrivacyBudget;

fn main() -> labeldp::Result<()> {
    let signs: Vec<i8> = (0..16).map(|i| if i % 3 == 0 { -1 } else { 1 }).collect();
    let config = BumpConfig::new(1.0 / 16.0, signs, 1.0);
    let dist = bump_classification(&config, 1)?;
    let params = dist.params();
    println!(
        "beta = {}  L = {:.3}  gamma = {}  C_T = {:.3}",
        params.beta, params.holder_const, params.gamma, params.margin_const
    );
    for i in 0..8 {
        let x = (i as f64 + 0.5) / 16.0;
        println!("  x = {x:.4}  P(Y = 2 | x) = {:.4}", dist.class_probs(&[x])?[1]);
    }
    for n in [1_000, 10_000, 100_000] {
        let data = sample_dataset(&dist, n, 3)?;
        for eps in [0.1, 1.0] {
            let model =
                fit_central_exp_classifier(&data, 1.0 / 16.0, PrivacyBudget::new(eps)?, CentralModel::Label, &mut stream(4, 1))?;
            let risk = excess_risk_classifier(&model, &dist)?;
            println!("N = {n:<6} eps = {eps:<3} excess risk = {:.3e}", risk.excess_risk);
        }
    }
    Ok(())
}
