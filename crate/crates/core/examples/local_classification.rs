//! Local label privacy end to end: every label is randomized before it
//! leaves the user, then a cube classifier is fit on the noisy bits.
//!
//! ```text
//! cargo run --release --example local_classification
//! ```

use labeldp::estimators::{fit_local_cube_classifier, h_local_cls, Classifier};
use labeldp::mechanisms::privatize_kbit;
use labeldp::risk::excess_risk_classifier;
use labeldp::rng::stream;
use labeldp::synthdata::{bayes_risk, sample_dataset, smooth_classification};
use labeldp::PrivacyBudget;

fn main() -> labeldp::Result<()> {
    let (n, classes) = (50_000, 3);
    let dist = smooth_classification(1, classes, 1.0, 11)?;
    let data = sample_dataset(&dist, n, 1)?;
    println!("Bayes risk of the law: {:.4}", bayes_risk(&dist)?.value);

    for eps in [0.25, 1.0, 4.0, f64::INFINITY] {
        let budget = if eps.is_finite() { PrivacyBudget::new(eps)? } else { PrivacyBudget::INFINITE };
        let mut rng = stream(2, 1);
        let bits = data
            .class_labels()?
            .iter()
            .map(|&y| privatize_kbit(y, classes, eps, &mut rng))
            .collect::<labeldp::Result<Vec<_>>>()?;
        let h = h_local_cls(n, budget, classes, 1.0, 1, 1.0)?;
        let model = fit_local_cube_classifier(data.points(), &bits, classes, h)?;
        let risk = excess_risk_classifier(&model, &dist)?;
        println!(
            "eps = {eps:<5} h = {h:.4}  class at x = 0.3: {}  excess risk = {:.3e}",
            model.predict_class(&[0.3])?,
            risk.excess_risk
        );
    }
    Ok(())
}
