//! Exact privacy audits by enumeration: local mechanisms over all outputs,
//! and the central exponential-mechanism classifier over all neighbouring
//! datasets.
//!
//! ```text
//! cargo run --release --example privacy_audit
//! ```

use labeldp::estimators::{CentralModel, ExpMechanismTrainer};
use labeldp::mechanisms::{audit_cdp_exhaustive, audit_ldp_discrete, KBitMechanism, RandomizedResponse};
use labeldp::{Dataset, Labels, Points, PrivacyBudget, TaskKind};

fn main() -> labeldp::Result<()> {
    println!("local mechanisms, measured loss vs budget");
    for classes in [2, 5, 10] {
        for epsilon in [0.1, 1.0, 2.0] {
            let kbit = audit_ldp_discrete(&KBitMechanism { classes, epsilon })?;
            let rr = audit_ldp_discrete(&RandomizedResponse { classes, epsilon })?;
            println!("  K = {classes:<2} eps = {epsilon:<3}  k-bit {kbit:.12}  randomized response {rr:.12}");
        }
    }

    let data = Dataset::from_parts(
        TaskKind::Classification { classes: 2 },
        Points::new(1, vec![0.1, 0.2, 0.4, 0.6, 0.7, 0.9])?,
        Labels::Classes(vec![1, 1, 2, 2, 2, 1]),
    )?;
    println!("exponential mechanism on 6 samples in 2 cubes");
    for model in [CentralModel::Label, CentralModel::Full] {
        let trainer = ExpMechanismTrainer { h: 0.5, budget: PrivacyBudget::new(1.0)?, model };
        for flips in 1..=3 {
            let loss = audit_cdp_exhaustive(&trainer, &data, flips)?;
            println!("  {model:?}: up to {flips} label changes, loss {loss:.6} (budget {flips})");
        }
    }
    Ok(())
}
