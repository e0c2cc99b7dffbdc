//! Excess risk of fitted models against a known distribution.

use crate::domain::TaskKind;
use crate::error::{Error, Result};
use crate::estimators::{Classifier, Regressor};
use crate::quadrature::{self, Method, Rule};
use crate::synthdata::Distribution;

/// An excess-risk estimate; `std_error` is zero for grid evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskReport {
    pub excess_risk: f64,
    pub std_error: f64,
    pub method: Method,
    pub eval_points: usize,
}

impl RiskReport {
    fn from_quadrature(q: quadrature::Quadrature) -> Self {
        Self { excess_risk: q.value, std_error: q.std_error, method: q.method, eval_points: q.points }
    }
}

/// `∫ (η*(x) - η_{c(x)}(x)) dx` on the fine grid for the dimension. The
/// integrand jumps at cube faces, so coarse grids miss thin slivers near the
/// decision boundary.
pub fn excess_risk_classifier<C: Classifier + ?Sized>(model: &C, dist: &Distribution) -> Result<RiskReport> {
    excess_risk_classifier_with(model, dist, Rule::fine_for(dist.dim()))
}

pub fn excess_risk_classifier_with<C: Classifier + ?Sized>(
    model: &C,
    dist: &Distribution,
    rule: Rule,
) -> Result<RiskReport> {
    let classes = match dist.task() {
        TaskKind::Classification { classes } => classes,
        TaskKind::Regression => return Err(Error::TaskMismatch("classifier scored on a regression law".into())),
    };
    check_dim(model.dim(), dist.dim())?;
    if model.classes() != classes {
        return Err(Error::TaskMismatch(format!("model has {} classes, law has {classes}", model.classes())));
    }
    let mut probs = vec![0.0; classes];
    let mut failure = None;
    let q = quadrature::integrate(dist.dim(), rule, |x| {
        let c = match model.predict_class(x) {
            Ok(c) => c,
            Err(e) => {
                failure.get_or_insert(e);
                return 0.0;
            }
        };
        dist.class_probs_into(x, &mut probs).expect("dimension checked");
        let best = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (best - probs[c - 1]).max(0.0)
    });
    failure.map_or(Ok(RiskReport::from_quadrature(q)), Err)
}

/// `∫ (η̂(x) - η(x))² dx` under the default rule for the dimension.
pub fn excess_risk_regressor<M: Regressor + ?Sized>(model: &M, dist: &Distribution) -> Result<RiskReport> {
    excess_risk_regressor_with(model, dist, Rule::default_for(dist.dim()))
}

pub fn excess_risk_regressor_with<M: Regressor + ?Sized>(
    model: &M,
    dist: &Distribution,
    rule: Rule,
) -> Result<RiskReport> {
    if dist.task() != TaskKind::Regression {
        return Err(Error::TaskMismatch("regressor scored on a classification law".into()));
    }
    check_dim(model.dim(), dist.dim())?;
    let mut failure = None;
    let q = quadrature::integrate(dist.dim(), rule, |x| match model.predict_value(x) {
        Ok(v) => {
            let diff = v - dist.regression_value(x).expect("dimension checked");
            diff * diff
        }
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    });
    failure.map_or(Ok(RiskReport::from_quadrature(q)), Err)
}

fn check_dim(model: usize, dist: usize) -> Result<()> {
    if model == dist {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: dist, actual: model })
    }
}

/// Bound on the bias of clipping labels at `T` when `E|Y|^p <= M_p`:
/// `M_p / (p - 1) · T^(1-p)`.
pub fn clip_bias_bound(t: f64, p: f64, moment: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::param("T", format!("must be > 0, got {t}")));
    }
    if !(p > 1.0) {
        return Err(Error::param("p", format!("must be > 1, got {p}")));
    }
    if !(moment >= 0.0) {
        return Err(Error::param("M_p", format!("must be >= 0, got {moment}")));
    }
    Ok(moment / (p - 1.0) * t.powf(1.0 - p))
}
