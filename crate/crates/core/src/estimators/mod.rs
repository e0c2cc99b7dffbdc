//! Fit/predict procedures and their schedules.

mod cube;
mod knn;
pub mod schedule;

pub use cube::{
    exp_mechanism_log_probs, exp_mechanism_probabilities, fit_central_cube_regressor,
    fit_central_exp_classifier, fit_local_cube_classifier, sample_exp_mechanism, CubeClassifier, CubeRegressor,
    CubeRegressorOptions, ExpMechanismTrainer,
};
pub use knn::{fit_knn_regressor, KdTree, KnnRegressor};
pub use schedule::{clip_radius, h_central_cls, h_central_reg, h_local_cls, k_local_reg, ClipSchedule};

use crate::error::Result;

/// Which central privacy notion an estimator targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentralModel {
    /// Only labels are protected.
    Label,
    /// Features and labels are protected.
    Full,
}

/// A fitted classifier over `[0, 1]^d`.
pub trait Classifier {
    fn dim(&self) -> usize;
    fn classes(&self) -> usize;
    /// Predicted class, 1-based.
    fn predict_class(&self, x: &[f64]) -> Result<usize>;
}

/// A fitted regressor over `[0, 1]^d`.
pub trait Regressor {
    fn dim(&self) -> usize;
    fn predict_value(&self, x: &[f64]) -> Result<f64>;
}
