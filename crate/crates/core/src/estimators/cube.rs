//! Piecewise-constant estimators on a cube partition.

use super::{CentralModel, Classifier, Regressor};
use crate::domain::{CubePartition, Dataset, Points, PrivacyBudget};
use crate::error::{Error, Result};
use crate::mechanisms::{clip, sample_laplace, EnumerableTrainer, PrivatizedBits};
use rand::Rng;

/// One class per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeClassifier {
    partition: CubePartition,
    classes: usize,
    class_of: Vec<usize>,
}

impl CubeClassifier {
    pub fn new(partition: CubePartition, classes: usize, class_of: Vec<usize>) -> Result<Self> {
        if class_of.len() != partition.num_cells() {
            return Err(Error::param("class_of", "need one class per cell"));
        }
        if let Some(&bad) = class_of.iter().find(|&&c| c == 0 || c > classes) {
            return Err(Error::InvalidClass { label: bad, classes });
        }
        Ok(Self { partition, classes, class_of })
    }

    pub fn partition(&self) -> &CubePartition {
        &self.partition
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }
}

impl Classifier for CubeClassifier {
    fn dim(&self) -> usize {
        self.partition.dim()
    }

    fn classes(&self) -> usize {
        self.classes
    }

    fn predict_class(&self, x: &[f64]) -> Result<usize> {
        Ok(self.class_of[self.partition.cube_index(x)?])
    }
}

/// One value per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeRegressor {
    partition: CubePartition,
    value_of: Vec<f64>,
    sample_floor: Option<f64>,
}

impl CubeRegressor {
    pub fn new(partition: CubePartition, value_of: Vec<f64>) -> Result<Self> {
        if value_of.len() != partition.num_cells() {
            return Err(Error::param("value_of", "need one value per cell"));
        }
        if value_of.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("value_of", "values must be finite"));
        }
        Ok(Self { partition, value_of, sample_floor: None })
    }

    pub fn partition(&self) -> &CubePartition {
        &self.partition
    }

    pub fn value_of(&self) -> &[f64] {
        &self.value_of
    }

    /// The denominator floor `n0` of the full-DP estimator.
    pub fn sample_floor(&self) -> Option<f64> {
        self.sample_floor
    }
}

impl Regressor for CubeRegressor {
    fn dim(&self) -> usize {
        self.partition.dim()
    }

    fn predict_value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.value_of[self.partition.cube_index(x)?])
    }
}

fn cell_indices(partition: &CubePartition, points: &Points) -> Result<Vec<usize>> {
    if points.dim() != partition.dim() {
        return Err(Error::DimensionMismatch { expected: partition.dim(), actual: points.dim() });
    }
    points.iter().map(|x| partition.cube_index(x)).collect()
}

/// Local-model classifier: per cell, the class whose privatized bits sum
/// highest (smallest class on ties, class 1 in empty cells).
pub fn fit_local_cube_classifier(
    points: &Points,
    bits: &[PrivatizedBits],
    classes: usize,
    h: f64,
) -> Result<CubeClassifier> {
    if points.len() != bits.len() {
        return Err(Error::param("bits", format!("{} reports for {} points", bits.len(), points.len())));
    }
    if classes < 2 {
        return Err(Error::param("classes", "must be >= 2"));
    }
    let partition = CubePartition::new(points.dim(), h)?;
    let cells = cell_indices(&partition, points)?;
    let mut sums = vec![0u64; partition.num_cells() * classes];
    for (&cell, report) in cells.iter().zip(bits) {
        if report.len() != classes {
            return Err(Error::DimensionMismatch { expected: classes, actual: report.len() });
        }
        let row = &mut sums[cell * classes..(cell + 1) * classes];
        for (s, &b) in row.iter_mut().zip(report.as_slice()) {
            *s += u64::from(b);
        }
    }
    let class_of = sums.chunks_exact(classes).map(argmax_count).collect();
    Ok(CubeClassifier { partition, classes, class_of })
}

/// 1-based argmax, first maximum wins.
fn argmax_count(row: &[u64]) -> usize {
    let mut best = 0;
    for (j, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = j;
        }
    }
    best + 1
}

fn scale_of(model: CentralModel) -> f64 {
    match model {
        CentralModel::Label => 2.0,
        CentralModel::Full => 4.0,
    }
}

/// `ln P(c = j)` for the exponential mechanism
/// `P(c = j) ∝ exp(ε n_j / scale)`, computed on max-shifted counts.
/// An infinite budget puts all mass on the first maximal count.
pub fn exp_mechanism_log_probs(counts: &[u64], epsilon: f64, scale: f64) -> Vec<f64> {
    let max = counts.iter().copied().max().unwrap_or(0);
    if epsilon.is_infinite() {
        let winner = counts.iter().position(|&c| c == max).unwrap_or(0);
        return (0..counts.len()).map(|j| if j == winner { 0.0 } else { f64::NEG_INFINITY }).collect();
    }
    let logits: Vec<f64> =
        counts.iter().map(|&c| -(epsilon * (max - c) as f64 / scale)).collect();
    let log_norm = logits.iter().map(|l| l.exp()).sum::<f64>().ln();
    logits.into_iter().map(|l| l - log_norm).collect()
}

pub fn exp_mechanism_probabilities(counts: &[u64], epsilon: f64, scale: f64) -> Vec<f64> {
    exp_mechanism_log_probs(counts, epsilon, scale).into_iter().map(f64::exp).collect()
}

/// One draw from the exponential mechanism over `counts`, 1-based, by
/// inverse CDF of a single uniform. An infinite budget returns the first
/// maximal count without consuming randomness.
pub fn sample_exp_mechanism<R: Rng + ?Sized>(counts: &[u64], epsilon: f64, scale: f64, rng: &mut R) -> usize {
    if epsilon.is_infinite() {
        return argmax_count(counts);
    }
    let probs = exp_mechanism_probabilities(counts, epsilon, scale);
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (j, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return j + 1;
        }
    }
    // rounding left u above the total; take the last class with mass
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0) + 1
}

fn class_counts(dataset: &Dataset, partition: &CubePartition) -> Result<Vec<u64>> {
    let classes = dataset.classes()?;
    let cells = cell_indices(partition, dataset.points())?;
    let mut counts = vec![0u64; partition.num_cells() * classes];
    for (&cell, &y) in cells.iter().zip(dataset.class_labels()?) {
        counts[cell * classes + y - 1] += 1;
    }
    Ok(counts)
}

/// Central classifier: each cell samples its class from the exponential
/// mechanism over per-class counts (scale 2 for label privacy, 4 for full
/// privacy). One uniform draw per cell, in cell order.
pub fn fit_central_exp_classifier<R: Rng + ?Sized>(
    dataset: &Dataset,
    h: f64,
    budget: PrivacyBudget,
    model: CentralModel,
    rng: &mut R,
) -> Result<CubeClassifier> {
    let classes = dataset.classes()?;
    let partition = CubePartition::new(dataset.dim(), h)?;
    let counts = class_counts(dataset, &partition)?;
    let scale = scale_of(model);
    let class_of = counts
        .chunks_exact(classes)
        .map(|row| sample_exp_mechanism(row, budget.epsilon(), scale, rng))
        .collect();
    Ok(CubeClassifier { partition, classes, class_of })
}

/// Closed-form output law of [`fit_central_exp_classifier`] over all `K^G`
/// class assignments, for exhaustive auditing. Model index is mixed-radix
/// with cell 0 most significant.
#[derive(Debug, Clone)]
pub struct ExpMechanismTrainer {
    pub h: f64,
    pub budget: PrivacyBudget,
    pub model: CentralModel,
}

impl EnumerableTrainer for ExpMechanismTrainer {
    fn model_space_size(&self, data: &Dataset) -> Result<u128> {
        let classes = data.classes()? as u128;
        let cells = CubePartition::new(data.dim(), self.h)?.num_cells();
        Ok(u32::try_from(cells).ok().and_then(|g| classes.checked_pow(g)).unwrap_or(u128::MAX))
    }

    fn output_log_probs(&self, data: &Dataset) -> Result<Vec<f64>> {
        let classes = data.classes()?;
        let partition = CubePartition::new(data.dim(), self.h)?;
        let counts = class_counts(data, &partition)?;
        let per_cell: Vec<Vec<f64>> = counts
            .chunks_exact(classes)
            .map(|row| exp_mechanism_log_probs(row, self.budget.epsilon(), scale_of(self.model)))
            .collect();
        let mut out = vec![0.0f64];
        for cell in &per_cell {
            out = out.iter().flat_map(|&acc| cell.iter().map(move |&lp| acc + lp)).collect();
        }
        Ok(out)
    }
}

/// Options of the central cube regressor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeRegressorOptions {
    /// Label bound `T` (unclipped) or clipping radius (clipped).
    pub bound: f64,
    pub clipped: bool,
    pub model: CentralModel,
    /// Density lower bound `c` entering `n0 = N c θ h^d / 2`.
    pub density_lb: f64,
    /// Corner constant `θ` entering `n0`.
    pub theta: f64,
}

impl CubeRegressorOptions {
    pub fn new(bound: f64, clipped: bool, model: CentralModel) -> Self {
        Self { bound, clipped, model, density_lb: 1.0, theta: 1.0 }
    }
}

/// Central regressor. Per cell:
///
/// * label privacy: mean label plus `Lap(2T/(n_l ε))`, or 0 in empty cells;
/// * full privacy: label sum over `max(n_l, n0)` plus `Lap(6T/(n0 ε))` in
///   every cell.
///
/// Labels are clipped to `[-T, T]` when `clipped`; otherwise every label
/// must already satisfy `|y| <= T`.
pub fn fit_central_cube_regressor<R: Rng + ?Sized>(
    dataset: &Dataset,
    h: f64,
    budget: PrivacyBudget,
    options: CubeRegressorOptions,
    rng: &mut R,
) -> Result<CubeRegressor> {
    let bound = options.bound;
    if !(bound > 0.0) {
        return Err(Error::param("bound", format!("must be > 0, got {bound}")));
    }
    let labels = dataset.values()?;
    let partition = CubePartition::new(dataset.dim(), h)?;
    let cells = cell_indices(&partition, dataset.points())?;
    let g = partition.num_cells();
    let mut sums = vec![0.0f64; g];
    let mut counts = vec![0usize; g];
    for (&cell, &y) in cells.iter().zip(labels) {
        let y = if options.clipped {
            clip(y, bound)
        } else if y.abs() <= bound {
            y
        } else {
            return Err(Error::param("labels", format!("|{y}| exceeds label bound {bound}")));
        };
        sums[cell] += y;
        counts[cell] += 1;
    }
    let eps = budget.epsilon();
    let mut value_of = Vec::with_capacity(g);
    let mut sample_floor = None;
    match options.model {
        CentralModel::Label => {
            for (&sum, &n) in sums.iter().zip(&counts) {
                let v = if n == 0 {
                    0.0
                } else {
                    let mean = sum / n as f64;
                    if budget.is_infinite() {
                        mean
                    } else {
                        mean + sample_laplace(2.0 * bound / (n as f64 * eps), rng)
                    }
                };
                value_of.push(v);
            }
        }
        CentralModel::Full => {
            let n0 = 0.5
                * dataset.len() as f64
                * options.density_lb
                * options.theta
                * partition.width().powi(dataset.dim() as i32);
            if !(n0 > 0.0) {
                return Err(Error::param("n0", "sample floor must be > 0"));
            }
            sample_floor = Some(n0);
            for (&sum, &n) in sums.iter().zip(&counts) {
                let mean = sum / (n as f64).max(n0);
                let v = if budget.is_infinite() {
                    mean
                } else {
                    mean + sample_laplace(6.0 * bound / (n0 * eps), rng)
                };
                value_of.push(v);
            }
        }
    }
    Ok(CubeRegressor { partition, value_of, sample_floor })
}
