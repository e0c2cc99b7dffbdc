//! Shared domain types: privacy budgets, assumption constants, datasets and
//! the cube partition of `[0, 1]^d`.

mod partition;

pub use partition::CubePartition;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Privacy parameter of an estimator. `INFINITE` disables privacy and turns
/// every estimator into its noise-free oracle.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PrivacyBudget {
    epsilon: f64,
}

impl PrivacyBudget {
    pub const INFINITE: PrivacyBudget = PrivacyBudget { epsilon: f64::INFINITY };

    /// A finite budget; `epsilon` must be strictly positive.
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(Error::param("epsilon", format!("must be > 0, got {epsilon}")));
        }
        Ok(Self { epsilon })
    }

    /// `f64::INFINITY` for the infinite budget.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn is_infinite(&self) -> bool {
        self.epsilon.is_infinite()
    }
}

impl fmt::Display for PrivacyBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.epsilon)
    }
}

/// Regularity constants of the distribution class.
///
/// `radius` (the ball-volume constant) is carried for completeness; no
/// estimator reads it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionParams {
    /// Hölder exponent, in (0, 1].
    pub beta: f64,
    /// Hölder constant.
    pub holder_const: f64,
    /// Tsybakov margin exponent.
    pub gamma: f64,
    /// Tsybakov margin constant.
    pub margin_const: f64,
    /// Lower bound of the feature density.
    pub density_lb: f64,
    /// Corner constant, in (0, 1].
    pub theta: f64,
    pub radius: f64,
    /// Moment order `p` for heavy-tailed labels.
    pub moment_order: f64,
    /// Bound `M_p` on `E[|Y|^p | x]`.
    pub moment_bound: f64,
    /// Almost-sure bound on `|Y|` for bounded-noise regression.
    pub label_bound: f64,
}

impl Default for AssumptionParams {
    fn default() -> Self {
        Self {
            beta: 1.0,
            holder_const: 1.0,
            gamma: 1.0,
            margin_const: 1.0,
            density_lb: 1.0,
            theta: 1.0,
            radius: 1.0,
            moment_order: 2.0,
            moment_bound: 1.0,
            label_bound: 1.0,
        }
    }
}

impl AssumptionParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be finite and > 0, got {v}")))
            }
        };
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::param("beta", format!("must lie in (0, 1], got {}", self.beta)));
        }
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::param("theta", format!("must lie in (0, 1], got {}", self.theta)));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::param("gamma", format!("must be >= 0, got {}", self.gamma)));
        }
        if !(self.moment_order >= 2.0 && self.moment_order.is_finite()) {
            return Err(Error::param(
                "moment_order",
                format!("must be >= 2, got {}", self.moment_order),
            ));
        }
        positive("holder_const", self.holder_const)?;
        positive("margin_const", self.margin_const)?;
        positive("density_lb", self.density_lb)?;
        positive("radius", self.radius)?;
        positive("moment_bound", self.moment_bound)?;
        positive("label_bound", self.label_bound)?;
        Ok(())
    }
}

/// Learning task carried by a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskKind {
    /// Classes are labelled `1..=classes`.
    Classification { classes: usize },
    Regression,
}

/// Label of one sample. Classes are 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Label {
    Class(usize),
    Value(f64),
}

/// One `(x, y)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub x: Vec<f64>,
    pub y: Label,
}

/// Row-major matrix of points in `[0, 1]^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Points {
    dim: usize,
    coords: Vec<f64>,
}

impl Points {
    /// Validates that every coordinate lies in `[0, 1]`.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "must be >= 1"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch { expected: dim, actual: coords.len() % dim });
        }
        for (i, &c) in coords.iter().enumerate() {
            check_unit(i % dim, c)?;
        }
        Ok(Self { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }
}

pub(crate) fn check_unit(axis: usize, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { axis, value })
    }
}

/// Labels of a dataset, stored per task kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Labels {
    Classes(Vec<usize>),
    Values(Vec<f64>),
}

impl Labels {
    pub fn len(&self) -> usize {
        match self {
            Labels::Classes(v) => v.len(),
            Labels::Values(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A labelled sample set sharing one dimension and one task kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    task: TaskKind,
    points: Points,
    labels: Labels,
}

impl Dataset {
    pub fn new(dim: usize, task: TaskKind, samples: &[LabeledSample]) -> Result<Self> {
        let mut coords = Vec::with_capacity(samples.len() * dim);
        for s in samples {
            if s.x.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: s.x.len() });
            }
            coords.extend_from_slice(&s.x);
        }
        let labels = match task {
            TaskKind::Classification { .. } => Labels::Classes(
                samples
                    .iter()
                    .map(|s| match s.y {
                        Label::Class(c) => Ok(c),
                        Label::Value(_) => {
                            Err(Error::TaskMismatch("real label in a classification dataset".into()))
                        }
                    })
                    .collect::<Result<_>>()?,
            ),
            TaskKind::Regression => Labels::Values(
                samples
                    .iter()
                    .map(|s| match s.y {
                        Label::Value(v) => Ok(v),
                        Label::Class(_) => {
                            Err(Error::TaskMismatch("class label in a regression dataset".into()))
                        }
                    })
                    .collect::<Result<_>>()?,
            ),
        };
        Self::from_parts(task, Points::new(dim, coords)?, labels)
    }

    pub fn from_parts(task: TaskKind, points: Points, labels: Labels) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::param(
                "labels",
                format!("{} labels for {} points", labels.len(), points.len()),
            ));
        }
        match (&task, &labels) {
            (TaskKind::Classification { classes }, Labels::Classes(ys)) => {
                if *classes < 2 {
                    return Err(Error::param("classes", "must be >= 2"));
                }
                if let Some(&bad) = ys.iter().find(|&&y| y == 0 || y > *classes) {
                    return Err(Error::InvalidClass { label: bad, classes: *classes });
                }
            }
            (TaskKind::Regression, Labels::Values(ys)) => {
                if ys.iter().any(|y| !y.is_finite()) {
                    return Err(Error::param("labels", "regression labels must be finite"));
                }
            }
            _ => return Err(Error::TaskMismatch("label kind does not match task".into())),
        }
        Ok(Self { task, points, labels })
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn task(&self) -> TaskKind {
        self.task
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &Points {
        &self.points
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    /// Number of classes, or an error for regression data.
    pub fn classes(&self) -> Result<usize> {
        match self.task {
            TaskKind::Classification { classes } => Ok(classes),
            TaskKind::Regression => Err(Error::TaskMismatch("expected classification data".into())),
        }
    }

    pub fn class_labels(&self) -> Result<&[usize]> {
        match &self.labels {
            Labels::Classes(v) => Ok(v),
            Labels::Values(_) => Err(Error::TaskMismatch("expected classification data".into())),
        }
    }

    pub fn values(&self) -> Result<&[f64]> {
        match &self.labels {
            Labels::Values(v) => Ok(v),
            Labels::Classes(_) => Err(Error::TaskMismatch("expected regression data".into())),
        }
    }

    pub fn sample(&self, i: usize) -> LabeledSample {
        let y = match &self.labels {
            Labels::Classes(v) => Label::Class(v[i]),
            Labels::Values(v) => Label::Value(v[i]),
        };
        LabeledSample { x: self.points.get(i).to_vec(), y }
    }

    /// Returns a copy with the labels replaced; the task kind must match.
    pub fn with_labels(&self, labels: Labels) -> Result<Self> {
        Self::from_parts(self.task, self.points.clone(), labels)
    }
}
