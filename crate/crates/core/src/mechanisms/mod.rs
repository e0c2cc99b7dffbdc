//! Local label privatizers and exhaustive privacy audits.
//!
//! Local mechanisms take a raw `epsilon` in `[0, ∞]`: zero is the pure-noise
//! limit and `f64::INFINITY` returns the label untouched.

mod audit;

pub use audit::{
    audit_cdp_exhaustive, audit_ldp_discrete, DiscreteMechanism, EnumerableTrainer,
    KBitMechanism, RandomizedResponse, TabulatedMechanism, MAX_LDP_OUTPUTS, MAX_MODEL_SPACE,
    MAX_AUDIT_SAMPLES,
};

use crate::error::{Error, Result};
use rand::distributions::Open01;
use rand::Rng;

/// K-dimensional binary report of one label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivatizedBits {
    bits: Vec<bool>,
}

impl PrivatizedBits {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit of class `j` (1-based).
    pub fn get(&self, class: usize) -> bool {
        self.bits[class - 1]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// The one-hot report of `class` among `classes`.
    pub fn one_hot(class: usize, classes: usize) -> Self {
        Self { bits: (1..=classes).map(|j| j == class).collect() }
    }
}

/// A real label after clipping and Laplace noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisyLabel(pub f64);

impl NoisyLabel {
    pub fn value(self) -> f64 {
        self.0
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_nan() || epsilon < 0.0 {
        Err(Error::param("epsilon", format!("must be >= 0, got {epsilon}")))
    } else {
        Ok(())
    }
}

fn check_class(y: usize, classes: usize) -> Result<()> {
    if classes < 2 {
        return Err(Error::param("classes", "must be >= 2"));
    }
    if y == 0 || y > classes {
        return Err(Error::InvalidClass { label: y, classes });
    }
    Ok(())
}

/// Probabilities `(p, q)` that a bit is set when it matches / does not
/// match the label: `e^{ε/2}/(e^{ε/2}+1)` and `1/(e^{ε/2}+1)`.
pub fn kbit_probabilities(epsilon: f64) -> (f64, f64) {
    if epsilon.is_infinite() {
        return (1.0, 0.0);
    }
    let p = 1.0 / (1.0 + (-epsilon / 2.0).exp());
    let q = 1.0 / ((epsilon / 2.0).exp() + 1.0);
    (p, q)
}

/// Independent randomized response on each of the K indicator bits.
pub fn privatize_kbit<R: Rng + ?Sized>(
    y: usize,
    classes: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<PrivatizedBits> {
    check_class(y, classes)?;
    check_epsilon(epsilon)?;
    if epsilon.is_infinite() {
        return Ok(PrivatizedBits::one_hot(y, classes));
    }
    let (p, q) = kbit_probabilities(epsilon);
    let bits = (1..=classes)
        .map(|j| rng.gen::<f64>() < if j == y { p } else { q })
        .collect();
    Ok(PrivatizedBits { bits })
}

/// Probability that K-ary randomized response keeps the true class.
pub fn rr_keep_probability(epsilon: f64, classes: usize) -> f64 {
    if epsilon.is_infinite() {
        return 1.0;
    }
    1.0 / (1.0 + (classes as f64 - 1.0) * (-epsilon).exp())
}

/// K-ary randomized response: keeps `y` with probability
/// `e^ε/(e^ε + K - 1)`, otherwise reports one of the other classes uniformly.
pub fn privatize_rr<R: Rng + ?Sized>(y: usize, classes: usize, epsilon: f64, rng: &mut R) -> Result<usize> {
    check_class(y, classes)?;
    check_epsilon(epsilon)?;
    if epsilon.is_infinite() {
        return Ok(y);
    }
    let keep = rr_keep_probability(epsilon, classes);
    if rng.gen::<f64>() < keep {
        return Ok(y);
    }
    let other = rng.gen_range(1..classes);
    Ok(if other >= y { other + 1 } else { other })
}

/// Laplace noise by inverse CDF of one `Open01` draw:
/// `-scale · sign(u - 1/2) · ln(1 - 2|u - 1/2|)`.
pub fn sample_laplace<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    let c = u - 0.5;
    if c == 0.0 {
        return 0.0;
    }
    -scale * c.signum() * (1.0 - 2.0 * c.abs()).ln()
}

/// Clamp into `[-t, t]`.
pub fn clip(y: f64, t: f64) -> f64 {
    y.max(-t).min(t)
}

/// `z = y + Lap(2T/ε)` for a label with `|y| <= T`.
pub fn privatize_laplace<R: Rng + ?Sized>(y: f64, bound: f64, epsilon: f64, rng: &mut R) -> Result<NoisyLabel> {
    check_epsilon(epsilon)?;
    if !(bound > 0.0) {
        return Err(Error::param("bound", format!("must be > 0, got {bound}")));
    }
    if !(y.abs() <= bound) {
        return Err(Error::param("y", format!("|{y}| exceeds label bound {bound}")));
    }
    Ok(NoisyLabel(add_laplace(y, bound, epsilon, rng)))
}

/// `z = clip(y, T) + Lap(2T/ε)`.
pub fn privatize_clip_laplace<R: Rng + ?Sized>(y: f64, radius: f64, epsilon: f64, rng: &mut R) -> Result<NoisyLabel> {
    check_epsilon(epsilon)?;
    if !(radius > 0.0) {
        return Err(Error::param("radius", format!("must be > 0, got {radius}")));
    }
    if y.is_nan() {
        return Err(Error::param("y", "NaN label"));
    }
    Ok(NoisyLabel(add_laplace(clip(y, radius), radius, epsilon, rng)))
}

fn add_laplace<R: Rng + ?Sized>(y: f64, bound: f64, epsilon: f64, rng: &mut R) -> f64 {
    if epsilon.is_infinite() {
        y
    } else {
        y + sample_laplace(2.0 * bound / epsilon, rng)
    }
}
