//! Exact privacy audits by enumeration.
//!
//! Both audits return the largest log-ratio `ln P(o | a) / P(o | b)` over
//! output atoms `o` and neighbouring inputs `(a, b)`. Atoms impossible under
//! both inputs are skipped; an atom possible under only one input makes the
//! ratio `+∞`.

use super::kbit_probabilities;
use super::rr_keep_probability;
use crate::domain::{Dataset, Labels};
use crate::error::{Error, Result};

/// Largest output space `audit_ldp_discrete` will enumerate.
pub const MAX_LDP_OUTPUTS: u128 = 1 << 20;
/// Largest model space `audit_cdp_exhaustive` will enumerate.
pub const MAX_MODEL_SPACE: u128 = 1 << 16;
/// Largest dataset `audit_cdp_exhaustive` accepts.
pub const MAX_AUDIT_SAMPLES: usize = 12;
const MAX_NEIGHBOURS: u128 = 1 << 20;

/// A local mechanism with a finite output space.
pub trait DiscreteMechanism {
    fn num_labels(&self) -> usize;

    /// `None` when the output space cannot be enumerated.
    fn num_outputs(&self) -> Option<u128>;

    /// Writes `ln P(output | label)` for every label (0-based) into `out`.
    fn log_probs(&self, output: usize, out: &mut [f64]);
}

/// The K-bit mechanism; output `o` is a bitmask with bit `j` for class `j+1`.
#[derive(Debug, Clone, Copy)]
pub struct KBitMechanism {
    pub classes: usize,
    pub epsilon: f64,
}

impl DiscreteMechanism for KBitMechanism {
    fn num_labels(&self) -> usize {
        self.classes
    }

    fn num_outputs(&self) -> Option<u128> {
        1u128.checked_shl(self.classes as u32)
    }

    fn log_probs(&self, output: usize, out: &mut [f64]) {
        let (p, q) = kbit_probabilities(self.epsilon);
        let (ln_p, ln_1p, ln_q, ln_1q) = (p.ln(), (1.0 - p).ln(), q.ln(), (1.0 - q).ln());
        let set = |j: usize| output >> j & 1 == 1;
        // every bit as a non-matching bit, then swap in the matching one
        let base: f64 = (0..self.classes).map(|j| if set(j) { ln_q } else { ln_1q }).sum();
        for (y, slot) in out.iter_mut().enumerate() {
            *slot = if set(y) { base - ln_q + ln_p } else { base - ln_1q + ln_1p };
        }
    }
}

/// K-ary randomized response; outputs are 0-based classes.
#[derive(Debug, Clone, Copy)]
pub struct RandomizedResponse {
    pub classes: usize,
    pub epsilon: f64,
}

impl DiscreteMechanism for RandomizedResponse {
    fn num_labels(&self) -> usize {
        self.classes
    }

    fn num_outputs(&self) -> Option<u128> {
        Some(self.classes as u128)
    }

    fn log_probs(&self, output: usize, out: &mut [f64]) {
        let keep = rr_keep_probability(self.epsilon, self.classes);
        let other = keep * (-self.epsilon).exp();
        for (y, slot) in out.iter_mut().enumerate() {
            *slot = if y == output { keep.ln() } else { other.ln() };
        }
    }
}

/// Explicit table `probs[label][output]`.
#[derive(Debug, Clone)]
pub struct TabulatedMechanism {
    pub probs: Vec<Vec<f64>>,
}

impl DiscreteMechanism for TabulatedMechanism {
    fn num_labels(&self) -> usize {
        self.probs.len()
    }

    fn num_outputs(&self) -> Option<u128> {
        self.probs.first().map(|row| row.len() as u128)
    }

    fn log_probs(&self, output: usize, out: &mut [f64]) {
        for (slot, row) in out.iter_mut().zip(&self.probs) {
            *slot = row[output].ln();
        }
    }
}

/// Largest log-ratio within one set of log-probabilities.
fn spread(log_probs: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut impossible = false;
    for &lp in log_probs {
        if lp == f64::NEG_INFINITY {
            impossible = true;
        } else {
            lo = lo.min(lp);
            hi = hi.max(lp);
        }
    }
    if hi == f64::NEG_INFINITY {
        0.0
    } else if impossible {
        f64::INFINITY
    } else {
        hi - lo
    }
}

/// Exact local-privacy level: the max over outputs and label pairs of
/// `ln P(out | y) - ln P(out | y')`.
pub fn audit_ldp_discrete<M: DiscreteMechanism + ?Sized>(mechanism: &M) -> Result<f64> {
    let outputs = mechanism.num_outputs().ok_or(Error::NotEnumerable)?;
    if outputs > MAX_LDP_OUTPUTS {
        return Err(Error::EnumerationTooLarge { size: outputs, limit: MAX_LDP_OUTPUTS });
    }
    let mut buf = vec![0.0; mechanism.num_labels()];
    let mut worst = 0.0f64;
    for o in 0..outputs as usize {
        mechanism.log_probs(o, &mut buf);
        worst = worst.max(spread(&buf));
    }
    Ok(worst)
}

/// A central trainer whose output distribution is computable in closed form.
pub trait EnumerableTrainer {
    fn model_space_size(&self, data: &Dataset) -> Result<u128>;

    /// `ln P(model | data)` indexed by model.
    fn output_log_probs(&self, data: &Dataset) -> Result<Vec<f64>>;
}

fn pair_ratio(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |worst, (&x, &y)| worst.max(spread(&[x, y])))
}

/// Exact central label-privacy loss of `trainer` around `dataset`: the
/// largest log-ratio between `dataset` and any dataset differing in at most
/// `flips` labels. An ε-label-CDP trainer scores at most `flips · ε`.
pub fn audit_cdp_exhaustive<T: EnumerableTrainer + ?Sized>(
    trainer: &T,
    dataset: &Dataset,
    flips: usize,
) -> Result<f64> {
    let classes = dataset.classes()?;
    let labels = dataset.class_labels()?.to_vec();
    let n = labels.len();
    if n > MAX_AUDIT_SAMPLES {
        return Err(Error::EnumerationTooLarge { size: n as u128, limit: MAX_AUDIT_SAMPLES as u128 });
    }
    let space = trainer.model_space_size(dataset)?;
    if space > MAX_MODEL_SPACE {
        return Err(Error::EnumerationTooLarge { size: space, limit: MAX_MODEL_SPACE });
    }
    let flips = flips.min(n);
    let neighbours: u128 = (1..=flips)
        .map(|s| binomial(n, s) * (classes as u128 - 1).pow(s as u32))
        .sum();
    if neighbours > MAX_NEIGHBOURS {
        return Err(Error::EnumerationTooLarge { size: neighbours, limit: MAX_NEIGHBOURS });
    }
    let base = trainer.output_log_probs(dataset)?;
    let mut worst = 0.0f64;
    let mut current = labels.clone();
    let mut visit = |current: &[usize]| -> Result<()> {
        let neighbour = dataset.with_labels(Labels::Classes(current.to_vec()))?;
        let probs = trainer.output_log_probs(&neighbour)?;
        worst = worst.max(pair_ratio(&base, &probs));
        Ok(())
    };
    flip_recursive(&labels, &mut current, classes, 0, flips, &mut visit)?;
    Ok(worst)
}

/// Visits every relabelling of positions `>= start` changing between 1 and
/// `budget` labels, with earlier positions already fixed in `current`.
fn flip_recursive<F>(
    original: &[usize],
    current: &mut Vec<usize>,
    classes: usize,
    start: usize,
    budget: usize,
    visit: &mut F,
) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    if budget == 0 {
        return Ok(());
    }
    for i in start..original.len() {
        for c in 1..=classes {
            if c == original[i] {
                continue;
            }
            current[i] = c;
            visit(current)?;
            flip_recursive(original, current, classes, i + 1, budget - 1, visit)?;
        }
        current[i] = original[i];
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}
