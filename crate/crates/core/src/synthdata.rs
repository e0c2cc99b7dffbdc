//! Joint laws of `(X, Y)` with exactly evaluable regression functions.
//!
//! Features are always uniform on `[0, 1]^d`, so the density lower bound is
//! `c = 1` and the corner constant is `theta = 1`.
//!
//! # Trigonometric family
//!
//! With `theta(x) = 2π Σ x_i + φ`, a phase `φ` and amplitude `a`, the class
//! probabilities are
//!
//! ```text
//! η_j(x) = 1/K + (2a/K) · sin(theta(x) + 2π (j - 2) / K),   j = 1..K
//! ```
//!
//! For `K = 2` this is `η_2 = 1/2 + a·s(x)`, `η_1 = 1/2 - a·s(x)` with
//! `s(x) = sin(theta(x))`. Seeded constructors draw `φ` uniformly so the
//! Bayes boundary does not sit on cube faces. The shifts sum to zero, so `Σ_j η_j = 1`, and
//! `a < 1/2` keeps every `η_j` in `[0, 1]`. The regression function is
//! `η(x) = a·s(x)`.
//!
//! Hölder constant: a sinusoid of amplitude `A` satisfies
//! `|Δη| <= min(2A, 2πA·√d·r)` for `‖x - x'‖ = r`, and
//! `min(u, v) <= u^(1-β) v^β`, so `L = (2A)^(1-β) (2πA√d)^β`
//! (`A = 2a/K` for classes, `A = a` for regression).
//!
//! Margin: `theta(X) mod 2π` is uniform because a sum of independent
//! uniforms is uniform modulo one. For a class pair the gap is
//! `(4a/K)|sin(Δ/2)|·|cos(theta + c)|` and `P(|cos| < u) <= u`, so a union
//! bound over pairs gives `γ = 1` with
//! `C_T = Σ_{i<j} K / (4a |sin(π(i-j)/K)|)` (equal to `1/(2a)` for `K = 2`).
//!
//! # Bump family
//!
//! `η_v(x) = Σ_k v_k φ((x - c_k)/w) w^β` with
//! `φ(u) = Π_i max(0, 1 - 2|u_i|)^β` over the first `m` cells (row-major) of
//! the partition of width `w`. Each factor is `β`-Hölder with constant
//! `2^β`; a product of `[0, 1]`-valued factors adds their increments, and
//! crossing a cube boundary (where `φ` vanishes) at most doubles the bound,
//! so `η_2 = (1 + η_v)/2` has `L = 2^β d^(1-β/2)`.
//!
//! # Heavy-tailed labels
//!
//! Given `η(x)`, `Y` takes `+T0`, `0`, `-T0` with probabilities
//! `(M_p/T0^p + η/T0)/2`, `1 - M_p/T0^p`, `(M_p/T0^p - η/T0)/2`. Then
//! `E[Y|x] = η(x)` and `E[|Y|^p | x] = M_p`. Validity needs
//! `M_p/T0^p <= 1` and `|η| <= M_p/T0^(p-1)`; `T0` is the largest value
//! meeting the second constraint, `T0 = (M_p / max|η|)^(1/(p-1))`.

use crate::domain::{
    AssumptionParams, CubePartition, Dataset, Label, Labels, Points, TaskKind,
};
use crate::error::{Error, Result};
use crate::quadrature::{self, Quadrature, Rule};
use crate::rng;
use rand::Rng;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// User-supplied class-probability map, writing `η_1..η_K` into the slice.
pub type ProbsFn = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;
/// User-supplied regression function.
pub type FieldFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Label noise of a regression distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegressionNoise {
    /// `Y = η(x) + U`, `U ~ Uniform[-half_width, half_width]`, `|Y| <= bound`.
    /// `half_width = None` picks `bound / 2`.
    Bounded { bound: f64, half_width: Option<f64> },
    /// Three-point law with `E[|Y|^p | x] = moment`.
    Heavy { order: f64, moment: f64 },
}

/// Signs and scale of a bump construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpConfig {
    pub h: f64,
    pub signs: Vec<i8>,
    pub beta: f64,
}

impl BumpConfig {
    pub fn new(h: f64, signs: Vec<i8>, beta: f64) -> Self {
        Self { h, signs, beta }
    }

    /// Number of active cubes.
    pub fn active(&self) -> usize {
        self.signs.len()
    }

    /// `C_T` certified for margin exponent `gamma <= 1/(dβ)`:
    /// `d · m · w^(d - γβ)`. The active count must respect
    /// `m <= C_M w^(γβ - d)` for a bounded `C_M`.
    pub fn margin_constant(&self, dim: usize, gamma: f64) -> Result<f64> {
        if gamma < 0.0 || gamma > 1.0 / (dim as f64 * self.beta) {
            return Err(Error::param("gamma", "must lie in [0, 1/(d beta)]"));
        }
        let w = CubePartition::new(dim, self.h)?.width();
        Ok(dim as f64 * self.active() as f64 * w.powf(dim as f64 - gamma * self.beta))
    }
}

#[derive(Clone)]
enum Shape {
    Trig { amplitude: f64, phase: f64 },
    Bump { partition: CubePartition, signs: Vec<i8>, beta: f64 },
    Probs(ProbsFn),
    Field { f: FieldFn, max_abs: f64 },
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Trig { amplitude, phase } => {
                f.debug_struct("Trig").field("amplitude", amplitude).field("phase", phase).finish()
            }
            Shape::Bump { partition, signs, beta } => f
                .debug_struct("Bump")
                .field("cells_per_axis", &partition.cells_per_axis())
                .field("signs", signs)
                .field("beta", beta)
                .finish(),
            Shape::Probs(_) => f.write_str("Probs(<fn>)"),
            Shape::Field { max_abs, .. } => f.debug_struct("Field").field("max_abs", max_abs).finish(),
        }
    }
}

impl Shape {
    fn theta(x: &[f64], phase: f64) -> f64 {
        2.0 * PI * x.iter().sum::<f64>() + phase
    }

    /// Signed field: `a·s(x)` or `η_v(x)`.
    fn field(&self, x: &[f64]) -> f64 {
        match self {
            Shape::Trig { amplitude, phase } => amplitude * Self::theta(x, *phase).sin(),
            Shape::Bump { partition, signs, beta } => {
                // only the containing cube can be non-zero; φ vanishes on faces
                let cell = match partition.cube_index(x) {
                    Ok(c) => c,
                    Err(_) => return 0.0,
                };
                if cell >= signs.len() {
                    return 0.0;
                }
                let w = partition.width();
                let center = partition.center(cell);
                let phi: f64 = x
                    .iter()
                    .zip(&center)
                    .map(|(xi, ci)| (1.0 - 2.0 * ((xi - ci) / w).abs()).max(0.0).powf(*beta))
                    .product();
                f64::from(signs[cell]) * phi * w.powf(*beta)
            }
            Shape::Field { f, .. } => f(x),
            Shape::Probs(_) => unreachable!("class-probability shapes have no signed field"),
        }
    }

    fn max_abs(&self) -> f64 {
        match self {
            Shape::Trig { amplitude, .. } => amplitude.abs(),
            Shape::Bump { partition, beta, .. } => partition.width().powf(*beta),
            Shape::Field { max_abs, .. } => *max_abs,
            Shape::Probs(_) => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum LabelLaw {
    Classes { classes: usize },
    Bounded { half_width: f64 },
    Heavy { peak: f64, order: f64, moment: f64 },
}

/// A samplable, evaluable joint law of `(X, Y)` with uniform features.
#[derive(Debug, Clone)]
pub struct Distribution {
    dim: usize,
    shape: Shape,
    law: LabelLaw,
    params: AssumptionParams,
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(Error::param("beta", format!("must lie in (0, 1], got {beta}")))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim >= 1 {
        Ok(())
    } else {
        Err(Error::param("dim", "must be >= 1"))
    }
}

/// Seeded `(amplitude fraction, phase)` pair, both from one stream.
fn seeded_shape(seed: u64) -> (f64, f64) {
    let mut r = rng::stream(seed, 7);
    let u: f64 = r.gen();
    (u, 2.0 * PI * r.gen::<f64>())
}

fn trig_holder(amp: f64, dim: usize, beta: f64) -> f64 {
    (2.0 * amp).powf(1.0 - beta) * (2.0 * PI * amp * (dim as f64).sqrt()).powf(beta)
}

/// Trigonometric classification family with a seed-selected amplitude in
/// `[0.1, 0.45]` and phase in `[0, 2π)`.
pub fn smooth_classification(dim: usize, classes: usize, beta: f64, seed: u64) -> Result<Distribution> {
    let (u, phase) = seeded_shape(seed);
    smooth_classification_with_amplitude(dim, classes, beta, 0.1 + 0.35 * u)?.with_phase(phase)
}

/// Trigonometric classification family with zero phase; `amplitude` must
/// lie in `(0, 1/2)`.
pub fn smooth_classification_with_amplitude(
    dim: usize,
    classes: usize,
    beta: f64,
    amplitude: f64,
) -> Result<Distribution> {
    check_dim(dim)?;
    check_beta(beta)?;
    if classes < 2 {
        return Err(Error::param("classes", "must be >= 2"));
    }
    if !(amplitude > 0.0 && amplitude < 0.5) {
        return Err(Error::param("amplitude", format!("must lie in (0, 1/2), got {amplitude}")));
    }
    let k = classes as f64;
    let mut margin_const = 0.0;
    for i in 0..classes {
        for j in i + 1..classes {
            margin_const += k / (4.0 * amplitude * (PI * (j - i) as f64 / k).sin().abs());
        }
    }
    let params = AssumptionParams {
        beta,
        holder_const: trig_holder(2.0 * amplitude / k, dim, beta),
        gamma: 1.0,
        margin_const,
        ..AssumptionParams::default()
    };
    Ok(Distribution {
        dim,
        shape: Shape::Trig { amplitude, phase: 0.0 },
        law: LabelLaw::Classes { classes },
        params,
    })
}

/// Binary bump construction: `P(Y = 2 | x) = (1 + η_v(x)) / 2`.
pub fn bump_classification(config: &BumpConfig, dim: usize) -> Result<Distribution> {
    check_dim(dim)?;
    check_beta(config.beta)?;
    let partition = CubePartition::new(dim, config.h)?;
    if config.h.powf(config.beta) >= 1.0 {
        return Err(Error::param("h", "h^beta must be < 1"));
    }
    if config.signs.len() > partition.num_cells() {
        return Err(Error::param(
            "signs",
            format!("{} active cubes exceed {} cells", config.signs.len(), partition.num_cells()),
        ));
    }
    if config.signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::param("signs", "entries must be +1 or -1"));
    }
    let d = dim as f64;
    let gamma = 1.0 / (d * config.beta);
    let params = AssumptionParams {
        beta: config.beta,
        holder_const: 2f64.powf(config.beta) * d.powf(1.0 - config.beta / 2.0),
        gamma,
        margin_const: config.margin_constant(dim, gamma)?.max(f64::MIN_POSITIVE),
        ..AssumptionParams::default()
    };
    Ok(Distribution {
        dim,
        shape: Shape::Bump { partition, signs: config.signs.clone(), beta: config.beta },
        law: LabelLaw::Classes { classes: 2 },
        params,
    })
}

/// Trigonometric regression family with a seed-selected amplitude and
/// phase.
///
/// Bounded noise draws the amplitude from `[0.1 T, 0.4 T]`; heavy noise
/// from `[0.1, 0.4]`.
pub fn smooth_regression(dim: usize, beta: f64, noise: RegressionNoise, seed: u64) -> Result<Distribution> {
    let scale = match noise {
        RegressionNoise::Bounded { bound, .. } => bound,
        RegressionNoise::Heavy { .. } => 1.0,
    };
    let (u, phase) = seeded_shape(seed);
    smooth_regression_with_amplitude(dim, beta, scale * (0.1 + 0.3 * u), noise)?.with_phase(phase)
}

/// Trigonometric regression family `η(x) = a·s(x)` with zero phase.
pub fn smooth_regression_with_amplitude(
    dim: usize,
    beta: f64,
    amplitude: f64,
    noise: RegressionNoise,
) -> Result<Distribution> {
    check_dim(dim)?;
    check_beta(beta)?;
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::param("amplitude", format!("must be > 0, got {amplitude}")));
    }
    let mut params = AssumptionParams {
        beta,
        holder_const: trig_holder(amplitude, dim, beta),
        ..AssumptionParams::default()
    };
    let law = match noise {
        RegressionNoise::Bounded { bound, half_width } => {
            let b = half_width.unwrap_or(bound / 2.0);
            if !(bound > 0.0 && b >= 0.0) {
                return Err(Error::param("bound", "bound must be > 0 and half width >= 0"));
            }
            if amplitude + b > bound {
                return Err(Error::param(
                    "amplitude",
                    format!("amplitude {amplitude} + half width {b} exceeds label bound {bound}"),
                ));
            }
            params.label_bound = bound;
            LabelLaw::Bounded { half_width: b }
        }
        RegressionNoise::Heavy { order, moment } => {
            if !(order >= 2.0 && order.is_finite() && moment > 0.0 && moment.is_finite()) {
                return Err(Error::param("order", "need order >= 2 and moment > 0"));
            }
            let peak = (moment / amplitude).powf(1.0 / (order - 1.0));
            if moment / peak.powf(order) > 1.0 {
                return Err(Error::param(
                    "amplitude",
                    format!("three-point law invalid: M_p / T0^p = {} > 1", moment / peak.powf(order)),
                ));
            }
            params.moment_order = order;
            params.moment_bound = moment;
            params.label_bound = peak;
            LabelLaw::Heavy { peak, order, moment }
        }
    };
    Ok(Distribution { dim, shape: Shape::Trig { amplitude, phase: 0.0 }, law, params })
}

impl Distribution {
    /// Classification law from an arbitrary probability map. The caller
    /// vouches for `params` and for `Σ_j η_j = 1`.
    pub fn custom_classification(
        dim: usize,
        classes: usize,
        probs: ProbsFn,
        params: AssumptionParams,
    ) -> Result<Self> {
        check_dim(dim)?;
        if classes < 2 {
            return Err(Error::param("classes", "must be >= 2"));
        }
        Ok(Self { dim, shape: Shape::Probs(probs), law: LabelLaw::Classes { classes }, params })
    }

    /// Bounded-noise regression law `Y = η(x) + Uniform[-b, b]` from an
    /// arbitrary `η` with `sup |η| <= max_abs`.
    pub fn custom_regression(
        dim: usize,
        eta: FieldFn,
        max_abs: f64,
        half_width: f64,
        params: AssumptionParams,
    ) -> Result<Self> {
        check_dim(dim)?;
        if !(half_width >= 0.0 && max_abs >= 0.0) {
            return Err(Error::param("half_width", "must be >= 0"));
        }
        let params = AssumptionParams { label_bound: params.label_bound.max(max_abs + half_width), ..params };
        Ok(Self {
            dim,
            shape: Shape::Field { f: eta, max_abs },
            law: LabelLaw::Bounded { half_width },
            params,
        })
    }

    /// Replaces the phase `φ` of a trigonometric law. Smoothness and margin
    /// constants do not depend on `φ`.
    pub fn with_phase(mut self, phase: f64) -> Result<Self> {
        if !phase.is_finite() {
            return Err(Error::param("phase", "must be finite"));
        }
        match &mut self.shape {
            Shape::Trig { phase: slot, .. } => {
                *slot = phase;
                Ok(self)
            }
            _ => Err(Error::param("phase", "only trigonometric laws have a phase")),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &AssumptionParams {
        &self.params
    }

    pub fn task(&self) -> TaskKind {
        match self.law {
            LabelLaw::Classes { classes } => TaskKind::Classification { classes },
            _ => TaskKind::Regression,
        }
    }

    pub fn classes(&self) -> Option<usize> {
        match self.law {
            LabelLaw::Classes { classes } => Some(classes),
            _ => None,
        }
    }

    /// Largest `|η|` (regression) or largest field deviation (classes).
    pub fn max_abs_field(&self) -> f64 {
        self.shape.max_abs()
    }

    /// Peak `T0` of the three-point heavy law.
    pub fn heavy_peak(&self) -> Option<f64> {
        match self.law {
            LabelLaw::Heavy { peak, .. } => Some(peak),
            _ => None,
        }
    }

    /// Writes `η_1..η_K` at `x` into `out`.
    pub fn class_probs_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        let classes = self
            .classes()
            .ok_or_else(|| Error::TaskMismatch("class probabilities of a regression law".into()))?;
        if out.len() != classes {
            return Err(Error::DimensionMismatch { expected: classes, actual: out.len() });
        }
        match &self.shape {
            Shape::Trig { amplitude, phase } => {
                let k = classes as f64;
                let theta = Shape::theta(x, *phase);
                for (j, slot) in out.iter_mut().enumerate() {
                    // j is 0-based here, class j+1
                    let shift = 2.0 * PI * (j as f64 - 1.0) / k;
                    *slot = 1.0 / k + 2.0 * amplitude / k * (theta + shift).sin();
                }
            }
            Shape::Bump { .. } => {
                let v = self.shape.field(x);
                out[0] = (1.0 - v) / 2.0;
                out[1] = (1.0 + v) / 2.0;
            }
            Shape::Probs(f) => f(x, out),
            Shape::Field { .. } => unreachable!("regression shape under a class law"),
        }
        Ok(())
    }

    pub fn class_probs(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.classes().unwrap_or(0)];
        self.class_probs_into(x, &mut out)?;
        Ok(out)
    }

    /// Bayes class (1-based), smallest index on ties.
    pub fn bayes_class(&self, x: &[f64]) -> Result<usize> {
        let probs = self.class_probs(x)?;
        Ok(argmax_first(&probs) + 1)
    }

    /// `η(x) = E[Y | x]` for regression laws.
    pub fn regression_value(&self, x: &[f64]) -> Result<f64> {
        match self.law {
            LabelLaw::Classes { .. } => {
                Err(Error::TaskMismatch("regression function of a classification law".into()))
            }
            _ => Ok(self.shape.field(x)),
        }
    }

    /// `Var(Y | x)` for regression laws.
    pub fn conditional_variance(&self, x: &[f64]) -> Result<f64> {
        let eta = self.regression_value(x)?;
        Ok(match self.law {
            LabelLaw::Bounded { half_width } => half_width * half_width / 3.0,
            LabelLaw::Heavy { peak, order, moment } => {
                moment * peak.powf(2.0 - order) - eta * eta
            }
            LabelLaw::Classes { .. } => unreachable!(),
        })
    }

    /// Exact `E[clip(Y, t) | x]`.
    pub fn clipped_mean(&self, x: &[f64], t: f64) -> Result<f64> {
        let eta = self.regression_value(x)?;
        Ok(match self.law {
            LabelLaw::Heavy { peak, .. } => peak.min(t) * eta / peak,
            LabelLaw::Bounded { half_width } => {
                // E[clip(eta + U, t)] for U uniform on [-b, b]
                let (lo, hi) = (eta - half_width, eta + half_width);
                if half_width == 0.0 {
                    eta.clamp(-t, t)
                } else {
                    let clip_integral = |a: f64, b: f64| -> f64 {
                        // ∫_a^b clamp(y, -t, t) dy
                        let seg = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| if b > a { f(b) - f(a) } else { 0.0 };
                        seg(a, b.min(-t), &|y| -t * y)
                            + seg(a.max(-t), b.min(t), &|y| y * y / 2.0)
                            + seg(a.max(t), b, &|y| t * y)
                    };
                    clip_integral(lo, hi) / (hi - lo)
                }
            }
            LabelLaw::Classes { .. } => unreachable!(),
        })
    }

    /// Draws `Y` given `x`.
    pub fn sample_label<R: Rng + ?Sized>(&self, x: &[f64], rng: &mut R) -> Label {
        match self.law {
            LabelLaw::Classes { classes } => {
                let mut probs = vec![0.0; classes];
                self.class_probs_into(x, &mut probs).expect("class law");
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (j, p) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        return Label::Class(j + 1);
                    }
                }
                Label::Class(classes)
            }
            LabelLaw::Bounded { half_width } => {
                let u: f64 = rng.gen();
                Label::Value(self.shape.field(x) + half_width * (2.0 * u - 1.0))
            }
            LabelLaw::Heavy { peak, order, moment } => {
                let eta = self.shape.field(x);
                let tail = moment / peak.powf(order);
                let p_plus = 0.5 * (tail + eta / peak);
                let p_minus = 0.5 * (tail - eta / peak);
                let u: f64 = rng.gen();
                Label::Value(if u < p_plus {
                    peak
                } else if u < p_plus + p_minus {
                    -peak
                } else {
                    0.0
                })
            }
        }
    }
}

pub(crate) fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = j;
        }
    }
    best
}

/// `n` i.i.d. samples with uniform features; deterministic given `seed`.
pub fn sample_dataset(dist: &Distribution, n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::param("n", "must be >= 1"));
    }
    let mut r = rng::stream(seed, 0);
    let dim = dist.dim;
    let mut coords = Vec::with_capacity(n * dim);
    let mut x = vec![0.0; dim];
    let mut labels = match dist.task() {
        TaskKind::Classification { .. } => Labels::Classes(Vec::with_capacity(n)),
        TaskKind::Regression => Labels::Values(Vec::with_capacity(n)),
    };
    for _ in 0..n {
        for xi in x.iter_mut() {
            *xi = r.gen::<f64>();
        }
        coords.extend_from_slice(&x);
        match (dist.sample_label(&x, &mut r), &mut labels) {
            (Label::Class(c), Labels::Classes(v)) => v.push(c),
            (Label::Value(y), Labels::Values(v)) => v.push(y),
            _ => unreachable!("label law matches task"),
        }
    }
    Dataset::from_parts(dist.task(), Points::new(dim, coords)?, labels)
}

/// Bayes risk: `∫ (1 - η*)` for classification, `∫ Var(Y|x)` for
/// regression. Grid rule for `d <= 3`, Monte Carlo above.
pub fn bayes_risk(dist: &Distribution) -> Result<Quadrature> {
    let rule = Rule::default_for(dist.dim);
    match dist.task() {
        TaskKind::Classification { classes } => {
            let mut probs = vec![0.0; classes];
            Ok(quadrature::integrate(dist.dim, rule, |x| {
                dist.class_probs_into(x, &mut probs).expect("class law");
                1.0 - probs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            }))
        }
        TaskKind::Regression => Ok(quadrature::integrate(dist.dim, rule, |x| {
            dist.conditional_variance(x).expect("regression law")
        })),
    }
}
