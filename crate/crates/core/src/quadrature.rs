//! Midpoint-grid and Monte Carlo integration over `[0, 1]^d` against the
//! uniform density.

use crate::rng;
use rand::Rng;

/// Grid resolution per axis used by default for `d = 1, 2, 3`.
pub fn default_grid(dim: usize) -> Option<usize> {
    match dim {
        1 => Some(256),
        2 => Some(128),
        3 => Some(64),
        _ => None,
    }
}

/// Finer grid for discontinuous integrands such as classification losses of
/// piecewise-constant models, where thin misclassified slivers matter.
pub fn fine_grid(dim: usize) -> Option<usize> {
    match dim {
        1 => Some(65_536),
        2 => Some(512),
        3 => Some(128),
        _ => None,
    }
}

/// Monte Carlo point count used when no grid applies.
pub const DEFAULT_MC_POINTS: usize = 100_000;
const MC_SEED: u64 = 0x0005_eed0_f1ab_e1d9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Grid,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Grid => "grid",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

/// An integral estimate. `std_error` is zero for grid rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
    pub points: usize,
}

/// How to integrate: a midpoint grid with `n` points per axis, or Monte
/// Carlo with `n` points from a fixed seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Grid(usize),
    MonteCarlo { points: usize, seed: u64 },
}

impl Rule {
    /// Grid for `d <= 3`, Monte Carlo with 10^5 points above.
    pub fn default_for(dim: usize) -> Rule {
        match default_grid(dim) {
            Some(n) => Rule::Grid(n),
            None => Rule::MonteCarlo { points: DEFAULT_MC_POINTS, seed: MC_SEED },
        }
    }

    /// [`fine_grid`] for `d <= 3`, Monte Carlo with 10^5 points above.
    pub fn fine_for(dim: usize) -> Rule {
        match fine_grid(dim) {
            Some(n) => Rule::Grid(n),
            None => Rule::MonteCarlo { points: DEFAULT_MC_POINTS, seed: MC_SEED },
        }
    }
}

/// Integrates `f` against the uniform density on `[0, 1]^dim`.
pub fn integrate<F>(dim: usize, rule: Rule, mut f: F) -> Quadrature
where
    F: FnMut(&[f64]) -> f64,
{
    let mut x = vec![0.0; dim];
    match rule {
        Rule::Grid(n) => {
            let total = n.pow(dim as u32);
            let step = 1.0 / n as f64;
            let mut sum = 0.0;
            let mut idx = vec![0usize; dim];
            for _ in 0..total {
                for (xi, &i) in x.iter_mut().zip(&idx) {
                    *xi = (i as f64 + 0.5) * step;
                }
                sum += f(&x);
                // odometer increment, last axis fastest
                for slot in idx.iter_mut().rev() {
                    *slot += 1;
                    if *slot < n {
                        break;
                    }
                    *slot = 0;
                }
            }
            Quadrature { value: sum / total as f64, std_error: 0.0, method: Method::Grid, points: total }
        }
        Rule::MonteCarlo { points, seed } => {
            let mut r = rng::stream(seed, 0);
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..points {
                for xi in x.iter_mut() {
                    *xi = r.gen::<f64>();
                }
                let v = f(&x);
                sum += v;
                sum_sq += v * v;
            }
            let n = points as f64;
            let mean = sum / n;
            let var = if points > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
            Quadrature { value: mean, std_error: (var / n).sqrt(), method: Method::MonteCarlo, points }
        }
    }
}
