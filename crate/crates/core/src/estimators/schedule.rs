//! Bandwidth, neighbour-count and clipping-radius schedules.
//!
//! Each schedule is the rate-optimal order of its estimator times a
//! constant multiplier `c_mult`; only the exponents matter for rate fits.

use crate::domain::PrivacyBudget;
use crate::error::{Error, Result};

fn check_common(n: usize, beta: f64, dim: usize, c_mult: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::param("n", "must be >= 1"));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::param("beta", format!("must lie in (0, 1], got {beta}")));
    }
    if dim < 1 {
        return Err(Error::param("dim", "must be >= 1"));
    }
    if !(c_mult > 0.0 && c_mult.is_finite()) {
        return Err(Error::param("c_mult", format!("must be > 0, got {c_mult}")));
    }
    Ok(())
}

fn check_classes(classes: usize) -> Result<f64> {
    if classes < 2 {
        return Err(Error::param("classes", "must be >= 2"));
    }
    Ok((classes as f64).ln())
}

fn check_order(p: f64) -> Result<()> {
    if p >= 2.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::param("p", format!("moment order must be >= 2, got {p}")))
    }
}

fn clamp_side(h: f64) -> f64 {
    h.min(1.0)
}

/// `c · (N (ε² ∧ 1) / ln K)^(-1/(2β+d))`, clamped to `(0, 1]`.
pub fn h_local_cls(n: usize, budget: PrivacyBudget, classes: usize, beta: f64, dim: usize, c_mult: f64) -> Result<f64> {
    check_common(n, beta, dim, c_mult)?;
    let ln_k = check_classes(classes)?;
    let eff = budget.epsilon().powi(2).min(1.0);
    let d = dim as f64;
    Ok(clamp_side(c_mult * (n as f64 * eff / ln_k).powf(-1.0 / (2.0 * beta + d))))
}

/// `c · [(ln K / (εN))^(1/(β+d)) + (ln K / N)^(1/(2β+d))]`, clamped to `(0, 1]`.
pub fn h_central_cls(n: usize, budget: PrivacyBudget, classes: usize, beta: f64, dim: usize, c_mult: f64) -> Result<f64> {
    check_common(n, beta, dim, c_mult)?;
    let ln_k = check_classes(classes)?;
    let (n, d, eps) = (n as f64, dim as f64, budget.epsilon());
    let private = (ln_k / (eps * n)).powf(1.0 / (beta + d));
    let statistical = (ln_k / n).powf(1.0 / (2.0 * beta + d));
    Ok(clamp_side(c_mult * (private + statistical)))
}

/// Neighbour count of the local kNN regressor, rounded and clamped to `[1, N]`.
///
/// Bounded labels: `c · N^(2β/(d+2β)) (ε ∧ 1)^(-2d/(d+2β))`.
/// Heavy tails of order `p`: `c · (N (ε ∧ 1)²)^(2pβ/(2pβ+d(p-1))) ∨ N^(2β/(2β+d))`.
pub fn k_local_reg(
    n: usize,
    budget: PrivacyBudget,
    beta: f64,
    dim: usize,
    heavy: Option<f64>,
    c_mult: f64,
) -> Result<usize> {
    check_common(n, beta, dim, c_mult)?;
    let (nf, d) = (n as f64, dim as f64);
    let eps = budget.epsilon().min(1.0);
    let raw = match heavy {
        None => nf.powf(2.0 * beta / (d + 2.0 * beta)) * eps.powf(-2.0 * d / (d + 2.0 * beta)),
        Some(p) => {
            check_order(p)?;
            let private = (nf * eps * eps).powf(2.0 * p * beta / (2.0 * p * beta + d * (p - 1.0)));
            private.max(nf.powf(2.0 * beta / (2.0 * beta + d)))
        }
    };
    Ok(((c_mult * raw).round() as usize).clamp(1, n))
}

/// Arguments of the clipping-radius schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClipSchedule {
    /// `T ~ (k (ε ∧ 1)²)^(1/(2p))` for the local kNN regressor.
    Local { k: usize, budget: PrivacyBudget, p: f64 },
    /// `T ~ (ε N h^d)^(1/p)` for the central cube regressor.
    Central { budget: PrivacyBudget, n: usize, h: f64, dim: usize, p: f64 },
}

/// Clipping radius; infinite when the budget is infinite in the central case.
pub fn clip_radius(kind: ClipSchedule, c_mult: f64) -> Result<f64> {
    if !(c_mult > 0.0 && c_mult.is_finite()) {
        return Err(Error::param("c_mult", format!("must be > 0, got {c_mult}")));
    }
    let t = match kind {
        ClipSchedule::Local { k, budget, p } => {
            check_order(p)?;
            if k < 1 {
                return Err(Error::param("k", "must be >= 1"));
            }
            let eps = budget.epsilon().min(1.0);
            (k as f64 * eps * eps).powf(1.0 / (2.0 * p))
        }
        ClipSchedule::Central { budget, n, h, dim, p } => {
            check_order(p)?;
            if n < 1 || dim < 1 || !(h > 0.0 && h <= 1.0) {
                return Err(Error::param("h", "need n >= 1, dim >= 1 and h in (0, 1]"));
            }
            (budget.epsilon() * n as f64 * h.powi(dim as i32)).powf(1.0 / p)
        }
    };
    Ok(c_mult * t)
}

/// Cube side of the central regressor, clamped to `(0, 1]`.
///
/// Bounded labels: `c · [N^(-1/(2β+d)) + (εN)^(-1/(d+β))]`.
/// Heavy tails: `c · [N^(-1/(2β+d)) + (εN)^(-1/(pβ+d(p-1)))]`.
pub fn h_central_reg(
    n: usize,
    budget: PrivacyBudget,
    beta: f64,
    dim: usize,
    heavy: Option<f64>,
    c_mult: f64,
) -> Result<f64> {
    check_common(n, beta, dim, c_mult)?;
    let (nf, d, eps) = (n as f64, dim as f64, budget.epsilon());
    let private_exp = match heavy {
        None => d + beta,
        Some(p) => {
            check_order(p)?;
            p * beta + d * (p - 1.0)
        }
    };
    let h = nf.powf(-1.0 / (2.0 * beta + d)) + (eps * nf).powf(-1.0 / private_exp);
    Ok(clamp_side(c_mult * h))
}
