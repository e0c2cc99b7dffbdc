//! Nonparametric learning under label differential privacy.
//!
//! Estimators for classification and regression when only labels are
//! private, in the local model (labels randomized before collection), the
//! central model (a trusted curator trains a private model) and full DP.
//! Synthetic distributions with known regression functions make the excess
//! risk exactly computable, so convergence rates can be measured.

// `!(x > 0.0)` checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domain;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod mechanisms;
pub mod quadrature;
pub mod risk;
pub mod rng;
pub mod synthdata;

pub use domain::{
    AssumptionParams, CubePartition, Dataset, Label, LabeledSample, Labels, Points, PrivacyBudget,
    TaskKind,
};
pub use error::{Error, Result};
