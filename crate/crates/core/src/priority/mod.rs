//! Priority vectors from comparison matrices, and judgment consistency.
//!
//! The canonical priority vector is the principal right eigenvector of the
//! matrix, found by power iteration from the uniform vector. Consistency is
//! scored with the consistency index `CI = (λmax − n)/(n − 1)` and the ratio
//! `CR = CI / RI(n)` against a 10% acceptance threshold.

mod random_index;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::PairwiseMatrix;

pub use random_index::{monte_carlo_random_index, RandomIndex, SAATY_RANDOM_INDEX};

/// Judgments are acceptable when `cr` is strictly below this value.
pub const CONSISTENCY_THRESHOLD: f64 = 0.10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PriorityError {
    #[error("power iteration did not converge after {iterations} iterations (step {delta:e}, residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        delta: f64,
        residual: f64,
    },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("matrix has order 0")]
    EmptyMatrix,
    #[error("matrix entry ({row}, {col}) is not a positive finite number")]
    NonPositiveEntry { row: usize, col: usize },
    #[error("no random index for order {order}; enable the Monte-Carlo estimator")]
    UnsupportedOrder { order: usize },
    #[error("priority vector has {got} entries but the matrix has order {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl PriorityError {
    /// Stable identifier of the variant, used in machine-readable error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Self::NoConvergence { .. } => "NoConvergence",
            Self::InvalidTolerance(..) => "InvalidTolerance",
            Self::EmptyMatrix => "EmptyMatrix",
            Self::NonPositiveEntry { .. } => "NonPositiveEntry",
            Self::UnsupportedOrder { .. } => "UnsupportedOrder",
            Self::DimensionMismatch { .. } => "DimensionMismatch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorityResult {
    pub priorities: Vec<f64>,
    pub lambda_max: f64,
    pub iterations: usize,
    /// `‖Mw − λw‖₁` at the returned vector.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub order: usize,
    pub ci: f64,
    pub ri: f64,
    pub cr: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Principal eigenvector by power iteration, L1-normalized every step.
///
/// Stops when successive iterates differ by less than `tolerance` in L1.
/// `lambda_max` is the Rayleigh-style estimate `wᵀ(Mw)/wᵀw`.
pub fn principal_eigenvector<M: PairwiseMatrix + ?Sized>(
    matrix: &M,
    options: &SolverOptions,
) -> Result<PriorityResult, PriorityError> {
    let n = matrix.order();
    if n == 0 {
        return Err(PriorityError::EmptyMatrix);
    }
    if !(options.tolerance > 0.0 && options.tolerance.is_finite()) {
        return Err(PriorityError::InvalidTolerance(options.tolerance));
    }
    let dense = matrix.to_dense();
    for i in 0..n {
        for (j, &a) in dense.row(i).iter().enumerate() {
            if !(a > 0.0 && a.is_finite()) {
                return Err(PriorityError::NonPositiveEntry { row: i, col: j });
            }
        }
    }

    let mut w = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut delta = f64::INFINITY;
    while iterations < options.max_iterations {
        multiply(&dense, &w, &mut next);
        let norm: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= norm);
        delta = w.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut w, &mut next);
        iterations += 1;
        if delta < options.tolerance {
            break;
        }
    }

    let mut mw = vec![0.0; n];
    multiply(&dense, &w, &mut mw);
    let wtw: f64 = w.iter().map(|x| x * x).sum();
    let lambda_max = w.iter().zip(&mw).map(|(a, b)| a * b).sum::<f64>() / wtw;
    let residual = mw
        .iter()
        .zip(&w)
        .map(|(m, x)| (m - lambda_max * x).abs())
        .sum();

    if delta >= options.tolerance && residual > options.tolerance * lambda_max {
        return Err(PriorityError::NoConvergence {
            iterations,
            delta,
            residual,
        });
    }

    Ok(PriorityResult {
        priorities: w,
        lambda_max,
        iterations,
        residual,
    })
}

fn multiply(m: &crate::matrix::DenseMatrix, v: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = m.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

/// Consistency index and ratio for a solved matrix.
pub fn consistency<M: PairwiseMatrix + ?Sized>(
    matrix: &M,
    result: &PriorityResult,
    random_index: &RandomIndex,
) -> Result<ConsistencyReport, PriorityError> {
    let n = matrix.order();
    if result.priorities.len() != n {
        return Err(PriorityError::DimensionMismatch {
            expected: n,
            got: result.priorities.len(),
        });
    }
    consistency_for(n, result.lambda_max, random_index)
}

pub fn consistency_for(
    order: usize,
    lambda_max: f64,
    random_index: &RandomIndex,
) -> Result<ConsistencyReport, PriorityError> {
    if order <= 2 {
        return Ok(ConsistencyReport {
            order,
            ci: 0.0,
            ri: 0.0,
            cr: 0.0,
            threshold: CONSISTENCY_THRESHOLD,
            pass: true,
        });
    }
    // λmax ≥ n in exact arithmetic; clamp the rounding noise.
    let ci = ((lambda_max - order as f64) / (order as f64 - 1.0)).max(0.0);
    let ri = random_index.value(order)?;
    let cr = ci / ri;
    Ok(ConsistencyReport {
        order,
        ci,
        ri,
        cr,
        threshold: CONSISTENCY_THRESHOLD,
        pass: cr < CONSISTENCY_THRESHOLD,
    })
}

/// Row geometric mean priorities. Cross-check only; the eigenvector is canonical.
pub fn row_geometric_mean<M: PairwiseMatrix + ?Sized>(matrix: &M) -> Vec<f64> {
    let n = matrix.order();
    let means: Vec<f64> = (0..n)
        .map(|i| {
            let log_sum: f64 = (0..n).map(|j| matrix.entry(i, j).ln()).sum();
            (log_sum / n as f64).exp()
        })
        .collect();
    let total: f64 = means.iter().sum();
    means.into_iter().map(|m| m / total).collect()
}
