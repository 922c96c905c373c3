//! Random index RI(n): the mean consistency index of random reciprocal matrices.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{principal_eigenvector, PriorityError, SolverOptions};
use crate::matrix::DenseMatrix;

/// Saaty's published table, indexed by order (entries 0..=10).
pub const SAATY_RANDOM_INDEX: [f64; 11] = [
    0.0, 0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49,
];

pub const MIN_MONTE_CARLO_SAMPLES: usize = 10_000;
const DEFAULT_SEED: u64 = 0x00da_7a5e_ed00_0001;
const BLOCK: usize = 250;

/// Where RI(n) comes from: the published table, with an optional seeded
/// Monte-Carlo estimate for orders past its end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomIndex {
    pub monte_carlo: bool,
    pub samples: usize,
    pub seed: u64,
}

impl Default for RandomIndex {
    fn default() -> Self {
        Self {
            monte_carlo: true,
            samples: MIN_MONTE_CARLO_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

impl RandomIndex {
    pub fn table_only() -> Self {
        Self {
            monte_carlo: false,
            ..Self::default()
        }
    }

    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn value(&self, order: usize) -> Result<f64, PriorityError> {
        if let Some(&ri) = SAATY_RANDOM_INDEX.get(order) {
            return Ok(ri);
        }
        if !self.monte_carlo {
            return Err(PriorityError::UnsupportedOrder { order });
        }
        let samples = self.samples.max(MIN_MONTE_CARLO_SAMPLES);
        Ok(cached_estimate(order, samples, self.seed))
    }
}

/// (order, samples, seed) to estimate.
type EstimateCache = Mutex<HashMap<(usize, usize, u64), f64>>;

fn cached_estimate(order: usize, samples: usize, seed: u64) -> f64 {
    static CACHE: OnceLock<EstimateCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().unwrap().get(&(order, samples, seed)) {
        return v;
    }
    let v = monte_carlo_random_index(order, samples, seed);
    cache.lock().unwrap().insert((order, samples, seed), v);
    v
}

const SCALE: [f64; 17] = [
    1.0 / 9.0,
    1.0 / 8.0,
    1.0 / 7.0,
    1.0 / 6.0,
    1.0 / 5.0,
    1.0 / 4.0,
    1.0 / 3.0,
    1.0 / 2.0,
    1.0,
    2.0,
    3.0,
    4.0,
    5.0,
    6.0,
    7.0,
    8.0,
    9.0,
];

/// Mean CI over `samples` random reciprocal matrices with entries drawn
/// uniformly from the 17 scale values. Deterministic for a given seed:
/// samples are split into fixed blocks, each with its own ChaCha stream.
pub fn monte_carlo_random_index(order: usize, samples: usize, seed: u64) -> f64 {
    if order <= 2 {
        return 0.0;
    }
    let blocks = samples.div_ceil(BLOCK);
    let options = SolverOptions {
        tolerance: 1e-10,
        max_iterations: 100_000,
    };
    let sums: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((order as u64) << 32) | block as u64);
            let count = BLOCK.min(samples - block * BLOCK);
            let mut rows = vec![vec![1.0; order]; order];
            let mut sum = 0.0;
            for _ in 0..count {
                #[allow(clippy::needless_range_loop)]
                for i in 0..order {
                    for j in i + 1..order {
                        let v = SCALE[rng.random_range(0..SCALE.len())];
                        rows[i][j] = v;
                        rows[j][i] = 1.0 / v;
                    }
                }
                let m = DenseMatrix::from_rows(&rows);
                let r = principal_eigenvector(&m, &options)
                    .expect("positive random matrices converge");
                sum += (r.lambda_max - order as f64) / (order as f64 - 1.0);
            }
            sum
        })
        .collect();
    sums.iter().sum::<f64>() / samples as f64
}
