//! Reciprocal comparison matrices built from scale judgments.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::scale::Intensity;
use super::ModelError;
use crate::matrix::PairwiseMatrix;

/// How missing pairs are treated when a matrix is built.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completion {
    /// Every unordered pair must be judged.
    #[default]
    Strict,
    /// Missing pairs are filled with the geometric mean over connecting
    /// paths `i -> k -> j`, and the matrix is marked imputed.
    Lenient,
}

/// Upper-triangle cell. The lower triangle is always derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Judged(Intensity),
    /// Natural log of the imputed value.
    Imputed(f64),
}

/// A positive reciprocal matrix comparing the children of one context node.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonMatrix {
    context: String,
    labels: Vec<String>,
    upper: Vec<Cell>,
    imputed: bool,
}

fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl ComparisonMatrix {
    /// Places each judgment `(row, col, intensity)` and auto-fills reciprocals.
    ///
    /// A pair may be repeated only if both statements agree (`(i, j, x)` and
    /// `(j, i, 1/x)` are the same judgment). The list order does not matter.
    pub fn from_judgments(
        context: impl Into<String>,
        labels: Vec<String>,
        judgments: &[(usize, usize, Intensity)],
        completion: Completion,
    ) -> Result<Self, ModelError> {
        let context = context.into();
        let n = labels.len();
        if n < 2 {
            return Err(ModelError::OrderTooSmall { context, order: n });
        }
        let mut slots: Vec<Option<Intensity>> = vec![None; n * (n - 1) / 2];
        for &(row, col, intensity) in judgments {
            if row >= n || col >= n {
                return Err(ModelError::IndexOutOfRange {
                    context,
                    index: row.max(col),
                    order: n,
                });
            }
            if row == col {
                return Err(ModelError::SelfComparison {
                    context,
                    node: labels[row].clone(),
                });
            }
            let (i, j, x) = if row < col {
                (row, col, intensity)
            } else {
                (col, row, intensity.reciprocal())
            };
            let slot = &mut slots[tri_index(n, i, j)];
            match slot {
                Some(existing) if *existing != x => {
                    return Err(ModelError::ConflictingJudgment {
                        context,
                        row: labels[i].clone(),
                        col: labels[j].clone(),
                    });
                }
                _ => *slot = Some(x),
            }
        }

        let missing = slots.iter().any(Option::is_none);
        if !missing {
            let upper = slots.into_iter().map(|s| Cell::Judged(s.unwrap())).collect();
            return Ok(Self {
                context,
                labels,
                upper,
                imputed: false,
            });
        }
        match completion {
            Completion::Strict => {
                let (i, j) = first_missing(n, &slots).unwrap();
                Err(ModelError::MissingPair {
                    context,
                    row: labels[i].clone(),
                    col: labels[j].clone(),
                })
            }
            Completion::Lenient => {
                let upper = impute(n, &slots).map_err(|(i, j)| ModelError::MissingPair {
                    context: context.clone(),
                    row: labels[i].clone(),
                    col: labels[j].clone(),
                })?;
                Ok(Self {
                    context,
                    labels,
                    upper,
                    imputed: true,
                })
            }
        }
    }

    pub fn context(&self) -> &str {
        &self.context
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_imputed(&self) -> bool {
        self.imputed
    }

    /// The judged intensity at `(row, col)`; `None` on the diagonal and for imputed cells.
    pub fn intensity(&self, row: usize, col: usize) -> Option<Intensity> {
        let n = self.labels.len();
        if row == col || row >= n || col >= n {
            return None;
        }
        let (i, j, flip) = if row < col {
            (row, col, false)
        } else {
            (col, row, true)
        };
        match self.upper[tri_index(n, i, j)] {
            Cell::Judged(x) if flip => Some(x.reciprocal()),
            Cell::Judged(x) => Some(x),
            Cell::Imputed(_) => None,
        }
    }

    /// Display form of an entry: `"1"`, `"9"`, `"1/9"`, or a decimal for imputed cells.
    pub fn display_entry(&self, row: usize, col: usize) -> String {
        if row == col {
            return "1".to_string();
        }
        match self.intensity(row, col) {
            Some(x) => x.to_string(),
            None => format!("~{:.3}", self.entry(row, col)),
        }
    }
}

impl PairwiseMatrix for ComparisonMatrix {
    fn order(&self) -> usize {
        self.labels.len()
    }

    fn entry(&self, row: usize, col: usize) -> f64 {
        let n = self.labels.len();
        if row == col {
            return 1.0;
        }
        let (i, j, flip) = if row < col {
            (row, col, false)
        } else {
            (col, row, true)
        };
        match self.upper[tri_index(n, i, j)] {
            Cell::Judged(x) if flip => x.reciprocal().value(),
            Cell::Judged(x) => x.value(),
            Cell::Imputed(ln) if flip => (-ln).exp(),
            Cell::Imputed(ln) => ln.exp(),
        }
    }
}

fn first_missing(n: usize, slots: &[Option<Intensity>]) -> Option<(usize, usize)> {
    for i in 0..n {
        for j in i + 1..n {
            if slots[tri_index(n, i, j)].is_none() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Fills missing pairs in rounds. Each round only uses values known at the
/// start of the round, so the result does not depend on iteration order.
fn impute(n: usize, slots: &[Option<Intensity>]) -> Result<Vec<Cell>, (usize, usize)> {
    // log-values for the full antisymmetric matrix
    let mut known: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(x) = slots[tri_index(n, i, j)] {
                let l = x.value().ln();
                known.insert((i, j), l);
                known.insert((j, i), -l);
            }
        }
    }
    let mut imputed: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    loop {
        let mut round = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if known.contains_key(&(i, j)) {
                    continue;
                }
                let mut sum = 0.0;
                let mut count = 0usize;
                for k in 0..n {
                    if let (Some(a), Some(b)) = (known.get(&(i, k)), known.get(&(k, j))) {
                        sum += a + b;
                        count += 1;
                    }
                }
                if count > 0 {
                    round.push(((i, j), sum / count as f64));
                }
            }
        }
        if round.is_empty() {
            break;
        }
        for ((i, j), l) in round {
            known.insert((i, j), l);
            known.insert((j, i), -l);
            imputed.insert((i, j), l);
        }
    }

    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            match slots[tri_index(n, i, j)] {
                Some(x) => upper.push(Cell::Judged(x)),
                None => match imputed.get(&(i, j)) {
                    Some(&l) => upper.push(Cell::Imputed(l)),
                    None => return Err((i, j)),
                },
            }
        }
    }
    Ok(upper)
}
