//! Square positive matrices as seen by the priority solver.

/// Read access to a square pairwise comparison matrix.
pub trait PairwiseMatrix {
    fn order(&self) -> usize;
    fn entry(&self, row: usize, col: usize) -> f64;

    fn to_dense(&self) -> DenseMatrix {
        let n = self.order();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.entry(i, j));
            }
        }
        DenseMatrix { order: n, data }
    }
}

/// Row-major real matrix. Used for matrices that are not built from
/// scale judgments, e.g. the fully consistent `w_i / w_j` construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    order: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let order = rows.len();
        let mut data = Vec::with_capacity(order * order);
        for row in rows {
            assert_eq!(row.len(), order, "matrix must be square");
            data.extend_from_slice(row);
        }
        Self { order, data }
    }

    /// The consistent matrix `M[i][j] = w[i] / w[j]`.
    pub fn from_weights(weights: &[f64]) -> Self {
        let order = weights.len();
        let mut data = Vec::with_capacity(order * order);
        for wi in weights {
            for wj in weights {
                data.push(wi / wj);
            }
        }
        Self { order, data }
    }

    /// Applies a permutation: row/col `k` of the result is row/col `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.order;
        assert_eq!(perm.len(), n);
        let mut data = Vec::with_capacity(n * n);
        for &pi in perm {
            for &pj in perm {
                data.push(self.data[pi * n + pj]);
            }
        }
        Self { order: n, data }
    }

    pub fn transposed(&self) -> Self {
        let n = self.order;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.data[j * n + i]);
            }
        }
        Self { order: n, data }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }
}

impl PairwiseMatrix for DenseMatrix {
    fn order(&self) -> usize {
        self.order
    }

    fn entry(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.order + col]
    }

    fn to_dense(&self) -> DenseMatrix {
        self.clone()
    }
}
