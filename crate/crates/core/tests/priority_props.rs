mod common;

use common::{l1, oracle_eigen, spearman};
use dfx_ahp::hierarchy::{ComparisonMatrix, Completion, Intensity};
use dfx_ahp::matrix::{DenseMatrix, PairwiseMatrix};
use dfx_ahp::priority::{consistency, principal_eigenvector, row_geometric_mean, RandomIndex, SolverOptions};
use proptest::prelude::*;

fn intensity() -> impl Strategy<Value = Intensity> {
    (1u8..=9, any::<bool>()).prop_map(|(g, inv)| Intensity::new(g, inv).unwrap())
}

fn saaty_matrix(max_n: usize) -> impl Strategy<Value = ComparisonMatrix> {
    (3..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(intensity(), n * (n - 1) / 2).prop_map(move |cells| {
            let mut judged = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    judged.push((i, j, cells[k]));
                    k += 1;
                }
            }
            let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            ComparisonMatrix::from_judgments("ctx", labels, &judged, Completion::Strict).unwrap()
        })
    })
}

fn weights(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01f64..1.0, 2..=max_n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn consistent_matrices_recover_weights(w in weights(9)) {
        let m = DenseMatrix::from_weights(&w);
        let r = principal_eigenvector(&m, &SolverOptions::default()).unwrap();
        prop_assert!(l1(&r.priorities, &w) < 1e-9);
        let c = consistency(&m, &r, &RandomIndex::table_only()).unwrap();
        prop_assert!(c.cr.abs() < 1e-9);
        prop_assert!(c.pass);
        let gm = row_geometric_mean(&m);
        prop_assert!(l1(&gm, &w) < 1e-9);
        prop_assert!((spearman(&gm, &r.priorities) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_dense_oracle(m in saaty_matrix(7)) {
        let r = principal_eigenvector(&m, &SolverOptions::default()).unwrap();
        let (w, lambda) = oracle_eigen(&m.to_dense());
        prop_assert!(l1(&r.priorities, &w) < 1e-6, "{:?} vs {:?}", r.priorities, w);
        prop_assert!((r.lambda_max - lambda).abs() < 1e-6);
    }

    #[test]
    fn lambda_at_least_order(m in saaty_matrix(9)) {
        let r = principal_eigenvector(&m, &SolverOptions::default()).unwrap();
        prop_assert!(r.lambda_max >= m.order() as f64 - 1e-9);
        let c = consistency(&m, &r, &RandomIndex::table_only()).unwrap();
        prop_assert!(c.ci >= 0.0);
        prop_assert_eq!(c.pass, c.cr < 0.10);
    }

    #[test]
    fn permutation_equivariance(m in saaty_matrix(7), seed in any::<u64>()) {
        let n = m.order();
        let mut perm: Vec<usize> = (0..n).collect();
        // Fisher-Yates driven by the seed
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let dense = m.to_dense();
        let a = principal_eigenvector(&dense, &SolverOptions::default()).unwrap();
        let b = principal_eigenvector(&dense.permuted(&perm), &SolverOptions::default()).unwrap();
        for (i, &p) in perm.iter().enumerate() {
            prop_assert!((b.priorities[i] - a.priorities[p]).abs() < 1e-9);
        }
        prop_assert!((a.lambda_max - b.lambda_max).abs() < 1e-9);
    }

    #[test]
    fn transposition_reverses_order_for_three(m in saaty_matrix(3)) {
        let dense = m.to_dense();
        let a = principal_eigenvector(&dense, &SolverOptions::default()).unwrap().priorities;
        let b = principal_eigenvector(&dense.transposed(), &SolverOptions::default()).unwrap().priorities;
        for i in 0..3 {
            for j in 0..3 {
                if a[i] > a[j] + 1e-9 {
                    prop_assert!(b[i] < b[j]);
                }
            }
        }
    }

    #[test]
    fn transposed_consistent_matrix_gives_reciprocal_weights(w in weights(9)) {
        let m = DenseMatrix::from_weights(&w).transposed();
        let r = principal_eigenvector(&m, &SolverOptions::default()).unwrap();
        let inv: Vec<f64> = w.iter().map(|x| 1.0 / x).collect();
        let s: f64 = inv.iter().sum();
        let expected: Vec<f64> = inv.iter().map(|x| x / s).collect();
        prop_assert!(l1(&r.priorities, &expected) < 1e-9);
    }

    #[test]
    fn geometric_mean_agrees_on_three(m in saaty_matrix(3)) {
        let r = principal_eigenvector(&m, &SolverOptions::default()).unwrap();
        prop_assert!(l1(&row_geometric_mean(&m), &r.priorities) < 1e-9);
    }
}

#[test]
fn frozen_three_by_three() {
    let rows = vec![vec![1.0, 2.0, 5.0], vec![0.5, 1.0, 3.0], vec![0.2, 1.0 / 3.0, 1.0]];
    let m = DenseMatrix::from_rows(&rows);
    let r = principal_eigenvector(&m, &SolverOptions::default()).unwrap();
    let expected = [0.581552066851616, 0.30899564363286425, 0.10945228951551984];
    assert!(l1(&r.priorities, &expected) < 1e-12);
    assert!((r.lambda_max - 3.00369459806364).abs() < 1e-12);
    let c = consistency(&m, &r, &RandomIndex::table_only()).unwrap();
    assert!((c.ci - 0.0018472990318199045).abs() < 1e-12);
    assert!((c.cr - 0.0031849983307239735).abs() < 1e-12);
    let (w, lambda) = oracle_eigen(&m);
    assert!(l1(&w, &expected) < 1e-9);
    assert!((lambda - 3.00369459806364).abs() < 1e-9);
}
