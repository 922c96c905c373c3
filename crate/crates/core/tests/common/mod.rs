#![allow(dead_code)]

use dfx_ahp::hierarchy::{CriterionLayer, CriterionNode, DecisionHierarchy, Intensity, JudgmentRecord};
use dfx_ahp::matrix::{DenseMatrix, PairwiseMatrix};
use dfx_ahp::Model;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_intensity(rng: &mut impl Rng) -> Intensity {
    Intensity::new(rng.random_range(1..=9), rng.random_bool(0.5)).unwrap()
}

/// Goal, one or two criterion layers, 2..=6 alternatives, every pair judged at random.
pub fn random_model(seed: u64, criterion_layers: usize) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top: Vec<String> = (0..rng.random_range(1..=4)).map(|i| format!("c{i}")).collect();
    let mut layers = vec![CriterionLayer {
        name: "top".into(),
        nodes: top
            .iter()
            .map(|c| CriterionNode {
                name: c.clone(),
                parent: "goal".into(),
            })
            .collect(),
    }];
    if criterion_layers == 2 {
        let mut nodes = Vec::new();
        for c in &top {
            for j in 0..rng.random_range(1..=3) {
                nodes.push(CriterionNode {
                    name: format!("{c}.{j}"),
                    parent: c.clone(),
                });
            }
        }
        layers.push(CriterionLayer {
            name: "sub".into(),
            nodes,
        });
    }
    let alternatives: Vec<String> = (0..rng.random_range(2..=6)).map(|i| format!("a{i}")).collect();
    let h = DecisionHierarchy::new("goal", layers, alternatives).unwrap();
    let mut judgments = Vec::new();
    for ctx in h.required_contexts() {
        for i in 0..ctx.order() {
            for j in i + 1..ctx.order() {
                judgments.push(JudgmentRecord::new(
                    ctx.name.clone(),
                    ctx.children[i].clone(),
                    ctx.children[j].clone(),
                    random_intensity(&mut rng),
                ));
            }
        }
    }
    Model::new(h, judgments).unwrap()
}

/// Dense eigensolver oracle: Perron root from the real Schur form, eigenvector
/// as the null vector of `M - λI` from an SVD.
pub fn oracle_eigen(m: &DenseMatrix) -> (Vec<f64>, f64) {
    let n = m.order();
    let a = DMatrix::from_fn(n, n, |i, j| m.entry(i, j));
    let lambda = a
        .clone()
        .schur()
        .complex_eigenvalues()
        .iter()
        .map(|c| c.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let shifted = &a - DMatrix::identity(n, n) * lambda;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .map(|(k, _)| k)
        .unwrap();
    let v: Vec<f64> = v_t.row(k).iter().map(|x| x.abs()).collect();
    let s: f64 = v.iter().sum();
    (v.into_iter().map(|x| x / s).collect(), lambda)
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = ra.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    if va == 0.0 || vb == 0.0 {
        return if ra == rb { 1.0 } else { 0.0 };
    }
    cov / (va * vb).sqrt()
}
