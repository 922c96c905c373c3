mod common;

use dfx_ahp::hierarchy::{ComparisonMatrix, Completion, HierarchyDocument, Intensity, Strictness};
use dfx_ahp::matrix::PairwiseMatrix;
use dfx_ahp::{solve, EngineOptions, Model};
use proptest::prelude::*;

fn judgments(n: usize) -> impl Strategy<Value = Vec<(usize, usize, Intensity)>> {
    proptest::collection::vec((1u8..=9, any::<bool>(), any::<bool>()), n * (n - 1) / 2).prop_map(move |cells| {
        let mut out = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let (g, inv, flip) = cells[k];
                let t = Intensity::new(g, inv).unwrap();
                // same judgment stated from either side
                out.push(if flip { (j, i, t.reciprocal()) } else { (i, j, t) });
                k += 1;
            }
        }
        out
    })
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("n{i}")).collect()
}

proptest! {
    #[test]
    fn reciprocity_is_exact((n, js) in (2usize..=9).prop_flat_map(|n| (Just(n), judgments(n)))) {
        let m = ComparisonMatrix::from_judgments("c", labels(n), &js, Completion::Strict).unwrap();
        for i in 0..n {
            prop_assert_eq!(m.entry(i, i), 1.0);
            for j in (0..n).filter(|&j| j != i) {
                let (a, b) = (m.intensity(i, j).unwrap(), m.intensity(j, i).unwrap());
                prop_assert_eq!(a, b.reciprocal());
            }
        }
    }

    #[test]
    fn order_insensitive(
        (n, js) in (2usize..=8).prop_flat_map(|n| (Just(n), judgments(n))),
        shuffle in any::<u64>(),
    ) {
        let a = ComparisonMatrix::from_judgments("c", labels(n), &js, Completion::Strict).unwrap();
        let mut shuffled = js.clone();
        let len = shuffled.len();
        let mut s = shuffle;
        for i in (1..len).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let b = ComparisonMatrix::from_judgments("c", labels(n), &shuffled, Completion::Strict).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn document_round_trip(seed in any::<u64>(), depth in 1usize..=2) {
        let model = common::random_model(seed, depth);
        let text = model.to_document().to_json_pretty();
        let back = Model::from_document(&HierarchyDocument::from_json_str(&text, Strictness::Strict).unwrap()).unwrap();
        prop_assert_eq!(&back, &model);
        for ctx in model.hierarchy().required_contexts() {
            prop_assert_eq!(
                model.matrix(&ctx, Completion::Strict).unwrap(),
                back.matrix(&ctx, Completion::Strict).unwrap()
            );
        }
        let o = EngineOptions::default();
        prop_assert_eq!(solve(&model, &o).unwrap().weights, solve(&back, &o).unwrap().weights);
    }
}

#[test]
fn lenient_completion_marks_imputed() {
    let g = |x| Intensity::new(x, false).unwrap();
    let js = vec![(0, 1, g(2)), (1, 2, g(3))];
    assert!(ComparisonMatrix::from_judgments("c", labels(3), &js, Completion::Strict).is_err());
    let m = ComparisonMatrix::from_judgments("c", labels(3), &js, Completion::Lenient).unwrap();
    assert!(m.is_imputed());
    assert!((m.entry(0, 2) - 6.0).abs() < 1e-12);
    assert!((m.entry(2, 0) * m.entry(0, 2) - 1.0).abs() < 1e-12);
}
