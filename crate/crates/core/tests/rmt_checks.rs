//! End-to-end finite-size checks: blocks of sampled invariant ensembles are
//! pushed through the block maps and their spectra compared against the
//! predicted limiting laws.

use freespec_core::criteria::depolarizing_plus_choi;
use freespec_core::rmt::{compare_eigs, schmidt_witness_overlap};
use freespec_core::{
    apply_block_map, delta_plus_measure, gamma_measure, histogram, partial_transpose,
    sample_invariant, sample_wishart, BipartiteMatrix, MeasureExpr,
};

#[test]
fn partial_transpose_spectrum_follows_the_gamma_law() {
    let n = 2;
    let d = 1000;
    let mu = MeasureExpr::marchenko_pastur(4.0).unwrap();
    let sample = sample_invariant(&mu, n * d, 21).unwrap();
    let x = BipartiteMatrix::new(n, d, sample).unwrap();
    let eigs = partial_transpose(&x).eigvals().unwrap();

    let law = gamma_measure(&mu, n).unwrap();
    let cmp = compare_eigs(&law, &eigs).unwrap();
    assert!(cmp.w1 < 0.05, "W1 distance {}", cmp.w1);
    assert!(cmp.min_gap.abs() < 0.15, "lower edge gap {}", cmp.min_gap);
    assert!(cmp.max_gap.abs() < 0.15, "upper edge gap {}", cmp.max_gap);
}

#[test]
fn depolarizing_block_map_follows_the_delta_plus_law() {
    let n = 2;
    let d = 600;
    let mu = MeasureExpr::semicircle(0.0, 1.0).unwrap();
    let sample = sample_invariant(&mu, n * d, 33).unwrap();
    let x = BipartiteMatrix::new(n, d, sample).unwrap();
    let y = apply_block_map(&x, &depolarizing_plus_choi(n)).unwrap();

    // For the centered semicircle the modified law is again semicircular
    // with variance 7 at n = 2.
    let law = delta_plus_measure(&mu, n).unwrap();
    let cmp = compare_eigs(&law, &y.eigvals().unwrap()).unwrap();
    assert!(cmp.w1 < 0.1, "W1 distance {}", cmp.w1);
    assert!(cmp.min_gap.abs() < 0.4, "lower edge gap {}", cmp.min_gap);
    assert!(cmp.max_gap.abs() < 0.4, "upper edge gap {}", cmp.max_gap);
}

#[test]
fn wishart_extremes_match_the_marchenko_pastur_edges() {
    let x = sample_wishart(2, 400, 2.0, 5).unwrap();
    let (lo, hi) = x.extremes().unwrap();
    let (edge_lo, edge_hi) = {
        let r = 2.0f64.sqrt();
        ((1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r))
    };
    let width = edge_hi - edge_lo;
    assert!((lo - edge_lo).abs() < 0.05 * width, "lower: {lo} vs {edge_lo}");
    assert!((hi - edge_hi).abs() < 0.05 * width, "upper: {hi} vs {edge_hi}");
}

#[test]
fn witness_overlap_concentrates_near_the_product_gap() {
    // a b - 1 = 2 exactly; the trace and Frobenius fluctuations are O(1/d).
    let v = schmidt_witness_overlap(4, 250, 3.0, 1.0, 7).unwrap();
    assert!((v - 2.0).abs() < 0.25, "overlap {v}");

    let mut negative = 0;
    for seed in 0..10 {
        let v = schmidt_witness_overlap(33, 100, 2.007692762912317, 0.4961829819586655, seed)
            .unwrap();
        if v < 0.0 {
            negative += 1;
        }
    }
    assert!(negative >= 6, "only {negative} of 10 overlaps negative");
}

#[test]
fn histogram_bins_agree_with_the_sampled_quantiles() {
    let mu = MeasureExpr::atomic(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap();
    let sample = sample_invariant(&mu, 500, 3).unwrap();
    let eigs = sample.eigvalsh().unwrap();
    let bins = histogram(&eigs, -1.5, 1.5, 3).unwrap();
    assert_eq!(bins.len(), 3);
    assert_eq!(bins[0].2, 250, "lower cluster count");
    assert_eq!(bins[1].2, 0, "gap count");
    assert_eq!(bins[2].2, 250, "upper cluster count");
    assert!((bins[0].0 + 1.5).abs() < 1e-12);
    assert!((bins[2].1 - 1.5).abs() < 1e-12);
}
