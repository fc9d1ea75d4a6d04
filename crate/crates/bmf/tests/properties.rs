//! Property-based invariants over randomized inputs, checked against
//! dense brute-force references where one exists.

mod common;

use proptest::prelude::*;

use bmf::baselines::naivecol;
use bmf::boolmat::{bool_product, mismatch_counts, residual, BoolMatrix, FactorPair};
use bmf::harness::coverage;
use bmf::topfiberm::{factorize, TfmConfig};
use common::*;

fn matrix_strategy(max_n: usize, max_m: usize, density: f64) -> impl Strategy<Value = BoolMatrix> {
    (1..=max_n, 1..=max_m).prop_flat_map(move |(n, m)| {
        proptest::collection::vec(prop::bool::weighted(density), n * m).prop_map(
            move |cells| {
                let entries = cells
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| (i / m, i % m));
                BoolMatrix::from_entries(n, m, entries).unwrap().0
            },
        )
    })
}

fn matrix_with_masks(
    max_n: usize,
    max_m: usize,
) -> impl Strategy<Value = (BoolMatrix, Vec<bool>, Vec<bool>)> {
    matrix_strategy(max_n, max_m, 0.5).prop_flat_map(|m| {
        let (n_rows, n_cols) = (m.n_rows(), m.n_cols());
        (
            Just(m),
            proptest::collection::vec(any::<bool>(), n_rows),
            proptest::collection::vec(any::<bool>(), n_cols),
        )
    })
}

fn factors_strategy(max_k: usize) -> impl Strategy<Value = FactorPair> {
    (1usize..=8, 1usize..=8, 1..=max_k).prop_flat_map(|(n, m, k)| {
        (
            matrix_strategy_fixed(n, k, 0.4),
            matrix_strategy_fixed(k, m, 0.4),
        )
            .prop_map(|(a, b)| FactorPair::new(a, b).unwrap())
    })
}

fn matrix_strategy_fixed(n: usize, m: usize, density: f64) -> impl Strategy<Value = BoolMatrix> {
    proptest::collection::vec(prop::bool::weighted(density), n * m).prop_map(move |cells| {
        let entries = cells
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| (i / m, i % m));
        BoolMatrix::from_entries(n, m, entries).unwrap().0
    })
}

/// A matrix and a factor pair of matching outer dimensions.
fn matrix_and_factors(
    max_n: usize,
    max_m: usize,
    max_k: usize,
) -> impl Strategy<Value = (BoolMatrix, FactorPair)> {
    (1..=max_n, 1..=max_m, 1..=max_k).prop_flat_map(|(n, m, k)| {
        (
            matrix_strategy_fixed(n, m, 0.5),
            matrix_strategy_fixed(n, k, 0.4),
            matrix_strategy_fixed(k, m, 0.4),
        )
            .prop_map(|(i, a, b)| (i, FactorPair::new(a, b).unwrap()))
    })
}

proptest! {
    /// Masked ones plus masked zeros account for every masked column, per row.
    #[test]
    fn sums_and_complements_partition_the_mask((m, row_mask, col_mask) in matrix_with_masks(10, 10)) {
        let masked_cols = col_mask.iter().filter(|&&b| b).count() as u32;
        let ones = m.row_sums(Some(&col_mask)).unwrap();
        let zeros = m.complement_row_sums(&col_mask).unwrap();
        for r in 0..m.n_rows() {
            prop_assert_eq!(ones[r] + zeros[r], masked_cols);
        }
        let masked_rows = row_mask.iter().filter(|&&b| b).count() as u32;
        let ones = m.col_sums(Some(&row_mask)).unwrap();
        let zeros = m.complement_col_sums(&row_mask).unwrap();
        for c in 0..m.n_cols() {
            prop_assert_eq!(ones[c] + zeros[c], masked_rows);
        }
    }

    /// Rectangle counts agree with counting cells one by one.
    #[test]
    fn rectangle_counts_match_reference((m, row_mask, col_mask) in matrix_with_masks(10, 10)) {
        let counts = m.rectangle_counts(&row_mask, &col_mask).unwrap();
        let (ones, zeros) = ref_rectangle_counts(&m, &row_mask, &col_mask);
        prop_assert_eq!((counts.ones, counts.zeros), (ones, zeros));
    }

    /// The sparse Boolean product equals the defining triple loop.
    #[test]
    fn product_matches_reference(f in factors_strategy(4)) {
        prop_assert!(dense_eq(&bool_product(&f), &ref_product(&f)));
    }

    /// The residual is exactly the uncovered ones of I.
    #[test]
    fn residual_matches_reference((m, f) in matrix_and_factors(8, 8, 4)) {
        let r = residual(&m, &f).unwrap();
        prop_assert!(dense_eq(&r, &ref_residual(&m, &f)));
    }

    /// Subtracting a rectangle is idempotent and clears every masked one.
    #[test]
    fn subtract_rectangle_is_idempotent((m, row_mask, col_mask) in matrix_with_masks(10, 10)) {
        let mut once = m.clone();
        once.subtract_rectangle(&row_mask, &col_mask).unwrap();
        let mut twice = once.clone();
        twice.subtract_rectangle(&row_mask, &col_mask).unwrap();
        prop_assert_eq!(&once, &twice);
        let counts = once.rectangle_counts(&row_mask, &col_mask).unwrap();
        prop_assert_eq!(counts.ones, 0);
    }

    /// Mismatch counts agree with the dense cell-by-cell census.
    #[test]
    fn mismatches_match_reference((m, f) in matrix_and_factors(8, 8, 4)) {
        let got = mismatch_counts(&m, &f).unwrap();
        let (fn_, fp) = ref_mismatches(&m, &f);
        prop_assert_eq!((got.false_negatives, got.false_positives), (fn_, fp));
    }

    /// Coverage agrees with the dense reference formula.
    #[test]
    fn coverage_matches_reference((m, f) in matrix_and_factors(8, 8, 4)) {
        prop_assume!(m.nnz() > 0);
        let got = coverage(&m, &f).unwrap();
        prop_assert_eq!(got.coverage, ref_coverage(&m, &f));
    }

    /// At a precision threshold of 1.0 the factors never cover a zero of I.
    #[test]
    fn topfiberm_at_tp_one_has_no_false_positives(
        m in matrix_strategy(12, 12, 0.4),
        k in 1usize..=4,
    ) {
        prop_assume!(m.nnz() > 0);
        let result = factorize(&m, &TfmConfig::new(k, 1.0)).unwrap();
        let mm = mismatch_counts(&m, &result.factors).unwrap();
        prop_assert_eq!(mm.false_positives, 0);
    }

    /// The column baseline never covers a zero of I, at any threshold.
    #[test]
    fn naivecol_has_no_false_positives(
        m in matrix_strategy(12, 12, 0.4),
        k in 1usize..=6,
    ) {
        prop_assume!(m.nnz() > 0);
        let result = naivecol(&m, k).unwrap();
        let mm = mismatch_counts(&m, &result.factors).unwrap();
        prop_assert_eq!(mm.false_positives, 0);
    }

    /// More baseline factors never hurt coverage.
    #[test]
    fn naivecol_coverage_is_monotone_in_k(
        m in matrix_strategy(12, 12, 0.4),
        k in 1usize..=5,
    ) {
        prop_assume!(m.nnz() > 0);
        let lo = coverage(&m, &naivecol(&m, k).unwrap().factors).unwrap().coverage;
        let hi = coverage(&m, &naivecol(&m, k + 1).unwrap().factors).unwrap().coverage;
        prop_assert!(hi >= lo, "coverage fell from {lo} to {hi} when k grew");
    }

    /// Replaying any trace upholds the replacement-phase guarantees:
    /// replacements strictly improve the kept gain sum, exclusions never
    /// beat the kept minimum.
    #[test]
    fn replacement_phase_invariants_hold(
        m in matrix_strategy(12, 12, 0.45),
        k in 1usize..=3,
        t_p in prop::sample::select(vec![0.3, 0.5, 0.8, 1.0]),
    ) {
        prop_assume!(m.nnz() > 0);
        let result = factorize(&m, &TfmConfig::new(k, t_p)).unwrap();
        let stats = replay_trace(&result.trace.records);
        prop_assert!(stats.is_ok(), "{}", stats.err().unwrap());
    }

    /// The whole pipeline is deterministic: same input, same everything.
    #[test]
    fn factorize_is_deterministic(
        m in matrix_strategy(10, 10, 0.4),
        k in 1usize..=3,
    ) {
        prop_assume!(m.nnz() > 0);
        let cfg = TfmConfig::new(k, 0.6);
        let first = factorize(&m, &cfg).unwrap();
        let second = factorize(&m, &cfg).unwrap();
        prop_assert_eq!(first, second);
    }
}

/// The factors reported by a run multiply back to a product whose mismatch
/// counts match the reported coverage; checked across both algorithms.
#[test]
fn reported_coverage_is_consistent_with_factors() {
    let mut r = rng(7);
    for _ in 0..50 {
        let m = random_nonempty(&mut r, 15, 15, 0.35);
        for algorithm in [
            bmf::harness::Algorithm::TopFiberM,
            bmf::harness::Algorithm::NaiveCol,
        ] {
            let outcome = bmf::harness::run_algorithm(&m, algorithm, 4, 0.7, None).unwrap();
            assert_eq!(
                outcome.report.coverage,
                ref_coverage(&m, &outcome.factors),
                "coverage mismatch for {algorithm:?}"
            );
        }
    }
}
