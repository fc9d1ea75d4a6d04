//! Shared helpers for the integration and acceptance suites: dense
//! brute-force reference implementations, seeded random generators, trace
//! replay checks, and a synthetic triple corpus.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use bmf::boolmat::{BoolMatrix, FactorPair};
use bmf::harness::fixture_path;
use bmf::io::read_matrix_market;
use bmf::topfiberm::{TraceAction, TraceRecord};

// ---------------------------------------------------------------------
// dense reference implementations (independent of the sparse code paths)
// ---------------------------------------------------------------------

pub type Dense = Vec<Vec<bool>>;

pub fn to_dense(m: &BoolMatrix) -> Dense {
    let mut d = vec![vec![false; m.n_cols()]; m.n_rows()];
    for (r, c) in m.iter_ones() {
        d[r][c] = true;
    }
    d
}

/// Boolean product by the defining triple loop.
pub fn ref_product(f: &FactorPair) -> Dense {
    let a = to_dense(f.a());
    let b = to_dense(f.b());
    let (n, k) = (a.len(), f.a().n_cols());
    let m = f.b().n_cols();
    let mut out = vec![vec![false; m]; n];
    for r in 0..n {
        for c in 0..m {
            for f_idx in 0..k {
                if a[r][f_idx] && b[f_idx][c] {
                    out[r][c] = true;
                    break;
                }
            }
        }
    }
    out
}

/// Ones and zeros of `i` inside the masked rectangle, counted cell by cell.
pub fn ref_rectangle_counts(i: &BoolMatrix, rows: &[bool], cols: &[bool]) -> (u64, u64) {
    let d = to_dense(i);
    let (mut ones, mut zeros) = (0u64, 0u64);
    for (r, row) in d.iter().enumerate() {
        if !rows[r] {
            continue;
        }
        for (c, &v) in row.iter().enumerate() {
            if !cols[c] {
                continue;
            }
            if v {
                ones += 1;
            } else {
                zeros += 1;
            }
        }
    }
    (ones, zeros)
}

/// Cells of `i` not covered by the product, cell by cell.
pub fn ref_residual(i: &BoolMatrix, f: &FactorPair) -> Dense {
    let d = to_dense(i);
    let p = ref_product(f);
    let mut out = vec![vec![false; i.n_cols()]; i.n_rows()];
    for r in 0..i.n_rows() {
        for c in 0..i.n_cols() {
            out[r][c] = d[r][c] && !p[r][c];
        }
    }
    out
}

/// (false negatives, false positives) counted cell by cell.
pub fn ref_mismatches(i: &BoolMatrix, f: &FactorPair) -> (u64, u64) {
    let d = to_dense(i);
    let p = ref_product(f);
    let (mut fn_, mut fp) = (0u64, 0u64);
    for r in 0..i.n_rows() {
        for c in 0..i.n_cols() {
            match (d[r][c], p[r][c]) {
                (true, false) => fn_ += 1,
                (false, true) => fp += 1,
                _ => {}
            }
        }
    }
    (fn_, fp)
}

/// Coverage from the cell-by-cell mismatch counts.
pub fn ref_coverage(i: &BoolMatrix, f: &FactorPair) -> f64 {
    let (fn_, fp) = ref_mismatches(i, f);
    1.0 - (fn_ + fp) as f64 / i.nnz() as f64
}

pub fn dense_eq(m: &BoolMatrix, d: &Dense) -> bool {
    to_dense(m) == *d
}

// ---------------------------------------------------------------------
// seeded generators
// ---------------------------------------------------------------------

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random matrix of the exact given shape; may be all zeros.
pub fn random_matrix(rng: &mut StdRng, n: usize, m: usize, density: f64) -> BoolMatrix {
    let entries = (0..n)
        .flat_map(|r| (0..m).map(move |c| (r, c)))
        .filter(|_| rng.random_bool(density))
        .collect::<Vec<_>>();
    BoolMatrix::from_entries(n, m, entries).unwrap().0
}

/// Random matrix with at least one 1.
pub fn random_nonempty(rng: &mut StdRng, n: usize, m: usize, density: f64) -> BoolMatrix {
    loop {
        let m_out = random_matrix(rng, n, m, density);
        if !m_out.is_empty() {
            return m_out;
        }
    }
}

/// Random factor pair A (n×k) and B (k×m).
pub fn random_factors(rng: &mut StdRng, n: usize, m: usize, k: usize, density: f64) -> FactorPair {
    let a = random_matrix(rng, n, k, density);
    let b = random_matrix(rng, k, m, density);
    FactorPair::new(a, b).unwrap()
}

/// Block-diagonal matrix of `b` disjoint all-ones blocks with random side
/// lengths in 1..=max_side. Returns the matrix and the block shapes.
pub fn planted_blocks(rng: &mut StdRng, b: usize, max_side: usize) -> (BoolMatrix, Vec<(usize, usize)>) {
    let shapes: Vec<(usize, usize)> = (0..b)
        .map(|_| {
            (
                rng.random_range(1..=max_side),
                rng.random_range(1..=max_side),
            )
        })
        .collect();
    let n: usize = shapes.iter().map(|s| s.0).sum();
    let m: usize = shapes.iter().map(|s| s.1).sum();
    let mut entries = Vec::new();
    let (mut r0, mut c0) = (0, 0);
    for &(h, w) in &shapes {
        for r in r0..r0 + h {
            for c in c0..c0 + w {
                entries.push((r, c));
            }
        }
        r0 += h;
        c0 += w;
    }
    (BoolMatrix::from_entries(n, m, entries).unwrap().0, shapes)
}

// ---------------------------------------------------------------------
// fixtures
// ---------------------------------------------------------------------

/// Load a benchmark fixture if it has been fetched; a present-but-broken
/// file panics rather than masquerading as missing.
pub fn load_fixture(file: &str) -> Option<BoolMatrix> {
    let path = fixture_path(file)?;
    let (matrix, _) = read_matrix_market(&path)
        .unwrap_or_else(|e| panic!("fixture {} exists but did not load: {e}", path.display()));
    Some(matrix)
}

// ---------------------------------------------------------------------
// trace replay
// ---------------------------------------------------------------------

/// Statistics from replaying a factorization trace.
pub struct ReplayStats {
    pub accepted: usize,
    pub replaced: usize,
    pub excluded: usize,
}

/// Replay a trace and verify the replacement-phase guarantees: every
/// replacement strictly increases the gain sum of the kept set, and every
/// exclusion had gain no better than the then-current minimum.
pub fn replay_trace(records: &[TraceRecord]) -> Result<ReplayStats, String> {
    let mut kept: Vec<i64> = Vec::new();
    let mut stats = ReplayStats {
        accepted: 0,
        replaced: 0,
        excluded: 0,
    };
    for (idx, rec) in records.iter().enumerate() {
        match rec.action {
            TraceAction::Accepted => {
                if stats.replaced > 0 || stats.excluded > 0 {
                    return Err(format!(
                        "record {idx}: acceptance after the replacement phase began"
                    ));
                }
                kept.push(rec.gain);
                stats.accepted += 1;
            }
            TraceAction::Replaced { evicted_slot } => {
                let slot_idx = evicted_slot - 1;
                if slot_idx >= kept.len() {
                    return Err(format!("record {idx}: evicted slot {evicted_slot} out of range"));
                }
                let min = *kept.iter().min().unwrap();
                if kept[slot_idx] != min {
                    return Err(format!(
                        "record {idx}: evicted slot {evicted_slot} had gain {}, but the minimum was {min}",
                        kept[slot_idx]
                    ));
                }
                if rec.gain <= kept[slot_idx] {
                    return Err(format!(
                        "record {idx}: replacement gain {} did not exceed evicted gain {}",
                        rec.gain, kept[slot_idx]
                    ));
                }
                kept[slot_idx] = rec.gain;
                stats.replaced += 1;
            }
            TraceAction::Excluded => {
                let min = kept.iter().min().copied().unwrap_or(i64::MAX);
                if rec.gain > min {
                    return Err(format!(
                        "record {idx}: excluded fiber gain {} exceeded the minimum kept gain {min}",
                        rec.gain
                    ));
                }
                stats.excluded += 1;
            }
        }
    }
    Ok(stats)
}

// ---------------------------------------------------------------------
// synthetic triple corpus
// ---------------------------------------------------------------------

/// Expected content of one predicate group, kept as plain collections.
pub struct CorpusOracle {
    /// Predicate IRI → set of (subject, object) canonical term pairs.
    pub pairs: HashMap<String, HashSet<(String, String)>>,
    /// Predicate IRI → raw statement count including duplicates.
    pub occurrences: HashMap<String, usize>,
    /// Predicate IRIs in first-appearance order.
    pub predicate_order: Vec<String>,
}

/// Deterministic N-Triples corpus: `total` statements over 10 predicates,
/// 3 of which stay below `min_count`. Subjects mix IRIs and blank nodes;
/// objects mix IRIs and literals.
pub fn synthetic_corpus(total: usize, min_count: usize, seed: u64) -> (String, CorpusOracle) {
    assert!(min_count >= 2, "corpus needs room below the threshold");
    let mut rng = rng(seed);
    // three predicates stay strictly below min_count
    let small = [min_count - 1, min_count / 2, 1];
    let small_total: usize = small.iter().sum();
    assert!(total > small_total * 2);
    let big_total = total - small_total;
    // statement budget per predicate id 0..9; ids 7..9 are the small ones
    let mut budget = [0usize; 10];
    for (i, b) in small.iter().enumerate() {
        budget[7 + i] = *b;
    }
    for (i, b) in budget.iter_mut().take(7).enumerate() {
        *b = big_total / 7 + usize::from(i < big_total % 7);
    }

    // expand to a shuffled statement stream so predicates interleave
    let mut slots: Vec<usize> = budget
        .iter()
        .enumerate()
        .flat_map(|(p, &n)| std::iter::repeat_n(p, n))
        .collect();
    for i in (1..slots.len()).rev() {
        let j = rng.random_range(0..=i);
        slots.swap(i, j);
    }

    let mut text = String::with_capacity(total * 48);
    let mut oracle = CorpusOracle {
        pairs: HashMap::new(),
        occurrences: HashMap::new(),
        predicate_order: Vec::new(),
    };
    for p in slots {
        let predicate = format!("http://example.org/p{p}");
        let subject = if rng.random_bool(0.2) {
            format!("_:b{}", rng.random_range(0..400u32))
        } else {
            format!("<http://example.org/s{}>", rng.random_range(0..3000u32))
        };
        let object = if rng.random_bool(0.3) {
            format!("\"value {}\"", rng.random_range(0..1500u32))
        } else {
            format!("<http://example.org/o{}>", rng.random_range(0..2000u32))
        };
        text.push_str(&format!("{subject} <{predicate}> {object} .\n"));
        if !oracle.pairs.contains_key(&predicate) {
            oracle.predicate_order.push(predicate.clone());
        }
        oracle
            .pairs
            .entry(predicate.clone())
            .or_default()
            .insert((subject.clone(), object.clone()));
        *oracle.occurrences.entry(predicate).or_default() += 1;
    }
    (text, oracle)
}
