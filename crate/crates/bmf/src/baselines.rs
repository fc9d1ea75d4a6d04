//! NaiveCol: the greedy column baseline.
//!
//! Each candidate factor is seeded by one column `j` of the input: its row
//! set is the ones of column `j`, its column set every column `j'` that
//! dominates `j` (column `j` is elementwise ≤ column `j'`). Such a rectangle
//! contains no zeros of the input, so the baseline never produces false
//! positives. Steps greedily pick the candidate covering the most not yet
//! covered ones.

use serde::{Deserialize, Serialize};

use crate::boolmat::{sorted_diff, sorted_union_count_new, BoolMatrix, FactorPair, Rectangle};
use crate::{Error, Result};

/// One greedy step: which column seeded the factor and what it covered.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaiveColStep {
    /// 1-based step number (also the factor index plus one).
    pub step: usize,
    /// Seed column chosen this step.
    pub column: usize,
    /// Ones newly covered by this factor.
    pub covered_new: u64,
    pub coverage_after: f64,
    pub uncovered_after: u64,
}

/// Result of [`naivecol`].
#[derive(Clone, Debug, PartialEq)]
pub struct NaiveColResult {
    pub factors: FactorPair,
    pub trace: Vec<NaiveColStep>,
}

/// Greedy column baseline: up to `k` factors, stopping early on full cover
/// or when no remaining candidate covers anything new. Ties go to the
/// lowest column index.
pub fn naivecol(i: &BoolMatrix, k: usize) -> Result<NaiveColResult> {
    if k < 1 {
        return Err(Error::Config("rank k must be at least 1".into()));
    }
    if i.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let m = i.n_cols();
    let nnz_i = i.nnz() as u64;
    let transposed = i.transpose();
    let column = |j: usize| transposed.row(j);

    // dominators[j] = sorted columns j' with column j ⊆ column j'
    let dominators: Vec<Vec<u32>> = (0..m)
        .map(|j| {
            (0..m)
                .filter(|&jq| is_subset(column(j), column(jq)))
                .map(|jq| jq as u32)
                .collect()
        })
        .collect();

    let mut covered: Vec<Vec<u32>> = vec![Vec::new(); i.n_rows()];
    let mut covered_total = 0u64;
    let mut used = vec![false; m];
    let mut rects: Vec<Rectangle> = Vec::new();
    let mut trace: Vec<NaiveColStep> = Vec::new();

    for step in 1..=k {
        let mut best: Option<(usize, u64)> = None;
        for j in 0..m {
            if used[j] || column(j).is_empty() {
                continue;
            }
            let new = column(j)
                .iter()
                .map(|&r| sorted_diff(&dominators[j], &covered[r as usize]).len() as u64)
                .sum();
            if best.is_none_or(|(_, best_new)| new > best_new) {
                best = Some((j, new));
            }
        }
        let Some((j, new)) = best else { break };
        if new == 0 {
            break;
        }
        used[j] = true;
        for &r in column(j) {
            let (merged, added) =
                sorted_union_count_new(&covered[r as usize], &dominators[j]);
            covered[r as usize] = merged;
            covered_total += added;
        }
        rects.push(Rectangle {
            rows: column(j).to_vec(),
            cols: dominators[j].clone(),
        });
        trace.push(NaiveColStep {
            step,
            column: j,
            covered_new: new,
            coverage_after: covered_total as f64 / nnz_i as f64,
            uncovered_after: nnz_i - covered_total,
        });
        if covered_total == nnz_i {
            break;
        }
    }

    Ok(NaiveColResult {
        factors: FactorPair::from_rectangles(i.n_rows(), i.n_cols(), &rects),
        trace,
    })
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut bi = 0;
    for &v in a {
        while bi < b.len() && b[bi] < v {
            bi += 1;
        }
        if bi >= b.len() || b[bi] != v {
            return false;
        }
        bi += 1;
    }
    true
}
