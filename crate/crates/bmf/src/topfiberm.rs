//! Greedy top-fiber factorization with backward correction.
//!
//! Each iteration picks the residual row or column with the most uncovered
//! ones, extends it to a precision-thresholded rectangle, and either accepts
//! it (first `k` iterations, subtracting it from the residual) or weighs it
//! against the current top-k by gain: weaker fibers are excluded from future
//! selection, stronger ones replace the weakest accepted factor and the
//! residual is recomputed from scratch. Up to `sr` fibers are examined even
//! though only `k` are kept.
//!
//! Gain of a rectangle = ones of the residual it covers minus zeros of the
//! original matrix it covers. True-positive counts for the precision tests
//! are taken on the residual; false-positive counts always on the original.

use serde::{Deserialize, Serialize};

use crate::boolmat::{
    mismatch_counts, residual, sorted_diff, sorted_union_count_new, BoolMatrix, FactorPair,
    Rectangle,
};
use crate::{Error, Result};

/// Parameters of a factorization run.
#[derive(Clone, Debug, PartialEq)]
pub struct TfmConfig {
    /// Target rank: number of factors kept.
    pub k: usize,
    /// Precision threshold in (0, 1]: a fiber joins a rectangle only if its
    /// in-rectangle precision (tp / (tp + fp)) meets it.
    pub t_p: f64,
    /// Search limit: fibers examined in total. Defaults to `k`; clamped to
    /// `min(sr, n_rows, n_cols)` at run start.
    pub sr: Option<usize>,
    /// Experimental: take the precision-test true-positive counts on the
    /// original matrix instead of the residual. Off by default; the default
    /// follows the greedy residual semantics.
    pub rtp_on_original: bool,
}

impl TfmConfig {
    pub fn new(k: usize, t_p: f64) -> Self {
        TfmConfig {
            k,
            t_p,
            sr: None,
            rtp_on_original: false,
        }
    }

    pub fn with_sr(mut self, sr: usize) -> Self {
        self.sr = Some(sr);
        self
    }

    /// Check the parameter invariants without running anything; the same
    /// checks run at the start of [`factorize`].
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::Config("rank k must be at least 1".into()));
        }
        if !(self.t_p > 0.0 && self.t_p <= 1.0) {
            return Err(Error::Config(format!(
                "precision threshold t_p must be in (0, 1], got {}",
                self.t_p
            )));
        }
        if let Some(sr) = self.sr {
            if sr < self.k {
                return Err(Error::Config(format!(
                    "search limit sr ({sr}) must be at least rank k ({})",
                    self.k
                )));
            }
        }
        Ok(())
    }
}

/// Whether a fiber is a row or a column of the matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberKind {
    Row,
    Column,
}

/// The fiber picked by [`select_best_fiber`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BestFiber {
    pub kind: FiberKind,
    pub index: usize,
    /// Ones of the fiber in the residual.
    pub ones: u64,
}

/// A precision-thresholded rectangle grown from one seed fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub row_mask: Vec<bool>,
    pub col_mask: Vec<bool>,
    /// Residual ones covered minus original zeros covered.
    pub gain: i64,
    /// Residual ones covered.
    pub true_positives: u64,
}

/// One accepted factor: which search slot holds its rectangle, which fiber
/// seeded it, and the gain at its last computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopFiberEntry {
    /// 1-based iteration number whose slot stores the rectangle.
    pub slot: usize,
    pub fiber_kind: FiberKind,
    pub fiber_index: usize,
    pub gain: i64,
}

/// What happened to the candidate rectangle of one iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceAction {
    /// Appended to the factor list (first `k` iterations).
    Accepted,
    /// Beat the weakest accepted factor and took its place.
    Replaced { evicted_slot: usize },
    /// Gain did not beat the weakest factor; seed fiber barred from
    /// future selection.
    Excluded,
}

/// Per-iteration observability record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    /// 1-based iteration number (also the slot written this iteration).
    pub iteration: usize,
    pub fiber_kind: FiberKind,
    pub fiber_index: usize,
    /// Ones of the seed fiber in the residual at selection time.
    pub fiber_ones: u64,
    pub true_positives: u64,
    pub gain: i64,
    pub action: TraceAction,
    /// Coverage of the accepted factor set after this iteration's action.
    pub coverage_after: f64,
    /// Residual ones remaining after this iteration's action.
    pub uncovered_after: u64,
    /// True when the revised rectangle came out empty (possible only in
    /// pathological threshold corners; kept for observability).
    pub degenerate: bool,
}

/// Full run trace: per-iteration records plus every slot rectangle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TfmTrace {
    pub records: Vec<TraceRecord>,
    /// Rectangle written at each iteration, index = iteration - 1. Slots of
    /// excluded or evicted candidates stay in place; they are never reused.
    pub slots: Vec<Rectangle>,
    pub effective_k: usize,
    pub effective_sr: usize,
}

/// Result of [`factorize`].
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub factors: FactorPair,
    /// The kept factors, in factor order: factor `l` is `entries[l]`.
    pub entries: Vec<TopFiberEntry>,
    pub trace: TfmTrace,
}

/// Pick the non-excluded row or column of `x` with the most ones. Rows beat
/// columns on equal count; within a kind the lowest index wins. Returns
/// `None` when no non-excluded fiber has any ones (normal termination).
pub fn select_best_fiber(
    x: &BoolMatrix,
    excluded_rows: &[bool],
    excluded_cols: &[bool],
) -> Result<Option<BestFiber>> {
    if excluded_rows.len() != x.n_rows() {
        return Err(Error::Dimension {
            context: "excluded_rows length",
            expected: x.n_rows(),
            actual: excluded_rows.len(),
        });
    }
    if excluded_cols.len() != x.n_cols() {
        return Err(Error::Dimension {
            context: "excluded_cols length",
            expected: x.n_cols(),
            actual: excluded_cols.len(),
        });
    }
    let mut best: Option<BestFiber> = None;
    for (r, &count) in x.row_sums(None)?.iter().enumerate() {
        if excluded_rows[r] || count == 0 {
            continue;
        }
        if best.is_none_or(|b| u64::from(count) > b.ones) {
            best = Some(BestFiber {
                kind: FiberKind::Row,
                index: r,
                ones: count.into(),
            });
        }
    }
    for (c, &count) in x.col_sums(None)?.iter().enumerate() {
        if excluded_cols[c] || count == 0 {
            continue;
        }
        if best.is_none_or(|b| u64::from(count) > b.ones) {
            best = Some(BestFiber {
                kind: FiberKind::Column,
                index: c,
                ones: count.into(),
            });
        }
    }
    Ok(best)
}

fn precision_mask(tp: &[u32], fp: &[u32], t_p: f64) -> Vec<bool> {
    tp.iter()
        .zip(fp)
        .map(|(&tp, &fp)| tp > 0 && f64::from(tp) / f64::from(tp + fp) >= t_p)
        .collect()
}

fn check_same_shape(x: &BoolMatrix, i_orig: &BoolMatrix) -> Result<()> {
    if x.n_rows() != i_orig.n_rows() {
        return Err(Error::Dimension {
            context: "residual rows vs original rows",
            expected: i_orig.n_rows(),
            actual: x.n_rows(),
        });
    }
    if x.n_cols() != i_orig.n_cols() {
        return Err(Error::Dimension {
            context: "residual columns vs original columns",
            expected: i_orig.n_cols(),
            actual: x.n_cols(),
        });
    }
    Ok(())
}

fn finish_extension(
    x: &BoolMatrix,
    i_orig: &BoolMatrix,
    row_mask: Vec<bool>,
    col_mask: Vec<bool>,
) -> Result<Extension> {
    let true_positives = x.rectangle_counts(&row_mask, &col_mask)?.ones;
    let false_positives = i_orig.rectangle_counts(&row_mask, &col_mask)?.zeros;
    Ok(Extension {
        row_mask,
        col_mask,
        gain: true_positives as i64 - false_positives as i64,
        true_positives,
    })
}

fn extend_row_inner(
    x: &BoolMatrix,
    i_orig: &BoolMatrix,
    mxr: usize,
    t_p: f64,
    tp_source: &BoolMatrix,
) -> Result<Extension> {
    check_same_shape(x, i_orig)?;
    if mxr >= x.n_rows() {
        return Err(Error::IndexOutOfRange {
            context: "seed row",
            index: mxr,
            bound: x.n_rows(),
        });
    }
    let seed = x.row(mxr);
    if seed.is_empty() {
        return Err(Error::Precondition(format!(
            "seed row {mxr} has no ones in the residual"
        )));
    }
    let mut col_mask = vec![false; x.n_cols()];
    for &c in seed {
        col_mask[c as usize] = true;
    }
    let rtp = tp_source.row_sums(Some(&col_mask))?;
    let rfp = i_orig.complement_row_sums(&col_mask)?;
    let row_mask = precision_mask(&rtp, &rfp, t_p);
    let ctp = tp_source.col_sums(Some(&row_mask))?;
    let cfp = i_orig.complement_col_sums(&row_mask)?;
    let col_mask = precision_mask(&ctp, &cfp, t_p);
    finish_extension(x, i_orig, row_mask, col_mask)
}

fn extend_col_inner(
    x: &BoolMatrix,
    i_orig: &BoolMatrix,
    mxc: usize,
    t_p: f64,
    tp_source: &BoolMatrix,
) -> Result<Extension> {
    check_same_shape(x, i_orig)?;
    if mxc >= x.n_cols() {
        return Err(Error::IndexOutOfRange {
            context: "seed column",
            index: mxc,
            bound: x.n_cols(),
        });
    }
    let mut row_mask = vec![false; x.n_rows()];
    let mut seed_ones = 0usize;
    for (r, flag) in row_mask.iter_mut().enumerate() {
        if x.get(r, mxc) {
            *flag = true;
            seed_ones += 1;
        }
    }
    if seed_ones == 0 {
        return Err(Error::Precondition(format!(
            "seed column {mxc} has no ones in the residual"
        )));
    }
    let ctp = tp_source.col_sums(Some(&row_mask))?;
    let cfp = i_orig.complement_col_sums(&row_mask)?;
    let col_mask = precision_mask(&ctp, &cfp, t_p);
    let rtp = tp_source.row_sums(Some(&col_mask))?;
    let rfp = i_orig.complement_row_sums(&col_mask)?;
    let row_mask = precision_mask(&rtp, &rfp, t_p);
    finish_extension(x, i_orig, row_mask, col_mask)
}

/// Grow a rectangle from row `mxr` of the residual `x`: seed the column set
/// from the residual row, admit rows whose precision over that column set
/// meets `t_p`, then revise the column set the same way. True positives are
/// counted on `x`, false positives on `i_orig`.
pub fn extend_row_fiber(
    x: &BoolMatrix,
    i_orig: &BoolMatrix,
    mxr: usize,
    t_p: f64,
) -> Result<Extension> {
    extend_row_inner(x, i_orig, mxr, t_p, x)
}

/// Transpose-symmetric twin of [`extend_row_fiber`]: seed the row set from
/// column `mxc` of the residual, admit columns, then revise the row set.
pub fn extend_col_fiber(
    x: &BoolMatrix,
    i_orig: &BoolMatrix,
    mxc: usize,
    t_p: f64,
) -> Result<Extension> {
    extend_col_inner(x, i_orig, mxc, t_p, x)
}

fn rect_from_masks(row_mask: &[bool], col_mask: &[bool]) -> Rectangle {
    Rectangle {
        rows: indices_of(row_mask),
        cols: indices_of(col_mask),
    }
}

fn indices_of(mask: &[bool]) -> Vec<u32> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u32))
        .collect()
}

/// Exact count of product ones falling on zeros of the original matrix,
/// maintained incrementally: per-row sorted lists of the false-positive
/// cells covered so far.
struct FpCells {
    rows: Vec<Vec<u32>>,
    total: u64,
}

impl FpCells {
    fn new(n_rows: usize) -> Self {
        FpCells {
            rows: vec![Vec::new(); n_rows],
            total: 0,
        }
    }

    /// Union in the original-zero cells of a rectangle (phase-1 accept).
    fn cover_rectangle(&mut self, i_orig: &BoolMatrix, row_mask: &[bool], rect_cols: &[u32]) {
        for (r, &in_rect) in row_mask.iter().enumerate() {
            if !in_rect {
                continue;
            }
            let zeros = sorted_diff(rect_cols, i_orig.row(r));
            if zeros.is_empty() {
                continue;
            }
            let (merged, added) = sorted_union_count_new(&self.rows[r], &zeros);
            self.rows[r] = merged;
            self.total += added;
        }
    }

    /// Recompute from scratch against a freshly built factor set (after a
    /// replacement invalidates the incremental state).
    fn rebuild(&mut self, i_orig: &BoolMatrix, factors: &FactorPair) {
        let covered = factors.product();
        self.total = 0;
        for (r, row) in self.rows.iter_mut().enumerate() {
            *row = sorted_diff(covered.row(r), i_orig.row(r));
            self.total += row.len() as u64;
        }
    }
}

fn factors_from_entries(
    i: &BoolMatrix,
    slots: &[Rectangle],
    entries: &[TopFiberEntry],
) -> FactorPair {
    let rects: Vec<Rectangle> = entries
        .iter()
        .map(|e| slots[e.slot - 1].clone())
        .collect();
    FactorPair::from_rectangles(i.n_rows(), i.n_cols(), &rects)
}

/// Run the full greedy search on `i` and return the kept factors with the
/// complete per-iteration trace.
pub fn factorize(i: &BoolMatrix, cfg: &TfmConfig) -> Result<Factorization> {
    cfg.validate()?;
    if i.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let (n, m) = (i.n_rows(), i.n_cols());
    let effective_sr = cfg.sr.unwrap_or(cfg.k).min(n).min(m);
    let effective_k = cfg.k.min(effective_sr);
    let nnz_i = i.nnz() as f64;

    let mut x = i.clone();
    let mut excluded_rows = vec![false; n];
    let mut excluded_cols = vec![false; m];
    let mut slots: Vec<Rectangle> = Vec::new();
    let mut entries: Vec<TopFiberEntry> = Vec::new();
    let mut records: Vec<TraceRecord> = Vec::new();
    let mut fp = FpCells::new(n);

    let mut iteration = 1;
    while iteration <= effective_sr {
        let Some(best) = select_best_fiber(&x, &excluded_rows, &excluded_cols)? else {
            break;
        };
        let tp_source = if cfg.rtp_on_original { i } else { &x };
        let ext = match best.kind {
            FiberKind::Row => extend_row_inner(&x, i, best.index, cfg.t_p, tp_source)?,
            FiberKind::Column => extend_col_inner(&x, i, best.index, cfg.t_p, tp_source)?,
        };
        let rect = rect_from_masks(&ext.row_mask, &ext.col_mask);
        let degenerate = rect.is_empty();
        slots.push(rect);

        let action = if iteration <= effective_k {
            x.subtract_rectangle(&ext.row_mask, &ext.col_mask)?;
            fp.cover_rectangle(i, &ext.row_mask, &slots[iteration - 1].cols);
            entries.push(TopFiberEntry {
                slot: iteration,
                fiber_kind: best.kind,
                fiber_index: best.index,
                gain: ext.gain,
            });
            TraceAction::Accepted
        } else {
            // weakest accepted factor; ties go to the oldest slot
            let (weakest_pos, weakest_gain) = entries
                .iter()
                .enumerate()
                .map(|(pos, e)| (pos, e.gain, e.slot))
                .min_by_key(|&(_, gain, slot)| (gain, slot))
                .map(|(pos, gain, _)| (pos, gain))
                .expect("phase 1 always accepts at least one factor");
            if ext.gain <= weakest_gain {
                match best.kind {
                    FiberKind::Row => excluded_rows[best.index] = true,
                    FiberKind::Column => excluded_cols[best.index] = true,
                }
                TraceAction::Excluded
            } else {
                let evicted_slot = entries[weakest_pos].slot;
                entries[weakest_pos] = TopFiberEntry {
                    slot: iteration,
                    fiber_kind: best.kind,
                    fiber_index: best.index,
                    gain: ext.gain,
                };
                let factors = factors_from_entries(i, &slots, &entries);
                x = residual(i, &factors)?;
                fp.rebuild(i, &factors);
                TraceAction::Replaced { evicted_slot }
            }
        };

        records.push(TraceRecord {
            iteration,
            fiber_kind: best.kind,
            fiber_index: best.index,
            fiber_ones: best.ones,
            true_positives: ext.true_positives,
            gain: ext.gain,
            action,
            coverage_after: 1.0 - (x.nnz() as u64 + fp.total) as f64 / nnz_i,
            uncovered_after: x.nnz() as u64,
            degenerate,
        });

        if x.is_empty() {
            break;
        }
        iteration += 1;
    }

    let factors = factors_from_entries(i, &slots, &entries);
    debug_assert_eq!(
        mismatch_counts(i, &factors)?.false_positives,
        fp.total,
        "incremental fp bookkeeping diverged"
    );
    Ok(Factorization {
        factors,
        entries,
        trace: TfmTrace {
            records,
            slots,
            effective_k,
            effective_sr,
        },
    })
}
