//! Sparse Boolean matrices and the bulk operations the factorization and
//! evaluation code is built on.
//!
//! A [`BoolMatrix`] stores the positions of its ones as sorted per-row
//! adjacency lists. Row and column sums are O(nnz) passes, and rectangle
//! operations touch only the selected rows. Complement counts (zeros inside
//! a masked region) are derived as `popcount(mask) - masked ones`; the dense
//! complement is never materialized.

use crate::{Error, Result};

/// Sparse 0/1 matrix with sorted per-row adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolMatrix {
    n_rows: usize,
    n_cols: usize,
    nnz: usize,
    rows: Vec<Vec<u32>>,
}

/// Ones and zeros inside a row-set × col-set rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RectangleCounts {
    pub ones: u64,
    pub zeros: u64,
}

/// Mismatches between a matrix and the Boolean product of a factor pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mismatches {
    /// Ones of the matrix missing from the product.
    pub false_negatives: u64,
    /// Ones of the product that are zeros of the matrix.
    pub false_positives: u64,
}

/// A factor rectangle: the row set and column set it covers, both sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Rectangle {
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
}

impl Rectangle {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() || self.cols.is_empty()
    }

    pub fn area(&self) -> u64 {
        self.rows.len() as u64 * self.cols.len() as u64
    }
}

/// Elements of `a` not in `b`; both inputs sorted and duplicate-free.
pub(crate) fn sorted_diff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut bi = 0;
    for &v in a {
        while bi < b.len() && b[bi] < v {
            bi += 1;
        }
        if bi >= b.len() || b[bi] != v {
            out.push(v);
        }
    }
    out
}

/// Union of two sorted duplicate-free lists, counting elements of `add`
/// that were not already in `old`.
pub(crate) fn sorted_union_count_new(old: &[u32], add: &[u32]) -> (Vec<u32>, u64) {
    let mut out = Vec::with_capacity(old.len() + add.len());
    let (mut a, mut b) = (0, 0);
    let mut added = 0u64;
    while a < old.len() && b < add.len() {
        match old[a].cmp(&add[b]) {
            std::cmp::Ordering::Less => {
                out.push(old[a]);
                a += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(add[b]);
                b += 1;
                added += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(old[a]);
                a += 1;
                b += 1;
            }
        }
    }
    out.extend_from_slice(&old[a..]);
    for &v in &add[b..] {
        out.push(v);
        added += 1;
    }
    (out, added)
}

fn check_mask(mask: &[bool], expected: usize, context: &'static str) -> Result<()> {
    if mask.len() != expected {
        return Err(Error::Dimension {
            context,
            expected,
            actual: mask.len(),
        });
    }
    Ok(())
}

fn popcount(mask: &[bool]) -> usize {
    mask.iter().filter(|&&b| b).count()
}

impl BoolMatrix {
    /// All-zeros matrix of the given shape.
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        assert!(n_cols <= u32::MAX as usize, "column count exceeds u32 range");
        assert!(n_rows <= u32::MAX as usize, "row count exceeds u32 range");
        BoolMatrix {
            n_rows,
            n_cols,
            nnz: 0,
            rows: vec![Vec::new(); n_rows],
        }
    }

    /// Build from (row, col) entries. Duplicates collapse to a single one;
    /// the second element of the return value counts them.
    pub fn from_entries(
        n_rows: usize,
        n_cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<(Self, usize)> {
        let mut m = BoolMatrix::zeros(n_rows, n_cols);
        for (r, c) in entries {
            if r >= n_rows {
                return Err(Error::IndexOutOfRange {
                    context: "entry row",
                    index: r,
                    bound: n_rows,
                });
            }
            if c >= n_cols {
                return Err(Error::IndexOutOfRange {
                    context: "entry column",
                    index: c,
                    bound: n_cols,
                });
            }
            m.rows[r].push(c as u32);
        }
        let mut duplicates = 0;
        for row in &mut m.rows {
            row.sort_unstable();
            let before = row.len();
            row.dedup();
            duplicates += before - row.len();
            m.nnz += row.len();
        }
        Ok((m, duplicates))
    }

    /// Fixture helper: one string per row, `'0'`/`'1'` per cell.
    pub fn from_dense(rows: &[&str]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut m = BoolMatrix::zeros(n_rows, n_cols);
        for (r, line) in rows.iter().enumerate() {
            if line.len() != n_cols {
                return Err(Error::Dimension {
                    context: "dense row length",
                    expected: n_cols,
                    actual: line.len(),
                });
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '1' => {
                        m.rows[r].push(c as u32);
                        m.nnz += 1;
                    }
                    '0' => {}
                    other => {
                        return Err(Error::Config(format!(
                            "dense cell must be 0 or 1, got {other:?}"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Number of ones.
    pub fn nnz(&self) -> usize {
        self.nnz
    }

    pub fn is_empty(&self) -> bool {
        self.nnz == 0
    }

    /// Density nnz / (rows · cols); 0 for degenerate shapes.
    pub fn density(&self) -> f64 {
        if self.n_rows == 0 || self.n_cols == 0 {
            return 0.0;
        }
        self.nnz as f64 / (self.n_rows as f64 * self.n_cols as f64)
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        r < self.n_rows && self.rows[r].binary_search(&(c as u32)).is_ok()
    }

    /// Set (r, c) to one; returns false if it was already set.
    pub fn insert(&mut self, r: usize, c: usize) -> Result<bool> {
        if r >= self.n_rows {
            return Err(Error::IndexOutOfRange {
                context: "row",
                index: r,
                bound: self.n_rows,
            });
        }
        if c >= self.n_cols {
            return Err(Error::IndexOutOfRange {
                context: "column",
                index: c,
                bound: self.n_cols,
            });
        }
        match self.rows[r].binary_search(&(c as u32)) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.rows[r].insert(pos, c as u32);
                self.nnz += 1;
                Ok(true)
            }
        }
    }

    /// Sorted column indices of the ones in row `r`.
    pub fn row(&self, r: usize) -> &[u32] {
        &self.rows[r]
    }

    /// Iterate ones in row-major order.
    pub fn iter_ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, cols)| cols.iter().map(move |&c| (r, c as usize)))
    }

    pub fn transpose(&self) -> BoolMatrix {
        let mut rows = vec![Vec::new(); self.n_cols];
        for (r, cols) in self.rows.iter().enumerate() {
            for &c in cols {
                rows[c as usize].push(r as u32);
            }
        }
        BoolMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            nnz: self.nnz,
            rows,
        }
    }

    /// Ones per row, restricted to mask-true columns when a mask is given.
    pub fn row_sums(&self, col_mask: Option<&[bool]>) -> Result<Vec<u32>> {
        if let Some(mask) = col_mask {
            check_mask(mask, self.n_cols, "row_sums column mask")?;
            Ok(self
                .rows
                .iter()
                .map(|cols| cols.iter().filter(|&&c| mask[c as usize]).count() as u32)
                .collect())
        } else {
            Ok(self.rows.iter().map(|cols| cols.len() as u32).collect())
        }
    }

    /// Ones per column, restricted to mask-true rows when a mask is given.
    pub fn col_sums(&self, row_mask: Option<&[bool]>) -> Result<Vec<u32>> {
        if let Some(mask) = row_mask {
            check_mask(mask, self.n_rows, "col_sums row mask")?;
        }
        let mut sums = vec![0u32; self.n_cols];
        for (r, cols) in self.rows.iter().enumerate() {
            if row_mask.is_some_and(|mask| !mask[r]) {
                continue;
            }
            for &c in cols {
                sums[c as usize] += 1;
            }
        }
        Ok(sums)
    }

    /// Zeros per row inside mask-true columns: `popcount(mask) - masked ones`.
    pub fn complement_row_sums(&self, col_mask: &[bool]) -> Result<Vec<u32>> {
        let width = popcount(col_mask) as u32;
        let ones = self.row_sums(Some(col_mask))?;
        Ok(ones.into_iter().map(|o| width - o).collect())
    }

    /// Zeros per column inside mask-true rows.
    pub fn complement_col_sums(&self, row_mask: &[bool]) -> Result<Vec<u32>> {
        let height = popcount(row_mask) as u32;
        let ones = self.col_sums(Some(row_mask))?;
        Ok(ones.into_iter().map(|o| height - o).collect())
    }

    /// Count ones and zeros inside the rectangle `row_mask × col_mask`.
    pub fn rectangle_counts(&self, row_mask: &[bool], col_mask: &[bool]) -> Result<RectangleCounts> {
        check_mask(row_mask, self.n_rows, "rectangle row mask")?;
        check_mask(col_mask, self.n_cols, "rectangle column mask")?;
        let mut ones: u64 = 0;
        for (r, cols) in self.rows.iter().enumerate() {
            if !row_mask[r] {
                continue;
            }
            ones += cols.iter().filter(|&&c| col_mask[c as usize]).count() as u64;
        }
        let total = popcount(row_mask) as u64 * popcount(col_mask) as u64;
        Ok(RectangleCounts {
            ones,
            zeros: total - ones,
        })
    }

    /// Clear every entry inside the rectangle. Idempotent.
    pub fn subtract_rectangle(&mut self, row_mask: &[bool], col_mask: &[bool]) -> Result<()> {
        check_mask(row_mask, self.n_rows, "rectangle row mask")?;
        check_mask(col_mask, self.n_cols, "rectangle column mask")?;
        for (r, cols) in self.rows.iter_mut().enumerate() {
            if !row_mask[r] {
                continue;
            }
            let before = cols.len();
            cols.retain(|&c| !col_mask[c as usize]);
            self.nnz -= before - cols.len();
        }
        Ok(())
    }

    fn check_same_shape(&self, rows: usize, cols: usize, context: &'static str) -> Result<()> {
        if self.n_rows != rows {
            return Err(Error::Dimension {
                context,
                expected: rows,
                actual: self.n_rows,
            });
        }
        if self.n_cols != cols {
            return Err(Error::Dimension {
                context,
                expected: cols,
                actual: self.n_cols,
            });
        }
        Ok(())
    }
}

/// A pair of Boolean factors: `a` is n × k (one column per factor), `b` is
/// k × m (one row per factor).
///
/// `b` is stored with factors as rows, so the Boolean product is
/// `(a ∘ b)[i, j] = 1` iff some factor `l` has `a[i, l] = 1` and `b[l, j] = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPair {
    a: BoolMatrix,
    b: BoolMatrix,
}

impl FactorPair {
    /// Pair up factors; `a.n_cols` must equal `b.n_rows`.
    pub fn new(a: BoolMatrix, b: BoolMatrix) -> Result<Self> {
        if a.n_cols != b.n_rows {
            return Err(Error::Dimension {
                context: "factor rank (a columns vs b rows)",
                expected: a.n_cols,
                actual: b.n_rows,
            });
        }
        Ok(FactorPair { a, b })
    }

    /// Build factors from rectangles over an n × m matrix: rectangle `l`
    /// becomes column `l` of `a` and row `l` of `b`.
    pub fn from_rectangles(n_rows: usize, n_cols: usize, rects: &[Rectangle]) -> Self {
        let k = rects.len();
        let mut a = BoolMatrix::zeros(n_rows, k);
        let mut b = BoolMatrix::zeros(k, n_cols);
        for (l, rect) in rects.iter().enumerate() {
            for &r in &rect.rows {
                a.rows[r as usize].push(l as u32);
                a.nnz += 1;
            }
            b.rows[l] = rect.cols.clone();
            b.nnz += rect.cols.len();
        }
        FactorPair { a, b }
    }

    pub fn a(&self) -> &BoolMatrix {
        &self.a
    }

    pub fn b(&self) -> &BoolMatrix {
        &self.b
    }

    pub fn rank(&self) -> usize {
        self.a.n_cols
    }

    /// Ones per factor in `a` (column sums of `a`).
    pub fn a_column_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.rank()];
        for cols in &self.a.rows {
            for &l in cols {
                counts[l as usize] += 1;
            }
        }
        counts
    }

    /// Ones per factor in `b` (row sums of `b`).
    pub fn b_row_counts(&self) -> Vec<u64> {
        self.b.rows.iter().map(|r| r.len() as u64).collect()
    }

    /// The Boolean (max–min) product `a ∘ b`.
    pub fn product(&self) -> BoolMatrix {
        let n = self.a.n_rows;
        let m = self.b.n_cols;
        let mut out = BoolMatrix::zeros(n, m);
        let mut seen = vec![false; m];
        let mut touched: Vec<u32> = Vec::new();
        for r in 0..n {
            for &l in &self.a.rows[r] {
                for &c in &self.b.rows[l as usize] {
                    if !seen[c as usize] {
                        seen[c as usize] = true;
                        touched.push(c);
                    }
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                seen[c as usize] = false;
            }
            out.nnz += touched.len();
            out.rows[r] = std::mem::take(&mut touched);
        }
        out
    }
}

/// The Boolean product of a factor pair. Same as [`FactorPair::product`].
pub fn bool_product(f: &FactorPair) -> BoolMatrix {
    f.product()
}

/// Ones of `i` left uncovered by the product of `f`. False positives of `f`
/// are not part of the residual: the result is a subset of the ones of `i`.
pub fn residual(i: &BoolMatrix, f: &FactorPair) -> Result<BoolMatrix> {
    f.a.check_same_shape(i.n_rows, f.a.n_cols, "residual factor rows")?;
    f.b.check_same_shape(f.b.n_rows, i.n_cols, "residual factor columns")?;
    let mut out = BoolMatrix::zeros(i.n_rows, i.n_cols);
    let mut seen = vec![false; i.n_cols];
    let mut touched: Vec<u32> = Vec::new();
    for r in 0..i.n_rows {
        mark_covered_row(f, r, &mut seen, &mut touched);
        let row: Vec<u32> = i.rows[r]
            .iter()
            .copied()
            .filter(|&c| !seen[c as usize])
            .collect();
        for &c in &touched {
            seen[c as usize] = false;
        }
        touched.clear();
        out.nnz += row.len();
        out.rows[r] = row;
    }
    Ok(out)
}

/// Count both error types of `f` against `i` without materializing the
/// product: ones of `i` the product misses, and product ones where `i` is 0.
pub fn mismatch_counts(i: &BoolMatrix, f: &FactorPair) -> Result<Mismatches> {
    f.a.check_same_shape(i.n_rows, f.a.n_cols, "mismatch factor rows")?;
    f.b.check_same_shape(f.b.n_rows, i.n_cols, "mismatch factor columns")?;
    let mut false_negatives: u64 = 0;
    let mut false_positives: u64 = 0;
    let mut seen = vec![false; i.n_cols];
    let mut touched: Vec<u32> = Vec::new();
    for r in 0..i.n_rows {
        mark_covered_row(f, r, &mut seen, &mut touched);
        let overlap = i.rows[r].iter().filter(|&&c| seen[c as usize]).count() as u64;
        false_negatives += i.rows[r].len() as u64 - overlap;
        false_positives += touched.len() as u64 - overlap;
        for &c in &touched {
            seen[c as usize] = false;
        }
        touched.clear();
    }
    Ok(Mismatches {
        false_negatives,
        false_positives,
    })
}

/// Mark the columns covered by row `r` of the product into `seen`,
/// recording which cells were set in `touched` so the caller can reset.
fn mark_covered_row(f: &FactorPair, r: usize, seen: &mut [bool], touched: &mut Vec<u32>) {
    for &l in &f.a.rows[r] {
        for &c in &f.b.rows[l as usize] {
            if !seen[c as usize] {
                seen[c as usize] = true;
                touched.push(c);
            }
        }
    }
}
