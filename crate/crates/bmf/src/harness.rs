//! Coverage metric, experiment drivers, dataset validation, and report
//! shapes.
//!
//! Two experiment views: fixed rank maximizing coverage ([`run_dbp`]) and
//! minimum rank reaching a coverage target ([`run_afp`], a linear scan from
//! k = 1, since greedy per-k coverage is not guaranteed monotone and binary
//! search would be unsound).

pub mod literature;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::baselines::{naivecol, NaiveColResult};
use crate::boolmat::{mismatch_counts, BoolMatrix, FactorPair};
use crate::topfiberm::{factorize, FiberKind, TfmConfig};
use crate::{Error, Result};

/// Environment variable overriding the fixture directory.
pub const FIXTURE_DIR_ENV: &str = "BMF_FIXTURES";

/// Directory benchmark datasets are loaded from: `$BMF_FIXTURES`, else
/// `fixtures/` relative to the working directory.
pub fn fixture_dir() -> PathBuf {
    std::env::var_os(FIXTURE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fixtures"))
}

/// Path of a fixture file if it has been fetched: the fixture directory
/// joined with `file`, when that file exists.
pub fn fixture_path(file: &str) -> Option<PathBuf> {
    fixture_path_in(&fixture_dir(), file)
}

fn fixture_path_in(dir: &Path, file: &str) -> Option<PathBuf> {
    let path = dir.join(file);
    path.is_file().then_some(path)
}

/// The factorization algorithms the harness can drive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    TopFiberM,
    NaiveCol,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::TopFiberM => "topfiberm",
            Algorithm::NaiveCol => "naivecol",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "topfiberm" => Ok(Algorithm::TopFiberM),
            "naivecol" => Ok(Algorithm::NaiveCol),
            other => Err(Error::Config(format!(
                "unknown algorithm {other:?} (expected topfiberm or naivecol)"
            ))),
        }
    }
}

/// Per-factor report line: how much each factor contributes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorTraceEntry {
    pub factor: usize,
    /// Rows the factor covers (ones in its column of A).
    pub a_count: u64,
    /// Columns the factor covers (ones in its row of B).
    pub b_count: u64,
    /// True when the factor contributes nothing to the product.
    pub empty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber_kind: Option<FiberKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gain: Option<i64>,
}

/// Coverage and error counts of a factor pair against its input.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    /// 1 - (false_negatives + false_positives) / ones_in_i.
    pub coverage: f64,
    pub ones_in_i: u64,
    /// Ones of the input the product misses.
    pub false_negatives: u64,
    /// Product ones where the input is zero.
    pub false_positives: u64,
    pub rank_used: usize,
    pub wall_time: Duration,
    pub per_factor_trace: Vec<FactorTraceEntry>,
}

fn base_factor_trace(f: &FactorPair) -> Vec<FactorTraceEntry> {
    let a_counts = f.a_column_counts();
    let b_counts = f.b_row_counts();
    a_counts
        .into_iter()
        .zip(b_counts)
        .enumerate()
        .map(|(l, (a_count, b_count))| FactorTraceEntry {
            factor: l,
            a_count,
            b_count,
            empty: a_count == 0 || b_count == 0,
            fiber_kind: None,
            fiber_index: None,
            gain: None,
        })
        .collect()
}

/// Score a factor pair against the input it approximates.
pub fn coverage(i: &BoolMatrix, f: &FactorPair) -> Result<CoverageReport> {
    if i.nnz() == 0 {
        return Err(Error::UndefinedCoverage);
    }
    let mm = mismatch_counts(i, f)?;
    let ones = i.nnz() as u64;
    Ok(CoverageReport {
        coverage: 1.0 - (mm.false_negatives + mm.false_positives) as f64 / ones as f64,
        ones_in_i: ones,
        false_negatives: mm.false_negatives,
        false_positives: mm.false_positives,
        rank_used: f.rank(),
        wall_time: Duration::ZERO,
        per_factor_trace: base_factor_trace(f),
    })
}

/// Factors plus their scored report, from one algorithm run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub factors: FactorPair,
    pub report: CoverageReport,
}

/// Run one algorithm at fixed rank and score the result. `sr` applies to
/// the top-fiber search only and defaults to its rank.
pub fn run_algorithm(
    i: &BoolMatrix,
    algorithm: Algorithm,
    k: usize,
    t_p: f64,
    sr: Option<usize>,
) -> Result<RunOutcome> {
    let start = Instant::now();
    let (factors, trace_extra) = match algorithm {
        Algorithm::TopFiberM => {
            let mut cfg = TfmConfig::new(k, t_p);
            cfg.sr = sr;
            let result = factorize(i, &cfg)?;
            let extra: Vec<(Option<FiberKind>, Option<usize>, Option<i64>)> = result
                .entries
                .iter()
                .map(|e| (Some(e.fiber_kind), Some(e.fiber_index), Some(e.gain)))
                .collect();
            (result.factors, extra)
        }
        Algorithm::NaiveCol => {
            let NaiveColResult { factors, trace } = naivecol(i, k)?;
            let extra = trace
                .iter()
                .map(|s| (Some(FiberKind::Column), Some(s.column), None))
                .collect();
            (factors, extra)
        }
    };
    let elapsed = start.elapsed();
    let mut report = coverage(i, &factors)?;
    report.wall_time = elapsed;
    for (entry, (kind, index, gain)) in report.per_factor_trace.iter_mut().zip(trace_extra) {
        entry.fiber_kind = kind;
        entry.fiber_index = index;
        entry.gain = gain;
    }
    Ok(RunOutcome { factors, report })
}

/// Fixed-rank experiment: run at rank `k` and report coverage.
pub fn run_dbp(
    i: &BoolMatrix,
    algorithm: Algorithm,
    k: usize,
    t_p: f64,
    sr: Option<usize>,
) -> Result<CoverageReport> {
    run_algorithm(i, algorithm, k, t_p, sr).map(|o| o.report)
}

/// One point of the minimum-rank scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AfpScanPoint {
    pub k: usize,
    pub coverage: f64,
}

/// Outcome of the minimum-rank scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AfpOutcome {
    /// First rank whose coverage met the target.
    Reached {
        min_rank: usize,
        achieved_coverage: f64,
    },
    /// Scan exhausted; best coverage seen and the first rank reaching it.
    NotReached {
        best_rank: usize,
        best_coverage: f64,
    },
}

/// Result of [`run_afp`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AfpResult {
    pub algorithm: Algorithm,
    pub target_coverage: f64,
    pub t_p_used: f64,
    pub outcome: AfpOutcome,
    pub scan_trace: Vec<AfpScanPoint>,
}

/// Minimum-rank experiment: scan k = 1, 2, ... up to `k_max` (clamped to
/// the matrix dimensions) and return the first rank reaching the coverage
/// target. The top-fiber search runs each rank with `sr = k + 10`.
pub fn run_afp(
    i: &BoolMatrix,
    algorithm: Algorithm,
    target_c: f64,
    t_p: f64,
    k_max: usize,
) -> Result<AfpResult> {
    if !(target_c > 0.0 && target_c <= 1.0) {
        return Err(Error::Config(format!(
            "target coverage must be in (0, 1], got {target_c}"
        )));
    }
    if k_max < 1 {
        return Err(Error::Config("k_max must be at least 1".into()));
    }
    let cap = k_max.min(i.n_rows()).min(i.n_cols());
    let mut scan_trace = Vec::new();
    let mut best: Option<(usize, f64)> = None;
    for k in 1..=cap {
        let sr = match algorithm {
            Algorithm::TopFiberM => Some(k + literature::AFP_SR_MARGIN),
            Algorithm::NaiveCol => None,
        };
        let report = run_dbp(i, algorithm, k, t_p, sr)?;
        scan_trace.push(AfpScanPoint {
            k,
            coverage: report.coverage,
        });
        if report.coverage >= target_c {
            return Ok(AfpResult {
                algorithm,
                target_coverage: target_c,
                t_p_used: t_p,
                outcome: AfpOutcome::Reached {
                    min_rank: k,
                    achieved_coverage: report.coverage,
                },
                scan_trace,
            });
        }
        if best.is_none_or(|(_, c)| report.coverage > c) {
            best = Some((k, report.coverage));
        }
    }
    let (best_rank, best_coverage) = best.expect("cap >= 1 for a nonempty matrix");
    Ok(AfpResult {
        algorithm,
        target_coverage: target_c,
        t_p_used: t_p,
        outcome: AfpOutcome::NotReached {
            best_rank,
            best_coverage,
        },
        scan_trace,
    })
}

/// What a dataset is expected to look like.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DatasetExpectation {
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    /// Expected density at 3 decimals, when given.
    pub density: Option<f64>,
}

impl From<&literature::DatasetInfo> for DatasetExpectation {
    fn from(d: &literature::DatasetInfo) -> Self {
        DatasetExpectation {
            rows: d.rows,
            cols: d.cols,
            nnz: d.nnz,
            density: Some(d.density),
        }
    }
}

/// One compared field of a validation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldCheck {
    pub field: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// Field-by-field dataset validation result.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<FieldCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Compare a loaded matrix against an expectation: dimensions and nnz
/// exactly; density at 3 decimals, accepting both rounding and truncation
/// (published tables do not say which they used).
pub fn validate_dataset(i: &BoolMatrix, expected: &DatasetExpectation) -> ValidationReport {
    let mut checks = vec![
        FieldCheck {
            field: "rows",
            expected: expected.rows.to_string(),
            actual: i.n_rows().to_string(),
            pass: i.n_rows() == expected.rows,
        },
        FieldCheck {
            field: "cols",
            expected: expected.cols.to_string(),
            actual: i.n_cols().to_string(),
            pass: i.n_cols() == expected.cols,
        },
        FieldCheck {
            field: "nnz",
            expected: expected.nnz.to_string(),
            actual: i.nnz().to_string(),
            pass: i.nnz() == expected.nnz,
        },
    ];
    if let Some(density) = expected.density {
        let actual = i.density();
        let expected_milli = (density * 1000.0).round() as i64;
        let rounded = (actual * 1000.0).round() as i64;
        let truncated = (actual * 1000.0).floor() as i64;
        checks.push(FieldCheck {
            field: "density",
            expected: format!("{density:.3}"),
            actual: format!("{actual:.6}"),
            pass: rounded == expected_milli || truncated == expected_milli,
        });
    }
    ValidationReport { checks }
}

/// Flat per-run report, the JSON/CSV emission shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub algorithm: String,
    pub k: usize,
    pub t_p: f64,
    pub sr: Option<usize>,
    pub coverage: f64,
    #[serde(rename = "fp")]
    pub false_positives: u64,
    #[serde(rename = "fn")]
    pub false_negatives: u64,
    pub nnz: u64,
    pub wall_time_ms: u64,
    pub trace: Vec<FactorTraceEntry>,
}

impl RunReport {
    pub fn new(
        dataset: impl Into<String>,
        algorithm: Algorithm,
        k: usize,
        t_p: f64,
        sr: Option<usize>,
        report: &CoverageReport,
    ) -> Self {
        RunReport {
            dataset: dataset.into(),
            algorithm: algorithm.name().to_string(),
            k,
            t_p,
            sr,
            coverage: report.coverage,
            false_positives: report.false_positives,
            false_negatives: report.false_negatives,
            nnz: report.ones_in_i,
            wall_time_ms: report.wall_time.as_millis() as u64,
            trace: report.per_factor_trace.clone(),
        }
    }

    /// Canonical form for byte-comparison across runs: timing zeroed.
    pub fn without_timing(mut self) -> Self {
        self.wall_time_ms = 0;
        self
    }

    pub const CSV_HEADER: &'static str =
        "dataset,algorithm,k,t_p,sr,coverage,fp,fn,nnz,wall_time_ms";

    /// One CSV row matching [`Self::CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let sr = self.sr.map_or(String::new(), |v| v.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.dataset,
            self.algorithm,
            self.k,
            self.t_p,
            sr,
            self.coverage,
            self.false_positives,
            self.false_negatives,
            self.nnz,
            self.wall_time_ms
        )
    }
}

/// Serializable minimum-rank report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AfpReport {
    pub dataset: String,
    pub algorithm: String,
    pub target_coverage: f64,
    pub t_p: f64,
    pub k_max: usize,
    pub outcome: AfpOutcome,
    pub scan_trace: Vec<AfpScanPoint>,
    pub wall_time_ms: u64,
}

impl AfpReport {
    pub fn new(dataset: impl Into<String>, k_max: usize, result: &AfpResult, wall_time: Duration) -> Self {
        AfpReport {
            dataset: dataset.into(),
            algorithm: result.algorithm.name().to_string(),
            target_coverage: result.target_coverage,
            t_p: result.t_p_used,
            k_max,
            outcome: result.outcome,
            scan_trace: result.scan_trace.clone(),
            wall_time_ms: wall_time.as_millis() as u64,
        }
    }

    /// Canonical form for byte-comparison across runs: timing zeroed.
    pub fn without_timing(mut self) -> Self {
        self.wall_time_ms = 0;
        self
    }
}
