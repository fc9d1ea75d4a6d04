//! Command-line front end for the Boolean matrix factorization toolkit.
//!
//! Reports go to stdout; everything else (diagnostics, progress, issue
//! summaries) goes to stderr. Exit codes: 0 success, 1 validation
//! mismatch, 2 bad arguments, 3 input could not be read or parsed,
//! 4 algorithm precondition violated, 5 internal error.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bmf::harness::{
    fixture_path, literature, run_afp, validate_dataset, AfpReport, Algorithm,
    DatasetExpectation, RunReport,
};
use bmf::io::{read_dense_csv, read_matrix_market, write_matrix_market};
use bmf::rdf::{build_slices, parse_ntriples_file, run_slices_with_threads, write_slice_files, ParseMode};
use bmf::topfiberm::TfmConfig;
use bmf::{boolmat::BoolMatrix, Error};

#[derive(Parser)]
#[command(name = "bmf", version, about = "Boolean matrix factorization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factorize a Boolean matrix at fixed rank and report coverage
    Factorize(FactorizeArgs),
    /// Scan ranks upward until a coverage target is reached
    Afp(AfpArgs),
    /// Check a matrix file against expected dimensions, count and density
    Validate(ValidateArgs),
    /// Slice an N-Triples file by predicate and factorize every slice
    Rdf(RdfArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    /// Matrix Market coordinate pattern file
    MatrixMarket,
    /// Dense 0/1 cells, comma-separated, one row per line
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Topfiberm,
    Naivecol,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Algorithm {
        match a {
            AlgoArg::Topfiberm => Algorithm::TopFiberM,
            AlgoArg::Naivecol => Algorithm::NaiveCol,
        }
    }
}

#[derive(Parser)]
struct FactorizeArgs {
    /// Input matrix file (gzipped Matrix Market accepted with .gz)
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::MatrixMarket)]
    format: InputFormat,
    /// Factorization rank: number of factors to keep
    #[arg(long)]
    k: usize,
    /// Precision threshold in (0, 1]
    #[arg(long, default_value_t = 0.5)]
    tp: f64,
    /// Search-rank budget for the top-fiber algorithm (defaults to k)
    #[arg(long)]
    sr: Option<usize>,
    #[arg(long, value_enum, default_value_t = AlgoArg::Topfiberm)]
    algorithm: AlgoArg,
    /// Dataset label used in the report (defaults to the input file stem)
    #[arg(long)]
    dataset: Option<String>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report: ReportFormat,
    /// Write factor matrices A (rows × factors) and B (factors × columns) here
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Zero wall-clock fields so repeated runs emit identical bytes
    #[arg(long)]
    omit_timing: bool,
}

#[derive(Parser)]
struct AfpArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::MatrixMarket)]
    format: InputFormat,
    /// Coverage target in (0, 1]
    #[arg(long)]
    target: f64,
    /// Precision threshold in (0, 1]
    #[arg(long, default_value_t = 0.5)]
    tp: f64,
    /// Highest rank to try (clamped to the matrix dimensions)
    #[arg(long, default_value_t = 150)]
    k_max: usize,
    #[arg(long, value_enum, default_value_t = AlgoArg::Topfiberm)]
    algorithm: AlgoArg,
    #[arg(long)]
    dataset: Option<String>,
    /// Zero wall-clock fields so repeated runs emit identical bytes
    #[arg(long)]
    omit_timing: bool,
}

#[derive(Parser)]
struct ValidateArgs {
    /// Known dataset name: chess, dblp, firewall1, mushroom or paleo
    #[arg(long)]
    dataset: Option<String>,
    /// Matrix file; defaults to the dataset's fixture location
    /// (BMF_FIXTURES or ./fixtures)
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::MatrixMarket)]
    format: InputFormat,
    /// Expectation as ROWSxCOLS:NNZ[:DENSITY], e.g. 3196x76:118252:0.487
    #[arg(long)]
    expect: Option<String>,
}

#[derive(Parser)]
struct RdfArgs {
    /// N-Triples file, optionally gzipped (.gz)
    #[arg(long)]
    input: PathBuf,
    /// Abort on the first malformed line instead of skipping it
    #[arg(long)]
    strict: bool,
    /// Keep predicates with at least this many statements
    #[arg(long, default_value_t = 1000)]
    min_count: usize,
    /// Factorization rank per slice
    #[arg(long, default_value_t = 100)]
    k: usize,
    /// Precision threshold in (0, 1]; defaults to 0.5, noted in the report
    #[arg(long)]
    tp: Option<f64>,
    /// Search-rank budget per slice (defaults to k)
    #[arg(long)]
    sr: Option<usize>,
    /// Worker threads for slice runs (defaults to all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Write per-slice matrices and dictionaries here
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Zero wall-clock fields so repeated runs emit identical bytes
    #[arg(long)]
    omit_timing: bool,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, e: impl Display) -> Self {
        CliError {
            code,
            message: e.to_string(),
        }
    }

    /// Bad command-line arguments, caught before any input is read.
    fn args(e: impl Display) -> Self {
        Self::new(2, e)
    }

    /// Failure while reading or parsing input.
    fn load(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Io { .. } => Self::new(3, e),
            other => Self::new(4, other),
        }
    }

    /// Failure while running an algorithm on loaded input.
    fn run(e: Error) -> Self {
        match e {
            Error::Dimension { .. } | Error::IndexOutOfRange { .. } => Self::new(5, e),
            other => Self::new(4, other),
        }
    }

    /// Failure while writing output files.
    fn write(e: Error) -> Self {
        Self::new(5, e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Factorize(args) => cmd_factorize(args),
        Cmd::Afp(args) => cmd_afp(args),
        Cmd::Validate(args) => cmd_validate(args),
        Cmd::Rdf(args) => cmd_rdf(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

/// Print one report line to stdout. A closed pipe (e.g. piping into
/// `head`) is not an error; any other write failure is internal.
fn emit(line: &str) -> Result<(), CliError> {
    use std::io::Write;
    match writeln!(std::io::stdout(), "{line}") {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(CliError::new(5, e)),
    }
}

fn check_tp(tp: f64) -> Result<(), CliError> {
    if tp > 0.0 && tp <= 1.0 {
        Ok(())
    } else {
        Err(CliError::args(format!(
            "--tp must be in (0, 1], got {tp}"
        )))
    }
}

fn load_matrix(path: &Path, format: InputFormat) -> Result<BoolMatrix, CliError> {
    let (matrix, duplicates) = match format {
        InputFormat::MatrixMarket => {
            let (m, report) = read_matrix_market(path).map_err(CliError::load)?;
            (m, report.duplicates_collapsed)
        }
        InputFormat::Csv => (read_dense_csv(path).map_err(CliError::load)?, 0),
    };
    if duplicates > 0 {
        eprintln!(
            "note: {duplicates} duplicate entries collapsed while reading {}",
            path.display()
        );
    }
    Ok(matrix)
}

fn dataset_label(explicit: Option<String>, input: &Path) -> String {
    explicit.unwrap_or_else(|| {
        input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "input".into())
    })
}

fn cmd_factorize(args: FactorizeArgs) -> Result<u8, CliError> {
    // Arguments are checked before the input file is touched.
    check_tp(args.tp)?;
    let mut cfg = TfmConfig::new(args.k, args.tp);
    cfg.sr = args.sr;
    cfg.validate().map_err(CliError::args)?;

    let matrix = load_matrix(&args.input, args.format)?;
    let algorithm = Algorithm::from(args.algorithm);
    let outcome = bmf::harness::run_algorithm(&matrix, algorithm, args.k, args.tp, args.sr)
        .map_err(CliError::run)?;

    if let Some(dir) = &args.output_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::write(Error::from(e).with_path(dir)))?;
        write_matrix_market(
            dir.join("A.mtx"),
            outcome.factors.a(),
            &["factor matrix A: rows x factors; entry (r, f) means factor f covers row r"],
        )
        .map_err(CliError::write)?;
        write_matrix_market(
            dir.join("B.mtx"),
            outcome.factors.b(),
            &["factor matrix B: factors x columns; entry (f, c) means factor f covers column c"],
        )
        .map_err(CliError::write)?;
        eprintln!("wrote factors to {}", dir.display());
    }

    let mut report = RunReport::new(
        dataset_label(args.dataset, &args.input),
        algorithm,
        args.k,
        args.tp,
        args.sr,
        &outcome.report,
    );
    if args.omit_timing {
        report = report.without_timing();
    }
    match args.report {
        ReportFormat::Json => {
            emit(&serde_json::to_string(&report).map_err(|e| CliError::new(5, e))?)?;
        }
        ReportFormat::Csv => {
            emit(RunReport::CSV_HEADER)?;
            emit(&report.csv_row())?;
        }
    }
    Ok(0)
}

fn cmd_afp(args: AfpArgs) -> Result<u8, CliError> {
    check_tp(args.tp)?;
    if !(args.target > 0.0 && args.target <= 1.0) {
        return Err(CliError::args(format!(
            "--target must be in (0, 1], got {}",
            args.target
        )));
    }
    if args.k_max < 1 {
        return Err(CliError::args("--k-max must be at least 1"));
    }

    let matrix = load_matrix(&args.input, args.format)?;
    let start = std::time::Instant::now();
    let result = run_afp(
        &matrix,
        Algorithm::from(args.algorithm),
        args.target,
        args.tp,
        args.k_max,
    )
    .map_err(CliError::run)?;
    let mut report = AfpReport::new(
        dataset_label(args.dataset, &args.input),
        args.k_max,
        &result,
        start.elapsed(),
    );
    if args.omit_timing {
        report = report.without_timing();
    }
    emit(&serde_json::to_string(&report).map_err(|e| CliError::new(5, e))?)?;
    Ok(0)
}

fn parse_expect(spec: &str) -> Result<DatasetExpectation, CliError> {
    let bad = || CliError::args(format!("--expect must be ROWSxCOLS:NNZ[:DENSITY], got {spec:?}"));
    let mut parts = spec.split(':');
    let shape = parts.next().ok_or_else(bad)?;
    let (rows, cols) = shape.split_once('x').ok_or_else(bad)?;
    let rows = rows.parse().map_err(|_| bad())?;
    let cols = cols.parse().map_err(|_| bad())?;
    let nnz = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let density = match parts.next() {
        Some(d) => Some(d.parse().map_err(|_| bad())?),
        None => None,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(DatasetExpectation {
        rows,
        cols,
        nnz,
        density,
    })
}

fn cmd_validate(args: ValidateArgs) -> Result<u8, CliError> {
    let (expectation, input) = match (&args.dataset, &args.expect) {
        (Some(name), None) => {
            let info = literature::dataset(name)
                .ok_or_else(|| CliError::args(format!("unknown dataset {name:?}")))?;
            let input = match args.input {
                Some(path) => path,
                None => fixture_path(info.fixture_file).ok_or_else(|| {
                    CliError::new(
                        3,
                        format!(
                            "fixture {} not found; fetch it per fixtures/manifest.txt \
                             or point BMF_FIXTURES at it",
                            info.fixture_file
                        ),
                    )
                })?,
            };
            (DatasetExpectation::from(info), input)
        }
        (None, Some(spec)) => {
            let input = args
                .input
                .ok_or_else(|| CliError::args("--expect requires --input"))?;
            (parse_expect(spec)?, input)
        }
        _ => {
            return Err(CliError::args(
                "give exactly one of --dataset NAME or --input FILE --expect SPEC",
            ))
        }
    };

    let matrix = load_matrix(&input, args.format)?;
    let report = validate_dataset(&matrix, &expectation);
    emit(&serde_json::to_string(&report).map_err(|e| CliError::new(5, e))?)?;
    if report.passed() {
        Ok(0)
    } else {
        eprintln!("validation failed for {}", input.display());
        Ok(1)
    }
}

fn cmd_rdf(args: RdfArgs) -> Result<u8, CliError> {
    let tp = args.tp.unwrap_or(0.5);
    check_tp(tp)?;
    if args.min_count < 1 {
        return Err(CliError::args("--min-count must be at least 1"));
    }
    if let Some(threads) = args.threads {
        if threads < 1 {
            return Err(CliError::args("--threads must be at least 1"));
        }
    }
    let mut cfg = TfmConfig::new(args.k, tp);
    cfg.sr = args.sr;
    cfg.validate().map_err(CliError::args)?;

    let mode = if args.strict {
        ParseMode::Strict
    } else {
        ParseMode::Lenient
    };
    let parsed = parse_ntriples_file(&args.input, mode).map_err(CliError::load)?;
    if !parsed.issues.is_empty() {
        eprintln!(
            "note: skipped {} malformed line(s); first at line {}: {}",
            parsed.issues.len(),
            parsed.issues[0].line,
            parsed.issues[0].message
        );
    }
    eprintln!("parsed {} triples from {}", parsed.triples.len(), args.input.display());

    let slices = build_slices(parsed.triples, args.min_count).map_err(CliError::run)?;
    eprintln!(
        "built {} slice(s) with at least {} statements each",
        slices.len(),
        args.min_count
    );
    if let Some(dir) = &args.output_dir {
        let files = write_slice_files(dir, &slices).map_err(CliError::write)?;
        eprintln!("wrote {} slice file set(s) to {}", files.len(), dir.display());
    }

    let mut report =
        run_slices_with_threads(&slices, &cfg, args.threads).map_err(CliError::run)?;
    if args.tp.is_none() {
        report.notes.push("t_p not specified; defaulted to 0.5".into());
    }
    if args.omit_timing {
        report = report.without_timing();
    }
    emit(&serde_json::to_string(&report).map_err(|e| CliError::new(5, e))?)?;
    Ok(0)
}
