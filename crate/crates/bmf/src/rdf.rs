//! RDF ingestion: stream an N-Triples file into per-predicate Boolean
//! slices (subject × object matrices) and drive factorization over them.
//!
//! Each kept predicate gets local subject/object dictionaries in first-seen
//! order, so slices never contain all-zero rows or columns. Objects may be
//! literals; they are dictionary-encoded like IRIs.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolmat::BoolMatrix;
use crate::harness::coverage;
use crate::io::{open_text, write_matrix_market};
use crate::topfiberm::{factorize, TfmConfig};
use crate::{Error, Result};

/// One RDF term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal {
        lexical: String,
        lang: Option<String>,
        datatype: Option<String>,
    },
}

impl Term {
    /// Canonical N-Triples serialization; also the dictionary-file form.
    pub fn to_ntriples(&self) -> String {
        match self {
            Term::Iri(iri) => format!("<{iri}>"),
            Term::Blank(label) => format!("_:{label}"),
            Term::Literal {
                lexical,
                lang,
                datatype,
            } => {
                let mut out = String::with_capacity(lexical.len() + 2);
                out.push('"');
                for c in lexical.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c if (c as u32) < 0x20 => {
                            out.push_str(&format!("\\u{:04X}", c as u32));
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
                if let Some(lang) = lang {
                    out.push('@');
                    out.push_str(lang);
                } else if let Some(dt) = datatype {
                    out.push_str("^^<");
                    out.push_str(dt);
                    out.push('>');
                }
                out
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ntriples())
    }
}

/// One parsed statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

/// Whether malformed lines abort the parse or are skipped and reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseMode {
    Strict,
    Lenient,
}

/// A malformed line found in lenient mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseIssue {
    /// 1-based line number.
    pub line: usize,
    /// Byte range of the offending region within the line.
    pub span: (usize, usize),
    pub message: String,
}

/// Parse output: triples in file order plus, in lenient mode, the lines
/// that were skipped.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ParsedTriples {
    pub triples: Vec<Triple>,
    pub issues: Vec<ParseIssue>,
}

struct TermError {
    start: usize,
    end: usize,
    message: String,
}

struct Scanner<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(s: &'a str) -> Self {
        Scanner { s, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn err(&self, start: usize, message: impl Into<String>) -> TermError {
        TermError {
            start,
            end: self.pos.max(start + 1).min(self.s.len().max(start + 1)),
            message: message.into(),
        }
    }
}

fn is_blank_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.'
}

fn parse_iri_body(sc: &mut Scanner) -> std::result::Result<String, TermError> {
    let start = sc.pos - 1;
    let mut iri = String::new();
    loop {
        match sc.bump() {
            Some('>') => return Ok(iri),
            Some(c) if c == ' ' || c == '\t' || c == '<' || c == '"' => {
                return Err(sc.err(start, format!("invalid character {c:?} inside IRI")))
            }
            Some(c) => iri.push(c),
            None => return Err(sc.err(start, "unterminated IRI, expected '>'")),
        }
    }
}

fn parse_unicode_escape(
    sc: &mut Scanner,
    start: usize,
    digits: usize,
) -> std::result::Result<char, TermError> {
    let mut value = 0u32;
    for _ in 0..digits {
        let c = sc
            .bump()
            .ok_or_else(|| sc.err(start, "truncated unicode escape"))?;
        let d = c
            .to_digit(16)
            .ok_or_else(|| sc.err(start, format!("invalid hex digit {c:?} in unicode escape")))?;
        value = value * 16 + d;
    }
    char::from_u32(value).ok_or_else(|| sc.err(start, format!("invalid code point U+{value:04X}")))
}

fn parse_term(sc: &mut Scanner) -> std::result::Result<Term, TermError> {
    sc.skip_ws();
    let start = sc.pos;
    match sc.bump() {
        Some('<') => parse_iri_body(sc).map(Term::Iri),
        Some('_') => {
            if sc.bump() != Some(':') {
                return Err(sc.err(start, "expected ':' after '_' in blank node"));
            }
            let mut label = String::new();
            while let Some(c) = sc.peek() {
                if is_blank_label_char(c) {
                    label.push(c);
                    sc.bump();
                } else {
                    break;
                }
            }
            if label.is_empty() {
                return Err(sc.err(start, "empty blank node label"));
            }
            Ok(Term::Blank(label))
        }
        Some('"') => {
            let mut lexical = String::new();
            loop {
                match sc.bump() {
                    Some('"') => break,
                    Some('\\') => {
                        let escaped = match sc.bump() {
                            Some('t') => '\t',
                            Some('n') => '\n',
                            Some('r') => '\r',
                            Some('b') => '\u{8}',
                            Some('f') => '\u{c}',
                            Some('"') => '"',
                            Some('\'') => '\'',
                            Some('\\') => '\\',
                            Some('u') => parse_unicode_escape(sc, start, 4)?,
                            Some('U') => parse_unicode_escape(sc, start, 8)?,
                            Some(c) => {
                                return Err(sc.err(start, format!("unknown escape \\{c}")))
                            }
                            None => return Err(sc.err(start, "truncated escape at end of line")),
                        };
                        lexical.push(escaped);
                    }
                    Some(c) => lexical.push(c),
                    None => return Err(sc.err(start, "unterminated literal, expected '\"'")),
                }
            }
            match sc.peek() {
                Some('@') => {
                    sc.bump();
                    let mut lang = String::new();
                    while let Some(c) = sc.peek() {
                        if c.is_ascii_alphanumeric() || c == '-' {
                            lang.push(c);
                            sc.bump();
                        } else {
                            break;
                        }
                    }
                    if lang.is_empty() {
                        return Err(sc.err(start, "empty language tag"));
                    }
                    Ok(Term::Literal {
                        lexical,
                        lang: Some(lang),
                        datatype: None,
                    })
                }
                Some('^') => {
                    sc.bump();
                    if sc.bump() != Some('^') {
                        return Err(sc.err(start, "expected '^^' before datatype"));
                    }
                    if sc.bump() != Some('<') {
                        return Err(sc.err(start, "expected '<' after '^^'"));
                    }
                    let dt = parse_iri_body(sc)?;
                    Ok(Term::Literal {
                        lexical,
                        lang: None,
                        datatype: Some(dt),
                    })
                }
                _ => Ok(Term::Literal {
                    lexical,
                    lang: None,
                    datatype: None,
                }),
            }
        }
        Some(c) => Err(sc.err(start, format!("expected term, found {c:?}"))),
        None => Err(sc.err(start, "expected term, found end of line")),
    }
}

fn parse_line(line: &str) -> std::result::Result<Option<Triple>, TermError> {
    let mut sc = Scanner::new(line);
    sc.skip_ws();
    match sc.peek() {
        None | Some('#') => return Ok(None),
        _ => {}
    }
    let subject = parse_term(&mut sc)?;
    if matches!(subject, Term::Literal { .. }) {
        return Err(sc.err(0, "subject must be an IRI or blank node, not a literal"));
    }
    let predicate = parse_term(&mut sc)?;
    if !matches!(predicate, Term::Iri(_)) {
        return Err(sc.err(0, "predicate must be an IRI"));
    }
    let object = parse_term(&mut sc)?;
    sc.skip_ws();
    let dot_at = sc.pos;
    if sc.bump() != Some('.') {
        return Err(sc.err(dot_at, "expected '.' terminating the statement"));
    }
    sc.skip_ws();
    match sc.peek() {
        None | Some('#') => Ok(Some(Triple {
            subject,
            predicate,
            object,
        })),
        Some(c) => Err(sc.err(sc.pos, format!("unexpected {c:?} after '.'"))),
    }
}

/// Parse N-Triples from a buffered reader. Lenient mode skips malformed
/// lines and reports them as issues; strict mode fails on the first one
/// with its line number and byte range.
pub fn parse_ntriples(reader: impl BufRead, mode: ParseMode) -> Result<ParsedTriples> {
    let mut out = ParsedTriples::default();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        match parse_line(&line) {
            Ok(Some(triple)) => out.triples.push(triple),
            Ok(None) => {}
            Err(e) => match mode {
                ParseMode::Strict => {
                    return Err(Error::parse(
                        line_no,
                        format!("bytes {}..{}: {}", e.start, e.end, e.message),
                    ))
                }
                ParseMode::Lenient => out.issues.push(ParseIssue {
                    line: line_no,
                    span: (e.start, e.end),
                    message: e.message,
                }),
            },
        }
    }
    Ok(out)
}

/// Parse an N-Triples file, transparently decompressing `.gz`.
pub fn parse_ntriples_file(path: impl AsRef<Path>, mode: ParseMode) -> Result<ParsedTriples> {
    let path = path.as_ref();
    parse_ntriples(open_text(path)?, mode).map_err(|e| e.with_path(path))
}

/// The Boolean subject × object matrix of one predicate.
#[derive(Clone, Debug, PartialEq)]
pub struct PredicateSlice {
    /// Predicate IRI (without angle brackets).
    pub predicate: String,
    pub matrix: BoolMatrix,
    /// Row index → subject term, first-seen order.
    pub subjects: Vec<Term>,
    /// Column index → object term, first-seen order.
    pub objects: Vec<Term>,
    /// Distinct (subject, object) pairs; equals `matrix.nnz()`.
    pub triple_count: usize,
    /// Raw statement count including duplicates; the threshold is applied
    /// to this number.
    pub occurrences: usize,
}

/// Group triples by predicate and build a slice for every predicate that
/// occurs at least `min_count` times. Slices come out in first-seen
/// predicate order; duplicate statements collapse to one cell.
pub fn build_slices(
    triples: impl IntoIterator<Item = Triple>,
    min_count: usize,
) -> Result<Vec<PredicateSlice>> {
    if min_count < 1 {
        return Err(Error::Config("min_count must be at least 1".into()));
    }
    let mut order: Vec<String> = Vec::new();
    let mut buckets: HashMap<String, Vec<(Term, Term)>> = HashMap::new();
    for triple in triples {
        let Term::Iri(predicate) = triple.predicate else {
            return Err(Error::Precondition(
                "triple with non-IRI predicate reached build_slices".into(),
            ));
        };
        let bucket = match buckets.get_mut(&predicate) {
            Some(b) => b,
            None => {
                order.push(predicate.clone());
                buckets.entry(predicate).or_default()
            }
        };
        bucket.push((triple.subject, triple.object));
    }

    let mut slices = Vec::new();
    for predicate in order {
        let pairs = buckets.remove(&predicate).expect("bucket exists");
        if pairs.len() < min_count {
            continue;
        }
        let occurrences = pairs.len();
        let mut subjects: Vec<Term> = Vec::new();
        let mut objects: Vec<Term> = Vec::new();
        let mut subject_ids: HashMap<Term, u32> = HashMap::new();
        let mut object_ids: HashMap<Term, u32> = HashMap::new();
        let mut entries = Vec::with_capacity(occurrences);
        for (subject, object) in pairs {
            let r = *subject_ids.entry(subject.clone()).or_insert_with(|| {
                subjects.push(subject);
                (subjects.len() - 1) as u32
            });
            let c = *object_ids.entry(object.clone()).or_insert_with(|| {
                objects.push(object);
                (objects.len() - 1) as u32
            });
            entries.push((r as usize, c as usize));
        }
        let (matrix, _) = BoolMatrix::from_entries(subjects.len(), objects.len(), entries)?;
        slices.push(PredicateSlice {
            predicate,
            triple_count: matrix.nnz(),
            occurrences,
            matrix,
            subjects,
            objects,
        });
    }
    Ok(slices)
}

/// Factorization result of one slice; failures are isolated per slice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceReport {
    pub predicate: String,
    pub rows: usize,
    pub cols: usize,
    pub nnz: u64,
    pub coverage: Option<f64>,
    pub false_positives: Option<u64>,
    pub false_negatives: Option<u64>,
    pub rank_used: Option<usize>,
    pub wall_time_ms: u64,
    pub error: Option<String>,
}

/// Aggregate report over all slices of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceRunReport {
    pub k: usize,
    pub t_p: f64,
    pub slices: Vec<SliceReport>,
    /// nnz-weighted mean coverage over the slices that succeeded; absent
    /// when none did.
    pub aggregate_coverage: Option<f64>,
    pub total_wall_time_ms: u64,
    /// Free-form caveats (for example a defaulted parameter).
    pub notes: Vec<String>,
}

impl SliceRunReport {
    /// Canonical form for byte-comparison across runs: timing zeroed.
    pub fn without_timing(mut self) -> Self {
        self.total_wall_time_ms = 0;
        for s in &mut self.slices {
            s.wall_time_ms = 0;
        }
        self
    }
}

/// Factorize every slice with the same configuration, in parallel. Slice
/// order in the report matches input order; per-slice failures are recorded
/// without aborting the run.
pub fn run_slices(slices: &[PredicateSlice], cfg: &TfmConfig) -> SliceRunReport {
    let start = std::time::Instant::now();
    let reports: Vec<SliceReport> = slices
        .par_iter()
        .map(|slice| {
            let slice_start = std::time::Instant::now();
            let outcome = factorize(&slice.matrix, cfg)
                .and_then(|result| coverage(&slice.matrix, &result.factors));
            let wall_time_ms = slice_start.elapsed().as_millis() as u64;
            match outcome {
                Ok(report) => SliceReport {
                    predicate: slice.predicate.clone(),
                    rows: slice.matrix.n_rows(),
                    cols: slice.matrix.n_cols(),
                    nnz: slice.matrix.nnz() as u64,
                    coverage: Some(report.coverage),
                    false_positives: Some(report.false_positives),
                    false_negatives: Some(report.false_negatives),
                    rank_used: Some(report.rank_used),
                    wall_time_ms,
                    error: None,
                },
                Err(e) => SliceReport {
                    predicate: slice.predicate.clone(),
                    rows: slice.matrix.n_rows(),
                    cols: slice.matrix.n_cols(),
                    nnz: slice.matrix.nnz() as u64,
                    coverage: None,
                    false_positives: None,
                    false_negatives: None,
                    rank_used: None,
                    wall_time_ms,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let mut weighted = 0.0;
    let mut weight = 0u64;
    for r in &reports {
        if let Some(c) = r.coverage {
            weighted += c * r.nnz as f64;
            weight += r.nnz;
        }
    }
    SliceRunReport {
        k: cfg.k,
        t_p: cfg.t_p,
        slices: reports,
        aggregate_coverage: (weight > 0).then(|| weighted / weight as f64),
        total_wall_time_ms: start.elapsed().as_millis() as u64,
        notes: Vec::new(),
    }
}

/// Like [`run_slices`], but on a dedicated thread pool of the given size
/// (`None` uses the global pool). Results are identical either way; only
/// the degree of parallelism changes.
pub fn run_slices_with_threads(
    slices: &[PredicateSlice],
    cfg: &TfmConfig,
    threads: Option<usize>,
) -> Result<SliceRunReport> {
    match threads {
        None => Ok(run_slices(slices, cfg)),
        Some(n) => {
            if n < 1 {
                return Err(Error::Config("thread count must be at least 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("could not build thread pool: {e}")))?;
            Ok(pool.install(|| run_slices(slices, cfg)))
        }
    }
}

/// Files emitted for one slice.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceFiles {
    pub stem: String,
    pub matrix: PathBuf,
    pub subjects: PathBuf,
    pub objects: PathBuf,
}

/// Write each slice as a Matrix Market file plus subject/object dictionary
/// files (one canonical term per line, line number = index), and a
/// tab-separated index of all slices.
pub fn write_slice_files(dir: impl AsRef<Path>, slices: &[PredicateSlice]) -> Result<Vec<SliceFiles>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::from(e).with_path(dir))?;
    let mut written = Vec::with_capacity(slices.len());
    let mut index = String::from("slice\tpredicate\trows\tcols\tnnz\toccurrences\n");
    for (n, slice) in slices.iter().enumerate() {
        let stem = format!("slice{n:03}");
        let matrix_path = dir.join(format!("{stem}.mtx"));
        let comment = format!("predicate: <{}>", slice.predicate);
        write_matrix_market(&matrix_path, &slice.matrix, &[&comment])?;
        let subjects_path = dir.join(format!("{stem}.subjects.txt"));
        let objects_path = dir.join(format!("{stem}.objects.txt"));
        write_dictionary(&subjects_path, &slice.subjects)?;
        write_dictionary(&objects_path, &slice.objects)?;
        index.push_str(&format!(
            "{stem}\t{}\t{}\t{}\t{}\t{}\n",
            slice.predicate,
            slice.matrix.n_rows(),
            slice.matrix.n_cols(),
            slice.matrix.nnz(),
            slice.occurrences
        ));
        written.push(SliceFiles {
            stem,
            matrix: matrix_path,
            subjects: subjects_path,
            objects: objects_path,
        });
    }
    let index_path = dir.join("slices.tsv");
    std::fs::write(&index_path, index).map_err(|e| Error::from(e).with_path(index_path))?;
    Ok(written)
}

fn write_dictionary(path: &Path, terms: &[Term]) -> Result<()> {
    let mut text = String::new();
    for term in terms {
        text.push_str(&term.to_ntriples());
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::from(e).with_path(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::read_matrix_market;
    use std::io::Cursor;

    fn parse_all(text: &str) -> ParsedTriples {
        parse_ntriples(Cursor::new(text), ParseMode::Lenient).unwrap()
    }

    fn iri(s: &str) -> Term {
        Term::Iri(s.to_string())
    }

    #[test]
    fn parses_iri_triple() {
        let parsed = parse_all("<http://a> <http://p> <http://b> .\n");
        assert!(parsed.issues.is_empty());
        assert_eq!(
            parsed.triples,
            vec![Triple {
                subject: iri("http://a"),
                predicate: iri("http://p"),
                object: iri("http://b"),
            }]
        );
    }

    #[test]
    fn parses_blank_and_lang_literal() {
        let parsed = parse_all("_:x <http://p> \"hi\"@en .\n");
        assert!(parsed.issues.is_empty());
        assert_eq!(
            parsed.triples,
            vec![Triple {
                subject: Term::Blank("x".into()),
                predicate: iri("http://p"),
                object: Term::Literal {
                    lexical: "hi".into(),
                    lang: Some("en".into()),
                    datatype: None,
                },
            }]
        );
    }

    #[test]
    fn parses_datatyped_literal_and_escapes() {
        let parsed = parse_all(
            "<http://s> <http://p> \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n\
             <http://s> <http://p> \"a\\\"b\\nc\\u0041\" .\n",
        );
        assert!(parsed.issues.is_empty());
        assert_eq!(
            parsed.triples[0].object,
            Term::Literal {
                lexical: "5".into(),
                lang: None,
                datatype: Some("http://www.w3.org/2001/XMLSchema#integer".into()),
            }
        );
        assert_eq!(
            parsed.triples[1].object,
            Term::Literal {
                lexical: "a\"b\ncA".into(),
                lang: None,
                datatype: None,
            }
        );
    }

    #[test]
    fn term_serialization_roundtrips() {
        let text = "<http://s> <http://p> \"a\\\"b\\nc\\ttab\" .\n_:b1 <http://p> <http://o> .\n";
        let parsed = parse_all(text);
        assert!(parsed.issues.is_empty());
        for t in &parsed.triples {
            let line = format!(
                "{} {} {} .\n",
                t.subject.to_ntriples(),
                t.predicate.to_ntriples(),
                t.object.to_ntriples()
            );
            let again = parse_all(&line);
            assert!(again.issues.is_empty(), "{line:?} -> {:?}", again.issues);
            assert_eq!(&again.triples[0], t);
        }
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let parsed = parse_all("# header\n\n<http://a> <http://p> <http://b> . # trailing\n");
        assert!(parsed.issues.is_empty());
        assert_eq!(parsed.triples.len(), 1);
    }

    #[test]
    fn well_formed_lines_yield_exactly_n_triples() {
        let mut text = String::new();
        for i in 0..50 {
            text.push_str(&format!("<http://s{i}> <http://p{}> \"v{i}\" .\n", i % 3));
        }
        let parsed = parse_all(&text);
        assert!(parsed.issues.is_empty());
        assert_eq!(parsed.triples.len(), 50);
    }

    #[test]
    fn lenient_skips_and_reports_strict_aborts() {
        let text = "<http://a> <http://p> <http://b> .\n\
                    <http://a> <http://p> missing-term .\n\
                    <http://c> <http://p> <http://d> .\n";
        let parsed = parse_all(text);
        assert_eq!(parsed.triples.len(), 2);
        assert_eq!(parsed.issues.len(), 1);
        assert_eq!(parsed.issues[0].line, 2);

        let err = parse_ntriples(Cursor::new(text), ParseMode::Strict).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("bytes"), "{message}");
            }
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn rejects_bad_term_positions() {
        let parsed = parse_all("\"lit\" <http://p> <http://o> .\n<http://s> _:b <http://o> .\n");
        assert!(parsed.triples.is_empty());
        assert_eq!(parsed.issues.len(), 2);
        assert!(parsed.issues[0].message.contains("subject"));
        assert!(parsed.issues[1].message.contains("predicate"));
    }

    #[test]
    fn missing_dot_is_an_issue() {
        let parsed = parse_all("<http://a> <http://p> <http://b>\n");
        assert_eq!(parsed.issues.len(), 1);
        assert!(parsed.issues[0].message.contains("'.'"));
    }

    fn synthetic_triples(counts: &[(usize, usize)]) -> Vec<Triple> {
        // counts: (predicate id, occurrences); subject/object vary per triple
        let mut triples = Vec::new();
        for &(p, n) in counts {
            for i in 0..n {
                triples.push(Triple {
                    subject: iri(&format!("http://s{}", i % 97)),
                    predicate: iri(&format!("http://p{p}")),
                    object: iri(&format!("http://o{}", i % 89)),
                });
            }
        }
        triples
    }

    #[test]
    fn threshold_keeps_qualifying_predicates() {
        let triples = synthetic_triples(&[(0, 1200), (1, 999), (2, 5000)]);
        let slices = build_slices(triples, 1000).unwrap();
        assert_eq!(slices.len(), 2);
        assert_eq!(slices[0].predicate, "http://p0");
        assert_eq!(slices[1].predicate, "http://p2");
        assert_eq!(slices[0].occurrences, 1200);
    }

    #[test]
    fn duplicates_collapse_into_one_cell() {
        let s1 = iri("http://s1");
        let s2 = iri("http://s2");
        let o1 = iri("http://o1");
        let p = iri("http://p");
        let triples = vec![
            Triple { subject: s1.clone(), predicate: p.clone(), object: o1.clone() },
            Triple { subject: s1.clone(), predicate: p.clone(), object: o1.clone() },
            Triple { subject: s2.clone(), predicate: p.clone(), object: o1.clone() },
        ];
        let slices = build_slices(triples, 1).unwrap();
        assert_eq!(slices.len(), 1);
        let slice = &slices[0];
        assert_eq!((slice.matrix.n_rows(), slice.matrix.n_cols()), (2, 1));
        assert_eq!(slice.matrix.nnz(), 2);
        assert_eq!(slice.triple_count, 2);
        assert_eq!(slice.occurrences, 3);
        assert_eq!(slice.subjects, vec![s1, s2]);
        assert_eq!(slice.objects, vec![o1]);
    }

    #[test]
    fn dictionaries_are_first_seen_order() {
        let text = "<http://s2> <http://p> <http://oB> .\n\
                    <http://s1> <http://p> <http://oA> .\n\
                    <http://s2> <http://p> <http://oA> .\n";
        let parsed = parse_all(text);
        let slices = build_slices(parsed.triples, 1).unwrap();
        let slice = &slices[0];
        assert_eq!(slice.subjects, vec![iri("http://s2"), iri("http://s1")]);
        assert_eq!(slice.objects, vec![iri("http://oB"), iri("http://oA")]);
        assert!(slice.matrix.get(0, 0) && slice.matrix.get(1, 1) && slice.matrix.get(0, 1));
    }

    #[test]
    fn min_count_zero_rejected() {
        assert!(matches!(build_slices(vec![], 0), Err(Error::Config(_))));
    }

    #[test]
    fn run_slices_on_block_slices_reaches_full_coverage() {
        // two predicates, each a pair of disjoint all-ones blocks
        let mut triples = Vec::new();
        for p in 0..2 {
            for block in 0..2 {
                for s in 0..3 {
                    for o in 0..3 {
                        triples.push(Triple {
                            subject: iri(&format!("http://s{block}-{s}")),
                            predicate: iri(&format!("http://p{p}")),
                            object: iri(&format!("http://o{block}-{o}")),
                        });
                    }
                }
            }
        }
        let slices = build_slices(triples, 1).unwrap();
        assert_eq!(slices.len(), 2);
        let report = run_slices(&slices, &TfmConfig::new(2, 1.0).with_sr(4));
        assert_eq!(report.slices.len(), 2);
        for s in &report.slices {
            assert_eq!(s.coverage, Some(1.0));
            assert_eq!(s.error, None);
        }
        assert_eq!(report.aggregate_coverage, Some(1.0));
    }

    #[test]
    fn run_slices_empty_input_gives_empty_report() {
        let report = run_slices(&[], &TfmConfig::new(2, 0.5));
        assert!(report.slices.is_empty());
        assert_eq!(report.aggregate_coverage, None);
    }

    #[test]
    fn run_slices_isolates_per_slice_failures() {
        let triples = synthetic_triples(&[(0, 10)]);
        let slices = build_slices(triples, 1).unwrap();
        // invalid t_p makes the slice fail, but the run completes
        let report = run_slices(&slices, &TfmConfig::new(2, 0.0));
        assert_eq!(report.slices.len(), 1);
        assert!(report.slices[0].error.is_some());
        assert_eq!(report.aggregate_coverage, None);
    }

    #[test]
    fn aggregate_is_nnz_weighted() {
        // slice A: 2x2 all ones (nnz 4), fully coverable at k=1
        // slice B: 2x2 identity (nnz 2), coverage 0.5 at k=1
        let mut triples = Vec::new();
        for s in 0..2 {
            for o in 0..2 {
                triples.push(Triple {
                    subject: iri(&format!("http://s{s}")),
                    predicate: iri("http://pa"),
                    object: iri(&format!("http://o{o}")),
                });
            }
        }
        for d in 0..2 {
            triples.push(Triple {
                subject: iri(&format!("http://s{d}")),
                predicate: iri("http://pb"),
                object: iri(&format!("http://o{d}")),
            });
        }
        let slices = build_slices(triples, 1).unwrap();
        let report = run_slices(&slices, &TfmConfig::new(1, 1.0));
        let coverages: Vec<Option<f64>> = report.slices.iter().map(|s| s.coverage).collect();
        assert_eq!(coverages, vec![Some(1.0), Some(0.5)]);
        // (1.0 * 4 + 0.5 * 2) / 6
        assert_eq!(report.aggregate_coverage, Some(5.0 / 6.0));
    }

    #[test]
    fn parallel_matches_sequential() {
        let triples = synthetic_triples(&[(0, 400), (1, 300), (2, 200)]);
        let slices = build_slices(triples, 1).unwrap();
        let cfg = TfmConfig::new(3, 0.5).with_sr(6);
        let a = run_slices(&slices, &cfg).without_timing();
        let b = run_slices(&slices, &cfg).without_timing();
        assert_eq!(a, b);
        let single = run_slices_with_threads(&slices, &cfg, Some(1))
            .unwrap()
            .without_timing();
        assert_eq!(a, single);
        assert!(matches!(
            run_slices_with_threads(&slices, &cfg, Some(0)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn slice_files_roundtrip() {
        let triples = synthetic_triples(&[(0, 30)]);
        let slices = build_slices(triples, 1).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = write_slice_files(dir.path(), &slices).unwrap();
        assert_eq!(files.len(), 1);
        let (matrix, _) = read_matrix_market(&files[0].matrix).unwrap();
        assert_eq!(matrix, slices[0].matrix);
        let subjects = std::fs::read_to_string(&files[0].subjects).unwrap();
        assert_eq!(subjects.lines().count(), slices[0].matrix.n_rows());
        assert_eq!(
            subjects.lines().next().unwrap(),
            slices[0].subjects[0].to_ntriples()
        );
        let index = std::fs::read_to_string(dir.path().join("slices.tsv")).unwrap();
        assert!(index.contains("slice000\thttp://p0"));
    }
}
