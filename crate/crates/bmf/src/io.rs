//! File formats: Matrix Market coordinate pattern (read/write) and dense
//! 0/1 CSV (read only). Readers accept gzip-compressed files by `.gz`
//! extension and report 1-based line numbers on parse failures.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::boolmat::BoolMatrix;
use crate::{Error, Result};

/// What a reader saw while loading a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoadReport {
    pub n_rows: usize,
    pub n_cols: usize,
    /// Ones actually stored, after collapsing duplicates.
    pub nnz: usize,
    /// Duplicate (row, col) pairs collapsed away.
    pub duplicates_collapsed: usize,
}

/// Open a text file, decompressing transparently when the name ends in `.gz`.
pub(crate) fn open_text(path: &Path) -> Result<Box<dyn BufRead>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: Some(path.to_path_buf()),
        source,
    })?;
    if path.extension().is_some_and(|ext| ext == "gz") {
        Ok(Box::new(BufReader::new(flate2::read::GzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Read a Matrix Market `coordinate pattern general` file.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<(BoolMatrix, LoadReport)> {
    let path = path.as_ref();
    read_matrix_market_from(open_text(path)?).map_err(|e| e.with_path(path))
}

/// Read Matrix Market from any buffered reader.
pub fn read_matrix_market_from(reader: impl BufRead) -> Result<(BoolMatrix, LoadReport)> {
    let mut lines = reader.lines().enumerate();

    let (line_no, header) = match lines.next() {
        Some((idx, line)) => (idx + 1, line?),
        None => return Err(Error::parse(1, "empty file, expected Matrix Market header")),
    };
    parse_header(line_no, &header)?;

    let mut size: Option<(usize, usize, usize)> = None;
    let mut entries: Vec<(usize, usize)> = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        match size {
            None => {
                let fields = parse_ints(line_no, text, 3, "size line")?;
                size = Some((fields[0], fields[1], fields[2]));
                entries.reserve(fields[2]);
            }
            Some((n_rows, n_cols, declared)) => {
                if entries.len() == declared {
                    return Err(Error::parse(
                        line_no,
                        format!("unexpected data past the {declared} declared entries"),
                    ));
                }
                let fields = parse_ints(line_no, text, 2, "entry")?;
                let (r, c) = (fields[0], fields[1]);
                if r == 0 || r > n_rows {
                    return Err(Error::parse(
                        line_no,
                        format!("row index {r} outside 1..={n_rows}"),
                    ));
                }
                if c == 0 || c > n_cols {
                    return Err(Error::parse(
                        line_no,
                        format!("column index {c} outside 1..={n_cols}"),
                    ));
                }
                entries.push((r - 1, c - 1));
            }
        }
    }

    let Some((n_rows, n_cols, declared)) = size else {
        return Err(Error::parse(0, "missing size line"));
    };
    if entries.len() != declared {
        return Err(Error::parse(
            0,
            format!("declared {declared} entries, file contains {}", entries.len()),
        ));
    }
    let (matrix, duplicates_collapsed) = BoolMatrix::from_entries(n_rows, n_cols, entries)?;
    let report = LoadReport {
        n_rows,
        n_cols,
        nnz: matrix.nnz(),
        duplicates_collapsed,
    };
    Ok((matrix, report))
}

fn parse_header(line_no: usize, header: &str) -> Result<()> {
    let fields: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if fields.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(Error::parse(
            line_no,
            format!("expected %%MatrixMarket header, got {header:?}"),
        ));
    }
    let expected = ["matrix", "coordinate", "pattern", "general"];
    for (pos, want) in expected.iter().enumerate() {
        match fields.get(pos + 1) {
            Some(got) if got == want => {}
            got => {
                return Err(Error::parse(
                    line_no,
                    format!(
                        "unsupported Matrix Market type: expected {want:?}, got {:?} \
                         (only `matrix coordinate pattern general` is supported)",
                        got.map(String::as_str).unwrap_or("nothing")
                    ),
                ))
            }
        }
    }
    Ok(())
}

fn parse_ints(line_no: usize, text: &str, want: usize, what: &str) -> Result<Vec<usize>> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != want {
        return Err(Error::parse(
            line_no,
            format!("{what} must have {want} fields, got {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>().map_err(|_| {
                Error::parse(line_no, format!("{what}: {f:?} is not a non-negative integer"))
            })
        })
        .collect()
}

/// Write a matrix as Matrix Market `coordinate pattern general`. Each string
/// in `comments` becomes a `%` comment line between header and size line.
pub fn write_matrix_market(
    path: impl AsRef<Path>,
    m: &BoolMatrix,
    comments: &[&str],
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| Error::Io {
        path: Some(path.to_path_buf()),
        source,
    })?;
    let mut w = BufWriter::new(file);
    write_matrix_market_to(&mut w, m, comments).map_err(|e| e.with_path(path))?;
    w.flush().map_err(|e| Error::from(e).with_path(path))
}

/// Write Matrix Market to any writer.
pub fn write_matrix_market_to(
    w: &mut impl Write,
    m: &BoolMatrix,
    comments: &[&str],
) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate pattern general")?;
    for comment in comments {
        writeln!(w, "% {comment}")?;
    }
    writeln!(w, "{} {} {}", m.n_rows(), m.n_cols(), m.nnz())?;
    for (r, c) in m.iter_ones() {
        writeln!(w, "{} {}", r + 1, c + 1)?;
    }
    Ok(())
}

/// Read a dense CSV of 0/1 cells, one matrix row per line.
pub fn read_dense_csv(path: impl AsRef<Path>) -> Result<BoolMatrix> {
    let path = path.as_ref();
    read_dense_csv_from(open_text(path)?).map_err(|e| e.with_path(path))
}

/// Read dense 0/1 CSV from any buffered reader.
pub fn read_dense_csv_from(reader: impl BufRead) -> Result<BoolMatrix> {
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for cell in text.split(',') {
            match cell.trim() {
                "0" => row.push(false),
                "1" => row.push(true),
                other => {
                    return Err(Error::parse(
                        line_no,
                        format!("cell must be 0 or 1, got {other:?}"),
                    ))
                }
            }
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::parse(
                    line_no,
                    format!("row has {} cells, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse(0, "no data rows in CSV"));
    }
    let n_rows = rows.len();
    let n_cols = rows[0].len();
    let entries = rows.into_iter().enumerate().flat_map(|(r, row)| {
        row.into_iter()
            .enumerate()
            .filter_map(move |(c, set)| set.then_some((r, c)))
    });
    let (m, _) = BoolMatrix::from_entries(n_rows, n_cols, entries)?;
    Ok(m)
}
