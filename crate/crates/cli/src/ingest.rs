//! Reading observation tables and dissimilarity matrices from text files.
//!
//! Data files are comma-separated, one observation per row, with an optional
//! header row and an optional leading label column. Dissimilarity files are
//! either a full square matrix in the same layout or a condensed file whose
//! first line is `n=<N>` followed by the `N(N-1)/2` upper-triangle entries in
//! row-major order, separated by commas or whitespace.

use std::path::Path;

use thiserror::Error;
use wardhc::{DataMatrix, DissimilarityMatrix, Scale};

/// Absolute slack, scaled by the entry magnitude, for symmetry and the zero diagonal.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("asymmetric matrix: entry ({i},{j}) is {upper} but ({j},{i}) is {lower}")]
    Asymmetric { i: usize, j: usize, upper: f64, lower: f64 },
    #[error("non-zero diagonal: entry ({i},{i}) is {value}")]
    Diagonal { i: usize, value: f64 },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Invalid(#[from] wardhc::Error),
}

pub type Result<T> = std::result::Result<T, IngestError>;

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Data(DataMatrix),
    Dissimilarity {
        matrix: DissimilarityMatrix,
        labels: Option<Vec<String>>,
    },
}

impl Input {
    pub fn labels(&self) -> Option<&[String]> {
        match self {
            Input::Data(d) => d.labels(),
            Input::Dissimilarity { labels, .. } => labels.as_deref(),
        }
    }
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug)]
struct Table {
    header: Option<Vec<String>>,
    labels: Option<Vec<String>>,
    rows: Vec<(u64, Vec<f64>)>,
}

fn is_number(s: &str) -> bool {
    s.parse::<f64>().is_ok()
}

fn parse_cell(line: u64, column: usize, cell: &str) -> Result<f64> {
    let value: f64 = cell.parse().map_err(|_| IngestError::Parse {
        line,
        message: format!("column {column}: non-numeric cell {cell:?}"),
    })?;
    if !value.is_finite() {
        return Err(IngestError::Parse {
            line,
            message: format!("column {column}: non-finite value {cell:?}"),
        });
    }
    Ok(value)
}

fn parse_table(text: &str) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| IngestError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line = record.position().map_or(0, |p| p.line());
        records.push((line, record.iter().map(str::to_string).collect::<Vec<_>>()));
    }
    if records.is_empty() {
        return Err(IngestError::Shape("input has no rows".into()));
    }

    // the first row may be a header, so decide on labels from the second
    let probe = &records[records.len().min(2) - 1].1;
    let labeled = !is_number(&probe[0]);
    let skip = usize::from(labeled);
    let has_header = records.len() > 1 && records[0].1.iter().skip(skip).any(|c| !is_number(c));
    let header = has_header.then(|| records[0].1.iter().skip(skip).cloned().collect());
    let body = &records[usize::from(has_header)..];

    let width = body[0].1.len();
    if width <= skip {
        return Err(IngestError::Parse {
            line: body[0].0,
            message: "row has no numeric columns".into(),
        });
    }
    let mut labels = Vec::new();
    let mut rows = Vec::with_capacity(body.len());
    for (line, cells) in body {
        if cells.len() != width {
            return Err(IngestError::Parse {
                line: *line,
                message: format!("expected {width} fields, found {}", cells.len()),
            });
        }
        if labeled {
            labels.push(cells[0].clone());
        }
        let values = cells[skip..]
            .iter()
            .enumerate()
            .map(|(c, cell)| parse_cell(*line, c + skip + 1, cell))
            .collect::<Result<Vec<_>>>()?;
        rows.push((*line, values));
    }
    Ok(Table {
        header,
        labels: labeled.then_some(labels),
        rows,
    })
}

pub fn parse_data(text: &str) -> Result<DataMatrix> {
    let table = parse_table(text)?;
    let rows: Vec<Vec<f64>> = table.rows.into_iter().map(|(_, r)| r).collect();
    let data = DataMatrix::from_rows(&rows)?;
    Ok(match table.labels {
        Some(labels) => data.with_labels(labels)?,
        None => data,
    })
}

pub fn parse_dissimilarity(text: &str, scale: Scale) -> Result<(DissimilarityMatrix, Option<Vec<String>>)> {
    let first = text
        .lines()
        .enumerate()
        .find(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    if let Some((index, line)) = first {
        if let Some(rest) = line.trim().strip_prefix("n=") {
            return parse_condensed(text, index, rest.trim(), scale).map(|m| (m, None));
        }
    }
    parse_square(text, scale)
}

fn parse_condensed(text: &str, header_index: usize, declared: &str, scale: Scale) -> Result<DissimilarityMatrix> {
    let header_line = header_index as u64 + 1;
    let n: usize = declared.parse().map_err(|_| IngestError::Parse {
        line: header_line,
        message: format!("invalid leaf count {declared:?}"),
    })?;
    let mut values = Vec::new();
    for (index, line) in text.lines().enumerate().skip(header_index + 1) {
        let line_no = index as u64 + 1;
        let content = line.split('#').next().unwrap_or("");
        for (c, cell) in content
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|s| !s.is_empty())
            .enumerate()
        {
            let v = parse_cell(line_no, c + 1, cell)?;
            if v < 0.0 {
                return Err(IngestError::Parse {
                    line: line_no,
                    message: format!("column {}: negative dissimilarity {v}", c + 1),
                });
            }
            values.push(v);
        }
    }
    let expected = n * n.saturating_sub(1) / 2;
    if values.len() != expected {
        return Err(IngestError::Shape(format!(
            "n={n} needs {expected} condensed entries, found {}",
            values.len()
        )));
    }
    Ok(DissimilarityMatrix::new(n, values, scale)?)
}

fn parse_square(text: &str, scale: Scale) -> Result<(DissimilarityMatrix, Option<Vec<String>>)> {
    let table = parse_table(text)?;
    let n = table.rows.len();
    if let Some((line, row)) = table.rows.iter().find(|(_, r)| r.len() != n) {
        return Err(IngestError::Parse {
            line: *line,
            message: format!("square matrix with {n} rows needs {n} values per row, found {}", row.len()),
        });
    }
    let at = |i: usize, j: usize| table.rows[i].1[j];
    for i in 0..n {
        if at(i, i).abs() > SYMMETRY_TOLERANCE {
            return Err(IngestError::Diagonal { i, value: at(i, i) });
        }
    }
    let mut entries = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let (upper, lower) = (at(i, j), at(j, i));
            if (upper - lower).abs() > SYMMETRY_TOLERANCE * upper.abs().max(lower.abs()).max(1.0) {
                return Err(IngestError::Asymmetric { i, j, upper, lower });
            }
            if upper < 0.0 {
                return Err(IngestError::Parse {
                    line: table.rows[i].0,
                    message: format!("negative dissimilarity {upper} at ({i},{j})"),
                });
            }
            entries.push(upper);
        }
    }
    let labels = table.labels.or(table.header.filter(|h| h.len() == n));
    Ok((DissimilarityMatrix::new(n, entries, scale)?, labels))
}
