//! Matrix and graph file formats.
//!
//! Matrices are dense: MatrixMarket `array real general` (column-major, as
//! the format prescribes) or CSV with one matrix row per line. Graphs are
//! whitespace-separated `u v w` lines with 0-based vertex ids; lines starting
//! with `#` are comments.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lowstretch::WeightedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MatrixFormat {
    Auto,
    Mtx,
    Csv,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_value(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("not a number: {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite entry {tok:?}")));
    }
    Ok(v)
}

pub fn read_matrix(path: impl AsRef<Path>, format: MatrixFormat) -> Result<Matrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let format = match format {
        MatrixFormat::Auto if text.trim_start().starts_with("%%MatrixMarket") => MatrixFormat::Mtx,
        MatrixFormat::Auto if path.extension().is_some_and(|e| e == "mtx") => MatrixFormat::Mtx,
        MatrixFormat::Auto => MatrixFormat::Csv,
        f => f,
    };
    match format {
        MatrixFormat::Mtx => parse_matrix_market(&text),
        _ => parse_csv(&text),
    }
}

pub fn parse_csv(text: &str) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row = rec
            .iter()
            .map(|tok| parse_value(tok, line))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_err(
                    line,
                    format!("expected {} fields, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(1, "empty matrix"));
    }
    Matrix::from_rows(&rows)
}

pub fn parse_matrix_market(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let words: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if words.len() < 5
        || words[0] != "%%matrixmarket"
        || words[1] != "matrix"
        || words[2] != "array"
        || words[3] != "real"
        || words[4] != "general"
    {
        return Err(parse_err(1, "only `matrix array real general` is supported"));
    }
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = body.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(size_line, format!("bad size {t:?}"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(parse_err(size_line, "size line must be `rows cols`"));
    };
    let mut data = vec![0.0; rows * cols];
    let mut count = 0;
    for (line, l) in body {
        for tok in l.split_whitespace() {
            if count == rows * cols {
                return Err(parse_err(line, "more entries than rows * cols"));
            }
            let (i, j) = (count % rows, count / rows);
            data[i * cols + j] = parse_value(tok, line)?;
            count += 1;
        }
    }
    if count != rows * cols {
        return Err(parse_err(
            text.lines().count(),
            format!("expected {} entries, found {count}", rows * cols),
        ));
    }
    Matrix::new(rows, cols, data)
}

/// MatrixMarket array text, values printed with round-trip precision.
pub fn matrix_market_string(x: &Matrix) -> String {
    let mut out = format!("%%MatrixMarket matrix array real general\n{} {}\n", x.rows(), x.cols());
    for j in 0..x.cols() {
        for i in 0..x.rows() {
            writeln!(out, "{:e}", x.get(i, j)).expect("write to string");
        }
    }
    out
}

pub fn write_matrix_market(path: impl AsRef<Path>, x: &Matrix) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, matrix_market_string(x)).map_err(|e| io_err(path, e))
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let line = i + 1;
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [u, v, w] = toks[..] else {
            return Err(parse_err(line, "expected `u v w`"));
        };
        let vertex = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| parse_err(line, format!("bad vertex id {t:?}")))
        };
        let w: f64 = w
            .parse()
            .map_err(|_| parse_err(line, format!("bad weight {w:?}")))?;
        edges.push((vertex(u)?, vertex(v)?, w));
    }
    WeightedGraph::from_edges(&edges)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_graph(&text)
}
