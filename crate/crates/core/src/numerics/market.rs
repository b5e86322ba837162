//! Matrix Market ingestion into dense storage, plus a writer used to
//! round-trip test data.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::BufRead;

use thiserror::Error;

use super::DenseMatrix;

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct MarketError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, MarketError> {
    Err(MarketError {
        line,
        message: message.into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Clone, Copy, Debug)]
struct Header {
    layout: Layout,
    field: Field,
    symmetric: bool,
}

fn parse_header(text: &str, line: usize) -> Result<Header, MarketError> {
    let words: Vec<String> = text.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return fail(line, format!("unrecognized Matrix Market header `{}`", text.trim()));
    }
    let layout = match words[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return fail(line, format!("unsupported format `{other}`")),
    };
    let field = match words[3].as_str() {
        "real" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return fail(line, format!("unsupported field `{other}`")),
    };
    let symmetric = match words[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return fail(line, format!("unsupported symmetry `{other}`")),
    };
    if layout == Layout::Array && field == Field::Pattern {
        return fail(line, "array format cannot carry pattern entries");
    }
    Ok(Header {
        layout,
        field,
        symmetric,
    })
}

/// Non-comment, non-blank lines with their 1-based line numbers.
struct DataLines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> DataLines<R> {
    fn next_data(&mut self) -> Result<Option<(usize, String)>, MarketError> {
        for text in self.inner.by_ref() {
            self.line += 1;
            let text = text.map_err(|e| MarketError {
                line: self.line,
                message: e.to_string(),
            })?;
            let trimmed = text.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            return Ok(Some((self.line, trimmed.to_owned())));
        }
        Ok(None)
    }

    fn expect_data(&mut self, what: &str) -> Result<(usize, String), MarketError> {
        match self.next_data()? {
            Some(v) => Ok(v),
            None => fail(self.line + 1, format!("unexpected end of input, expected {what}")),
        }
    }
}

fn parse_index(tok: &str, bound: usize, line: usize) -> Result<usize, MarketError> {
    let v: usize = tok.parse().or_else(|_| fail(line, format!("invalid index `{tok}`")))?;
    if v == 0 || v > bound {
        return fail(line, format!("index {v} out of bounds 1..={bound}"));
    }
    Ok(v - 1)
}

fn parse_value(tok: &str, field: Field, line: usize) -> Result<f64, MarketError> {
    let v = match field {
        Field::Integer => tok.parse::<i64>().map(|v| v as f64).ok(),
        _ => tok.parse::<f64>().ok(),
    };
    match v {
        Some(v) if v.is_finite() => Ok(v),
        _ => fail(line, format!("invalid value `{tok}`")),
    }
}

/// Parses a Matrix Market stream into a dense matrix.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<DenseMatrix, MarketError> {
    parse_matrix_market_limited(reader, usize::MAX)
}

/// Like [`parse_matrix_market`], refusing matrices with more than
/// `max_elements` dense entries before allocating them.
pub fn parse_matrix_market_limited<R: BufRead>(reader: R, max_elements: usize) -> Result<DenseMatrix, MarketError> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(Ok(text)) => parse_header(&text, 1)?,
        Some(Err(e)) => return fail(1, e.to_string()),
        None => return fail(1, "empty input, expected a Matrix Market header"),
    };
    let mut lines = DataLines { inner: lines, line: 1 };

    let (size_line, size_text) = lines.expect_data("a size line")?;
    let dims: Vec<usize> = size_text
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .or_else(|_| fail(size_line, format!("invalid size line `{size_text}`")))?;
    let expected = if header.layout == Layout::Coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return fail(size_line, format!("size line needs {expected} integers"));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if header.symmetric && rows != cols {
        return fail(size_line, "symmetric matrix must be square");
    }
    match rows.checked_mul(cols) {
        Some(total) if total <= max_elements => {}
        _ => return fail(size_line, format!("{rows}x{cols} exceeds the dense size limit")),
    }
    let mut out = DenseMatrix::zeros(rows, cols);

    match header.layout {
        Layout::Coordinate => {
            let nnz = dims[2];
            let mut seen = HashSet::with_capacity(nnz.min(1 << 20));
            for _ in 0..nnz {
                let (line, text) = lines.expect_data("a coordinate entry")?;
                let toks: Vec<&str> = text.split_whitespace().collect();
                let want = if header.field == Field::Pattern { 2 } else { 3 };
                if toks.len() != want {
                    return fail(line, format!("expected {want} fields, found {}", toks.len()));
                }
                let i = parse_index(toks[0], rows, line)?;
                let j = parse_index(toks[1], cols, line)?;
                let v = if header.field == Field::Pattern {
                    1.0
                } else {
                    parse_value(toks[2], header.field, line)?
                };
                let key = if header.symmetric { (i.max(j), i.min(j)) } else { (i, j) };
                if !seen.insert(key) {
                    return fail(line, format!("duplicate entry ({}, {})", i + 1, j + 1));
                }
                out[(i, j)] = v;
                if header.symmetric {
                    out[(j, i)] = v;
                }
            }
        }
        Layout::Array => {
            // Column-major; symmetric arrays list the lower triangle only.
            for j in 0..cols {
                let first = if header.symmetric { j } else { 0 };
                for i in first..rows {
                    let (line, text) = lines.expect_data("an array value")?;
                    let mut toks = text.split_whitespace();
                    let tok = toks.next().unwrap_or_default();
                    if toks.next().is_some() {
                        return fail(line, "array entries hold one value per line");
                    }
                    let v = parse_value(tok, header.field, line)?;
                    out[(i, j)] = v;
                    if header.symmetric {
                        out[(j, i)] = v;
                    }
                }
            }
        }
    }
    if let Some((line, _)) = lines.next_data()? {
        return fail(line, "unexpected data after the last entry");
    }
    Ok(out)
}

/// Writes `m` as `array real general`. Values use shortest round-trip
/// formatting, so parsing the output reproduces `m` exactly.
pub fn write_matrix_market(m: &DenseMatrix) -> String {
    let mut s = String::from("%%MatrixMarket matrix array real general\n");
    let _ = writeln!(s, "{} {}", m.rows(), m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let _ = writeln!(s, "{:?}", m[(i, j)]);
        }
    }
    s
}
