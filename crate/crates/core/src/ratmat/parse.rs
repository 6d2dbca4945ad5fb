//! Matrix text formats.
//!
//! Plain form: one row per line (or rows separated by a standalone `/`),
//! whitespace-separated decimal or `p/q` literals, `#` starts a comment.
//! Structured form: `{"n": 3, "entries": [["0.9", "0", "0"], ...]}`.

use serde_json::Value;

use super::matrix::SubstochMatrix;
use super::rational::{parse_rational, Rational};
use crate::error::{Error, Result};

pub fn parse_matrix(text: &str) -> Result<SubstochMatrix> {
    if text.trim_start().starts_with('{') {
        parse_structured(text)
    } else {
        parse_plain(text)
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_plain(text: &str) -> Result<SubstochMatrix> {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut positions: Vec<(usize, usize)> = Vec::new();
    for (line_idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("");
        let mut current: Vec<Rational> = Vec::new();
        let mut row_start = None;
        for (column, token) in tokens(line) {
            if token == "/" {
                if current.is_empty() {
                    return Err(parse_error(line_idx + 1, column, "empty row before '/'"));
                }
                rows.push(std::mem::take(&mut current));
                positions.push(row_start.take().unwrap_or((line_idx + 1, column)));
                continue;
            }
            let value = parse_rational(token).ok_or_else(|| {
                parse_error(line_idx + 1, column, format!("invalid number literal {token:?}"))
            })?;
            row_start.get_or_insert((line_idx + 1, column));
            current.push(value);
        }
        if !current.is_empty() {
            rows.push(current);
            positions.push(row_start.unwrap_or((line_idx + 1, 1)));
        }
    }
    if rows.is_empty() {
        return Err(parse_error(1, 1, "no matrix rows found"));
    }
    let n = rows.len();
    for (idx, row) in rows.iter().enumerate() {
        if row.len() != n {
            let (line, column) = positions[idx];
            return Err(parse_error(
                line,
                column,
                format!("row {} has {} entries, expected {n} (matrix must be square)", idx + 1, row.len()),
            ));
        }
    }
    SubstochMatrix::from_rows(rows)
}

/// Whitespace-separated tokens with their 1-based starting columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..idx]));
            }
        } else if start.is_none() {
            start = Some(idx);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (s + 1, t))
}

fn parse_structured(text: &str) -> Result<SubstochMatrix> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| parse_error(e.line(), e.column(), format!("invalid document: {e}")))?;
    let entries = doc
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_error(1, 1, "missing \"entries\" array"))?;
    let mut rows = Vec::with_capacity(entries.len());
    for (i, row) in entries.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| parse_error(1, 1, format!("entries[{i}] is not an array")))?;
        let mut parsed = Vec::with_capacity(row.len());
        for (j, cell) in row.iter().enumerate() {
            let literal = match cell {
                Value::String(s) => s.clone(),
                Value::Number(num) => num.to_string(),
                _ => return Err(parse_error(1, 1, format!("entries[{i}][{j}] is not a literal"))),
            };
            let value = parse_rational(&literal).ok_or_else(|| {
                parse_error(1, 1, format!("entries[{i}][{j}]: invalid number literal {literal:?}"))
            })?;
            parsed.push(value);
        }
        rows.push(parsed);
    }
    if let Some(n) = doc.get("n") {
        let n = n
            .as_u64()
            .ok_or_else(|| parse_error(1, 1, "\"n\" must be a nonnegative integer"))?;
        if n as usize != rows.len() {
            return Err(parse_error(
                1,
                1,
                format!("\"n\" is {n} but {} rows were given", rows.len()),
            ));
        }
    }
    SubstochMatrix::from_rows(rows)
}

/// Plain-form serialization that `parse_matrix` reads back exactly.
pub fn format_matrix(matrix: &SubstochMatrix) -> String {
    let mut out = matrix.to_string();
    out.push('\n');
    out
}
