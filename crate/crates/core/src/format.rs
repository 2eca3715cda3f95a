//! Plain-text matrix, move and vector files, plus number formatting.
//!
//! Matrix file: a header line `m d`, then `m` lines of `d` integers.
//! Move file: a header line `k d`, then `k` lines of `d` integers.
//! Vector file: a header line `m`, then `m` integers (any line layout).
//! Lines whose first non-blank character is `#` are comments.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::MoveSet;
use crate::linalg::IntegerMatrix;

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let t = line.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, t))
    })
}

fn parse_int(line: usize, token: &str) -> Result<i64> {
    // accept the typographic minus sign as well
    let normalized = token.replace('\u{2212}', "-");
    normalized.parse().map_err(|_| Error::NonInteger {
        line,
        token: token.to_string(),
    })
}

fn parse_header(line: usize, text: &str, fields: usize) -> Result<Vec<usize>> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != fields {
        return Err(Error::MalformedHeader {
            line,
            reason: format!("expected {fields} fields, found {}", tokens.len()),
        });
    }
    tokens
        .iter()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::MalformedHeader {
                line,
                reason: format!("not a count: {t:?}"),
            })
        })
        .collect()
}

fn parse_rows(text: &str) -> Result<(usize, Vec<Vec<i64>>)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::MalformedHeader {
        line: 1,
        reason: "empty input".into(),
    })?;
    let dims = parse_header(hl, header, 2)?;
    let (count, width) = (dims[0], dims[1]);
    let mut rows = Vec::with_capacity(count);
    for (line, text) in lines {
        let row = text
            .split_whitespace()
            .map(|t| parse_int(line, t))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != width {
            return Err(Error::WrongEntryCount {
                line,
                expected: width,
                found: row.len(),
            });
        }
        rows.push(row);
    }
    if rows.len() != count {
        return Err(Error::WrongRowCount {
            expected: count,
            found: rows.len(),
        });
    }
    Ok((width, rows))
}

pub fn parse_matrix(text: &str) -> Result<IntegerMatrix> {
    let (width, rows) = parse_rows(text)?;
    IntegerMatrix::new(rows.len(), width, rows.concat())
}

/// Parses a one-sided move set (no zero move, no `m` together with `-m`).
pub fn parse_moves(text: &str) -> Result<MoveSet> {
    let (width, rows) = parse_rows(text)?;
    MoveSet::one_sided(width, rows)
}

/// Parses a move set and checks every move against `matrix`.
pub fn parse_moves_for(matrix: &IntegerMatrix, text: &str) -> Result<MoveSet> {
    let moves = parse_moves(text)?;
    moves.check_kernel(matrix)?;
    Ok(moves)
}

pub fn parse_vector(text: &str) -> Result<Vec<i64>> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::MalformedHeader {
        line: 1,
        reason: "empty input".into(),
    })?;
    let len = parse_header(hl, header, 1)?[0];
    let mut out = Vec::with_capacity(len);
    for (line, text) in lines {
        for t in text.split_whitespace() {
            out.push(parse_int(line, t)?);
        }
    }
    if out.len() != len {
        return Err(Error::WrongEntryCount {
            line: hl,
            expected: len,
            found: out.len(),
        });
    }
    Ok(out)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<IntegerMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn read_moves(path: impl AsRef<Path>) -> Result<MoveSet> {
    parse_moves(&std::fs::read_to_string(path)?)
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<i64>> {
    parse_vector(&std::fs::read_to_string(path)?)
}

/// Writes moves in the move-file layout.
pub fn format_moves(moves: &MoveSet) -> String {
    let mut out = format!("{} {}\n", moves.len(), moves.dim());
    for m in moves.moves() {
        let line: Vec<String> = m.iter().map(i64::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Formats `x` with `digits` significant digits, without exponent for the
/// magnitudes that occur here (probabilities and eigenvalues).
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
