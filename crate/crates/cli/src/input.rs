//! Parsing of line-sum input files.
//!
//! Two formats are accepted and auto-detected:
//!
//! - text: two lines `rows = 11 10 8 ...` and `cols = 12 10 7 ...`,
//!   whitespace-separated decimal, in either order;
//! - JSON: an object `{"rows": [...], "cols": [...]}` (detected by a leading
//!   `{`).

use std::fmt;

/// Raw sums as read from the input, before monotonicity checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSums {
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
}

/// A parse failure with a position when one is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line, when known.
    pub line: Option<usize>,
    /// 1-based column, when known.
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(line), Some(column)) => {
                write!(f, "line {line}, column {column}: {}", self.message)
            }
            (Some(line), None) => write!(f, "line {line}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: Option<usize>, column: Option<usize>, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Parses either input format, detecting JSON by the first non-space byte.
pub fn parse_sums(text: &str) -> Result<RawSums, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

fn parse_text(text: &str) -> Result<RawSums, ParseError> {
    let mut rows: Option<Vec<u32>> = None;
    let mut cols: Option<Vec<u32>> = None;
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(err(
                Some(line_no),
                None,
                "expected `rows = ...` or `cols = ...`",
            ));
        };
        let key = line[..eq].trim();
        let slot = match key {
            "rows" => &mut rows,
            "cols" => &mut cols,
            other => {
                let column = line.find(other.chars().next().unwrap_or('=')).unwrap_or(0) + 1;
                return Err(err(
                    Some(line_no),
                    Some(column),
                    format!("unknown key {other:?}, expected \"rows\" or \"cols\""),
                ));
            }
        };
        if slot.is_some() {
            return Err(err(Some(line_no), None, format!("duplicate `{key}` line")));
        }
        *slot = Some(parse_numbers(line, eq + 1, line_no)?);
    }
    let rows = rows.ok_or_else(|| err(None, None, "missing `rows = ...` line"))?;
    let cols = cols.ok_or_else(|| err(None, None, "missing `cols = ...` line"))?;
    Ok(RawSums { rows, cols })
}

/// Parses the whitespace-separated integers after the `=`.
fn parse_numbers(line: &str, from: usize, line_no: usize) -> Result<Vec<u32>, ParseError> {
    let mut values = Vec::new();
    let rest = &line[from..];
    let mut cursor = 0usize;
    while let Some(skip) = rest[cursor..].find(|c: char| !c.is_whitespace()) {
        let start = cursor + skip;
        let end = rest[start..]
            .find(char::is_whitespace)
            .map_or(rest.len(), |p| start + p);
        let token = &rest[start..end];
        let column = from + start + 1;
        let value: u32 = token.parse().map_err(|_| {
            err(
                Some(line_no),
                Some(column),
                format!("invalid number {token:?}"),
            )
        })?;
        values.push(value);
        cursor = end;
    }
    if values.is_empty() {
        return Err(err(Some(line_no), None, "no values after `=`"));
    }
    Ok(values)
}

fn parse_json(text: &str) -> Result<RawSums, ParseError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| err(Some(e.line()), Some(e.column()), e.to_string()))?;
    let object = value
        .as_object()
        .ok_or_else(|| err(None, None, "top-level JSON value must be an object"))?;
    let axis = |key: &str| -> Result<Vec<u32>, ParseError> {
        let entries = object
            .get(key)
            .ok_or_else(|| err(None, None, format!("missing \"{key}\" array")))?
            .as_array()
            .ok_or_else(|| err(None, None, format!("\"{key}\" must be an array")))?;
        entries
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| {
                        err(
                            None,
                            None,
                            format!("\"{key}[{i}]\" is not a non-negative 32-bit integer"),
                        )
                    })
            })
            .collect()
    };
    Ok(RawSums {
        rows: axis("rows")?,
        cols: axis("cols")?,
    })
}
