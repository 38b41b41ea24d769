//! Dataset ingestion and output formatting.
//!
//! Input CSV format: header `x_lo,x_hi,count`, one bin per row, rows
//! ascending in `x_lo`, `.` decimal point, UTF-8, `#` starts a comment line.
//! Counts must be exact non-negative integers (a float literal like `3.0`
//! is accepted, `3.5` is not).
//!
//! Output floats are serialized with 17 significant digits so results
//! round-trip bit-exactly.

use crate::dataset::{Bin, Gap};
use crate::error::{Error, Result};

/// Largest count representable exactly in an f64 literal.
const MAX_EXACT_COUNT: f64 = 9.007_199_254_740_992e15; // 2^53

/// Parse the bin table from CSV text.
pub fn parse_bins_csv(text: &str) -> Result<Vec<Bin>> {
    let mut bins = Vec::new();
    let mut saw_header = false;
    let mut row_index = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            let normalized: String = line.chars().filter(|c| !c.is_whitespace()).collect();
            if !normalized.eq_ignore_ascii_case("x_lo,x_hi,count") {
                return Err(Error::MalformedInput {
                    line: lineno + 1,
                    message: format!("expected header 'x_lo,x_hi,count', found '{line}'"),
                });
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::MalformedInput {
                line: lineno + 1,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let x_lo = parse_number(fields[0], lineno + 1)?;
        let x_hi = parse_number(fields[1], lineno + 1)?;
        let count_raw = parse_number(fields[2], lineno + 1)?;
        if count_raw < 0.0
            || count_raw.fract() != 0.0
            || !count_raw.is_finite()
            || count_raw > MAX_EXACT_COUNT
        {
            return Err(Error::NonIntegerCount {
                index: row_index,
                value: count_raw,
            });
        }
        bins.push(Bin::new(x_lo, x_hi, count_raw as u64));
        row_index += 1;
    }
    if !saw_header {
        return Err(Error::MalformedInput {
            line: 1,
            message: "missing header 'x_lo,x_hi,count'".into(),
        });
    }
    Ok(bins)
}

fn parse_number(field: &str, line: usize) -> Result<f64> {
    field.parse::<f64>().map_err(|_| Error::MalformedInput {
        line,
        message: format!("not a number: '{field}'"),
    })
}

/// Parse the `--gaps "a:b,a:b"` flag.
pub fn parse_gaps_flag(value: &str) -> Result<Vec<Gap>> {
    let mut gaps = Vec::new();
    for part in value.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (a, b) = part.split_once(':').ok_or_else(|| Error::MalformedInput {
            line: 0,
            message: format!("gap '{part}' is not of the form a:b"),
        })?;
        let x_a = parse_number(a.trim(), 0)?;
        let x_b = parse_number(b.trim(), 0)?;
        gaps.push(Gap::new(x_a, x_b));
    }
    Ok(gaps)
}

/// Format a float with 17 significant digits (scientific notation).
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// A JSON number carrying 17 significant digits; non-finite values map to
/// null (JSON has no infinity).
pub fn json_f64(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::Value::Number(serde_json::Number::from_string_unchecked(format_f64(v)))
    } else {
        serde_json::Value::Null
    }
}

/// JSON array of floats, each with 17 significant digits.
pub fn json_f64_array(values: impl IntoIterator<Item = f64>) -> serde_json::Value {
    serde_json::Value::Array(values.into_iter().map(json_f64).collect())
}
