use std::fs;
use std::path::Path;

use slinkage::PointMatrix;

use super::{excerpt, utf8, ParseError};
use crate::error::CliError;

pub const BINARY_MAGIC: &[u8; 4] = b"SLNK";
pub const BINARY_VERSION: u32 = 1;
const HEADER_LEN: usize = 16;

/// Parses header-free comma-separated rows. Values are read at 32-bit
/// precision, like the binary format, so both encodings of the same data
/// produce the same matrix. Blank lines are ignored.
pub fn parse_csv_matrix(bytes: &[u8]) -> Result<PointMatrix, ParseError> {
    let text = utf8(bytes)?;
    let mut values: Vec<f32> = Vec::new();
    let mut n_cols: Option<usize> = None;
    let mut n_rows = 0;
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut count = 0;
        for (j, field) in line.split(',').enumerate() {
            let field = field.trim();
            let v: f32 = field.parse().map_err(|_| {
                ParseError::line(lineno, format!("column {}: cannot parse {} as a number", j + 1, excerpt(field)))
            })?;
            if !v.is_finite() {
                return Err(ParseError::line(
                    lineno,
                    format!("column {}: {} is not a finite 32-bit value", j + 1, excerpt(field)),
                ));
            }
            values.push(v);
            count += 1;
        }
        match n_cols {
            None => n_cols = Some(count),
            Some(c) if c != count => {
                return Err(ParseError::line(lineno, format!("expected {c} columns, found {count}")));
            }
            Some(_) => {}
        }
        n_rows += 1;
    }
    let n_cols = n_cols.ok_or_else(|| ParseError::line(last_line.max(1), "no data rows"))?;
    PointMatrix::from_f32(n_rows, n_cols, &values).map_err(|e| ParseError::line(last_line, e.to_string()))
}

/// Decodes `"SLNK"`, `u32` version, `u32` rows, `u32` cols, then
/// `rows * cols` little-endian `f32` values in row-major order. All header
/// integers are little-endian.
pub fn decode_binary_matrix(bytes: &[u8]) -> Result<PointMatrix, ParseError> {
    if bytes.len() < HEADER_LEN {
        return Err(ParseError::offset(
            bytes.len(),
            format!("truncated header: {} of {HEADER_LEN} bytes", bytes.len()),
        ));
    }
    if &bytes[..4] != BINARY_MAGIC {
        return Err(ParseError::offset(0, "missing SLNK magic"));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    let version = word(4);
    if version != BINARY_VERSION {
        return Err(ParseError::offset(4, format!("unsupported version {version}")));
    }
    let (rows, cols) = (word(8) as usize, word(12) as usize);
    if rows == 0 {
        return Err(ParseError::offset(8, "matrix has no rows"));
    }
    if cols == 0 {
        return Err(ParseError::offset(12, "matrix has no columns"));
    }
    let payload = &bytes[HEADER_LEN..];
    let expected = (rows as u128) * (cols as u128) * 4;
    if payload.len() as u128 != expected {
        return Err(ParseError::offset(
            HEADER_LEN + payload.len().min(expected.min(usize::MAX as u128) as usize),
            format!("payload has {} bytes, header declares {expected}", payload.len()),
        ));
    }
    let mut values = Vec::with_capacity(rows * cols);
    for (i, chunk) in payload.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(ParseError::offset(
                HEADER_LEN + 4 * i,
                format!("row {}, column {} is not finite", i / cols, i % cols),
            ));
        }
        values.push(v);
    }
    PointMatrix::from_f32(rows, cols, &values).map_err(|e| ParseError::offset(HEADER_LEN, e.to_string()))
}

pub fn encode_binary_matrix(rows: u32, cols: u32, values: &[f32]) -> Vec<u8> {
    assert_eq!(values.len() as u64, u64::from(rows) * u64::from(cols), "payload length");
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * values.len());
    out.extend_from_slice(BINARY_MAGIC);
    for w in [BINARY_VERSION, rows, cols] {
        out.extend_from_slice(&w.to_le_bytes());
    }
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Reads a point matrix, choosing the decoder by the leading magic bytes.
pub fn read_matrix(path: &Path) -> Result<PointMatrix, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let parsed = if bytes.starts_with(BINARY_MAGIC) {
        decode_binary_matrix(&bytes)
    } else {
        parse_csv_matrix(&bytes)
    };
    parsed.map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}
