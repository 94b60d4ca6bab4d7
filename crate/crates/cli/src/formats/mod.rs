//! Input decoders and output writers.
//!
//! Point matrices come either as header-free numeric CSV or in the `SLNK`
//! binary layout; graphs come as Matrix Market coordinate files. Every
//! decoder takes raw bytes and reports failures with a line number or byte
//! offset.

mod matrix;
mod mtx;
mod output;

use std::fmt;

pub use matrix::{decode_binary_matrix, encode_binary_matrix, parse_csv_matrix, read_matrix, BINARY_MAGIC, BINARY_VERSION};
pub use mtx::{parse_matrix_market, MtxGraph, MtxSymmetry};
pub use output::{write_dendrogram, write_knn, write_labels, write_mst};

/// Where in the input a decoder gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Line(usize),
    Offset(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: Position,
    pub message: String,
}

impl ParseError {
    pub fn line(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            position: Position::Line(line),
            message: message.into(),
        }
    }

    pub fn offset(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            position: Position::Offset(offset),
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Position::Line(l) => write!(f, "line {l}: {}", self.message),
            Position::Offset(o) => write!(f, "byte offset {o}: {}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

fn utf8(bytes: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(bytes).map_err(|e| ParseError::offset(e.valid_up_to(), "input is not valid UTF-8"))
}

/// Shortens a field for an error message.
fn excerpt(s: &str) -> String {
    const MAX: usize = 24;
    match s.char_indices().nth(MAX) {
        Some((i, _)) => format!("{:?}...", &s[..i]),
        None => format!("{s:?}"),
    }
}
