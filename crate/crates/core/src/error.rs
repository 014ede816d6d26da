use alloc::string::String;
use alloc::vec::Vec;

use crate::exact::{DegreeError, ParseError};
use crate::weyl::AdaptedReport;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("expected {expected} diagonal values, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("diagonal offset {offset} does not fit a {dim}x{dim} matrix")]
    OffsetOutOfRange { dim: usize, offset: isize },

    #[error("matrix dimensions differ: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("matrix is not unipotent upper triangular: {0}")]
    NotUnipotent(String),

    #[error("invalid Fano parameters N={n}, k={k}: {reason}")]
    InvalidParams { n: i64, k: i64, reason: String },

    #[error("family is not adapted: {0}")]
    NotAdapted(AdaptedReport),

    #[error("family is not of Picard-Fuchs shape: {0}")]
    UnsupportedFamily(String),

    #[error("Q_{i}^{alpha} is not a constant {expected}-diagonal matrix")]
    BandViolation {
        i: usize,
        alpha: usize,
        expected: usize,
    },

    #[error("malformed connection at ({row}, {col}) (1-based): {reason}")]
    MalformedConnection {
        row: usize,
        col: usize,
        reason: String,
    },

    #[error(transparent)]
    Degree(#[from] DegreeError),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub(crate) fn malformed(row0: usize, col0: usize, reason: impl Into<String>) -> Self {
        Error::MalformedConnection {
            row: row0 + 1,
            col: col0 + 1,
            reason: reason.into(),
        }
    }

    pub(crate) fn not_unipotent(entries: Vec<(usize, usize)>) -> Self {
        use core::fmt::Write;
        let mut s = String::from("offending entries");
        for (i, j) in entries.iter().take(8) {
            let _ = write!(s, " ({}, {})", i + 1, j + 1);
        }
        Error::NotUnipotent(s)
    }
}
