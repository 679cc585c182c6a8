use thiserror::Error;

use crate::grid::Cell;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("BAD_DIMENSIONS: {0}")]
    BadDimensions(String),
    #[error("bad window rows {row_lo}..={row_hi}, cols {col_lo}..={col_hi}")]
    BadWindow {
        row_lo: i32,
        row_hi: i32,
        col_lo: i32,
        col_hi: i32,
    },
    #[error("CELL_OUT_OF_BOUNDS: {0}")]
    CellOutOfBounds(Cell),
    #[error("DUPLICATE_OCCUPANCY: two guards on {0}")]
    DuplicateGuard(Cell),
    #[error("ATTACK_ON_GUARD: {0} already holds a guard")]
    AttackOnGuard(Cell),
    #[error("CONSTRUCTION_FAILED: {0}")]
    ConstructionFailed(String),
    #[error("INVARIANT_VIOLATION: {0}")]
    InvariantViolation(String),
    #[error("NO_CLOSURE: {0}")]
    NoClosure(String),
    #[error("EXCEEDS_LIMIT: {0}")]
    ExceedsLimit(String),
    #[error("NOT_FOUND: nothing found with at most {0} guards")]
    NotFound(u32),
    #[error("INTERNAL: {0}")]
    Internal(String),
    #[error("catalogue format: {0}")]
    Catalogue(String),
}

impl Error {
    /// Stable machine-readable code (the text before the colon).
    pub fn code(&self) -> &'static str {
        match self {
            Error::BadDimensions(_) => "BAD_DIMENSIONS",
            Error::BadWindow { .. } => "BAD_WINDOW",
            Error::CellOutOfBounds(_) => "OUT_OF_BOUNDS",
            Error::DuplicateGuard(_) => "DUPLICATE_OCCUPANCY",
            Error::AttackOnGuard(_) => "ATTACK_ON_GUARD",
            Error::ConstructionFailed(_) => "CONSTRUCTION_FAILED",
            Error::InvariantViolation(_) => "INVARIANT_VIOLATION",
            Error::NoClosure(_) => "NO_CLOSURE",
            Error::ExceedsLimit(_) => "EXCEEDS_LIMIT",
            Error::NotFound(_) => "NOT_FOUND",
            Error::Internal(_) => "INTERNAL",
            Error::Catalogue(_) => "CATALOGUE_FORMAT",
        }
    }
}
