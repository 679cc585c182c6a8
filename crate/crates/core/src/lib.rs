//! Eternal domination on rectangular grids.

pub mod audit;
pub mod checks;
pub mod error;
pub mod finite;
pub mod grid;
pub mod infinite;
pub mod matching;
pub mod pattern;
pub mod solver;
pub mod tables;
pub mod trace;

pub use error::Error;
