//! STL syntax, discrete-time semantics and robustness.

mod canonical;
mod formula;
mod interval;
mod semantics;
mod trace;

use thiserror::Error;

pub use canonical::{canonicalize, RawFormula, RawInterval};
pub use formula::{Formula, Predicate};
pub use interval::Interval;
pub use semantics::{evaluate, robustness};
pub use trace::Trace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StlError {
    #[error("empty interval [{lo},{hi}]")]
    EmptyInterval { lo: i64, hi: i64 },
    #[error("negative time bound {0}")]
    NegativeTime(i64),
    #[error("trace has no samples")]
    EmptyTrace,
    #[error("sample {step} has dimension {found}, expected {expected}")]
    RaggedTrace {
        step: usize,
        expected: usize,
        found: usize,
    },
    #[error("segment [{from},{to}] outside trace horizon {horizon}")]
    SegmentOutOfRange {
        from: usize,
        to: usize,
        horizon: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("traces do not share the stitching sample")]
    StitchMismatch,
    #[error("trace too short: formula needs horizon {needed}, trace has {available}")]
    HorizonTooShort { needed: usize, available: usize },
}
