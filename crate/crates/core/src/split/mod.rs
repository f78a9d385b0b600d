//! Complete split of a separated specification and modular checking.

mod check;
mod complete;
pub mod oracle;

use thiserror::Error;

use crate::separation::SeparationError;
use crate::stl::StlError;

pub use check::{modular_check, Verdict};
pub use complete::{
    check_nonoverlap, complete_split, tau_range, CarryTerm, EventuallyTerm, SplitSpec,
    SplitWindow, TauPlan,
};
pub use oracle::{enumerate_oracle, OracleError, SatSet};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SplitError {
    #[error("window {window} has width {width}, narrower than progress horizon c = {c}")]
    WindowTooNarrow { window: usize, width: usize, c: usize },
    #[error("tau = {tau} for progress term {term} of window {window} is outside [{lo},{hi}]")]
    TauOutOfRange {
        window: usize,
        term: usize,
        tau: usize,
        lo: usize,
        hi: usize,
    },
    #[error("head of length {head_len} for progress term {term} of window {window} does not fit into the next window")]
    HeadDoesNotFit {
        window: usize,
        term: usize,
        head_len: usize,
    },
    #[error("{given} explicit tau values given, {needed} needed")]
    MissingTau { needed: usize, given: usize },
    #[error("trace horizon {trace} differs from the split horizon {split}")]
    LengthMismatch { trace: usize, split: usize },
    #[error("window formulas overlap their windows: {0}")]
    Overlap(String),
    #[error(transparent)]
    Separation(#[from] SeparationError),
    #[error(transparent)]
    Stl(#[from] StlError),
}
