//! Timing separation of safety/progress/target specifications.

mod fragment;
mod rewrite;
mod separated;

use thiserror::Error;

use crate::stl::Interval;

pub use fragment::{FragmentSpec, ProgressTerm, SafetyTerm, TargetTerm};
pub use rewrite::{
    interval_pieces, separate_until, shift_nested, shift_time, split_endpoints, split_temporal,
    TemporalKind,
};
pub use separated::{check_kappas, syntactic_separation, verify_separated, SeparatedSpec, Window};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SeparationError {
    #[error("timing points are not strictly increasing: {0:?}")]
    UnorderedKappas(Vec<usize>),
    #[error("timing points {kappas:?} must run from 0 to the formula length {horizon}")]
    KappasNotSpanning { kappas: Vec<usize>, horizon: usize },
    #[error("split point {kappa} is not inside ({lo},{hi})")]
    KappaOutside { kappa: usize, lo: usize, hi: usize },
    #[error("not a safety/progress/target fragment: {}", .0.join("; "))]
    Shape(Vec<String>),
    #[error("shifting {interval} by {delta} moves it before time 0")]
    ShiftBeforeZero { interval: Interval, delta: i64 },
    #[error("cannot shift a formula by {delta}: it reads time 0 directly")]
    UnshiftableAtRoot { delta: i64 },
}
