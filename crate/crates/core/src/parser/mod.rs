//! Text formats: the formula grammar and scenario documents.

mod formula;
mod lexer;
mod scenario;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stl::{Formula, Predicate};

pub use formula::{format_formula_with, format_predicate, parse_formula_with};
pub use scenario::{format_scenario, parse_scenario, ScenarioFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    EmptyInterval,
    UnknownRegion,
    DimensionMismatch,
    HorizonMismatch,
    Validation,
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, line: usize, col: usize, message: impl Into<String>) -> Self {
        Self {
            kind,
            line,
            col,
            message: message.into(),
        }
    }
}

/// Axis-aligned box `lo <= x <= hi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Region {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "region bounds differ in dimension");
        Self { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Conjunction `x_i >= lo_i & x_i <= hi_i` over every axis, in axis order.
    pub fn formula(&self) -> Formula {
        let mut parts = Vec::with_capacity(2 * self.dim());
        for (i, (&lo, &hi)) in self.lo.iter().zip(&self.hi).enumerate() {
            parts.push(Formula::pred(Predicate::lower_bound(i, lo)));
            parts.push(Formula::pred(Predicate::upper_bound(i, hi)));
        }
        Formula::and(parts)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

pub type RegionTable = BTreeMap<String, Region>;

/// The regions of the built-in robot scenario.
pub fn default_regions() -> RegionTable {
    let r = |x0: f64, x1: f64, y0: f64, y1: f64| Region::new(vec![x0, y0], vec![x1, y1]);
    RegionTable::from([
        ("TARGET".to_string(), r(1.0, 3.0, 4.0, 6.0)),
        ("HOME".to_string(), r(5.0, 7.0, 4.0, 6.0)),
        ("CHARGER".to_string(), r(5.0, 7.0, 1.0, 3.0)),
        ("SAFETY".to_string(), r(-0.5, 7.5, 0.0, 7.0)),
    ])
}

/// Parses a formula against [`default_regions`].
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_with(text, &default_regions())
}

/// Formats a formula, naming [`default_regions`] boxes as `inbox(NAME)`.
pub fn format_formula(phi: &Formula) -> String {
    format_formula_with(phi, &default_regions())
}
