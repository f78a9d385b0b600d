//! Parser-level intervals with open or closed ends, and their reduction to
//! closed integer intervals.

use std::fmt;

use super::{Formula, Interval, Predicate, StlError};

/// Interval as written: `[a,b]`, `(a,b)`, `[a,b)`, `(a,b]` or the point `{k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawInterval {
    pub lo: i64,
    pub hi: i64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl RawInterval {
    pub fn closed(lo: i64, hi: i64) -> Self {
        Self {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn open(lo: i64, hi: i64) -> Self {
        Self {
            lo,
            hi,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn point(k: i64) -> Self {
        Self::closed(k, k)
    }

    /// Integer time points of the interval as a closed interval.
    pub fn canonical(&self) -> Result<Interval, StlError> {
        let lo = self.lo + i64::from(self.lo_open);
        let hi = self.hi - i64::from(self.hi_open);
        if lo > hi {
            return Err(StlError::EmptyInterval { lo, hi });
        }
        if lo < 0 {
            return Err(StlError::NegativeTime(lo));
        }
        Interval::new(lo as usize, hi as usize)
    }
}

impl fmt::Display for RawInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_open { '(' } else { '[' };
        let r = if self.hi_open { ')' } else { ']' };
        write!(f, "{l}{},{}{r}", self.lo, self.hi)
    }
}

/// Formula with raw interval annotations.
#[derive(Clone, Debug, PartialEq)]
pub enum RawFormula {
    True,
    Pred(Predicate),
    Not(Box<RawFormula>),
    And(Vec<RawFormula>),
    Or(Vec<RawFormula>),
    Until(Box<RawFormula>, RawInterval, Box<RawFormula>),
    Eventually(RawInterval, Box<RawFormula>),
    Always(RawInterval, Box<RawFormula>),
}

/// Closes every interval on integer time: `(a,b)` becomes `[a+1,b-1]`.
pub fn canonicalize(phi: &RawFormula) -> Result<Formula, StlError> {
    Ok(match phi {
        RawFormula::True => Formula::True,
        RawFormula::Pred(p) => Formula::Pred(p.clone()),
        RawFormula::Not(f) => Formula::not(canonicalize(f)?),
        RawFormula::And(fs) => Formula::and(fs.iter().map(canonicalize).collect::<Result<_, _>>()?),
        RawFormula::Or(fs) => Formula::or(fs.iter().map(canonicalize).collect::<Result<_, _>>()?),
        RawFormula::Until(l, i, r) => {
            Formula::until(canonicalize(l)?, i.canonical()?, canonicalize(r)?)
        }
        RawFormula::Eventually(i, f) => Formula::eventually(i.canonical()?, canonicalize(f)?),
        RawFormula::Always(i, f) => Formula::always(i.canonical()?, canonicalize(f)?),
    })
}
