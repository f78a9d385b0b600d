use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::Interval;

/// Affine predicate `coeffs . x + offset >= 0`.
///
/// Trailing zero coefficients are trimmed on construction so that the same
/// half-space always has the same representation, whatever the state dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Predicate {
    coeffs: Vec<f64>,
    offset: f64,
}

fn normalize_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

impl Predicate {
    pub fn new(coeffs: Vec<f64>, offset: f64) -> Self {
        let mut coeffs: Vec<f64> = coeffs.into_iter().map(normalize_zero).collect();
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self {
            coeffs,
            offset: normalize_zero(offset),
        }
    }

    /// `x_i >= bound` for the zero-based state index `i`.
    pub fn lower_bound(i: usize, bound: f64) -> Self {
        let mut coeffs = vec![0.0; i + 1];
        coeffs[i] = 1.0;
        Self::new(coeffs, -bound)
    }

    /// `x_i <= bound`.
    pub fn upper_bound(i: usize, bound: f64) -> Self {
        let mut coeffs = vec![0.0; i + 1];
        coeffs[i] = -1.0;
        Self::new(coeffs, bound)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Smallest state dimension this predicate can be evaluated on.
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// `eta(x)`; callers guarantee `x.len() >= self.dim()`.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .zip(x)
            .map(|(c, v)| c * v)
            .sum::<f64>()
            + self.offset
    }
}

impl PartialEq for Predicate {
    fn eq(&self, other: &Self) -> bool {
        self.offset.to_bits() == other.offset.to_bits()
            && self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl Eq for Predicate {}

impl Hash for Predicate {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.offset.to_bits().hash(state);
        for c in &self.coeffs {
            c.to_bits().hash(state);
        }
    }
}

/// Discrete-time STL formula over canonical closed intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    True,
    Pred(Predicate),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Until(Box<Formula>, Interval, Box<Formula>),
    Eventually(Interval, Box<Formula>),
    Always(Interval, Box<Formula>),
}

impl Formula {
    pub fn pred(p: Predicate) -> Self {
        Formula::Pred(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// `!true`, the empty disjunction.
    pub fn falsum() -> Self {
        Formula::not(Formula::True)
    }

    /// Conjunction; a single operand is returned as is and no operand means `true`.
    pub fn and(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction; no operand means `!true`.
    pub fn or(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::falsum(),
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn always(i: Interval, f: Formula) -> Self {
        Formula::Always(i, Box::new(f))
    }

    pub fn eventually(i: Interval, f: Formula) -> Self {
        Formula::Eventually(i, Box::new(f))
    }

    pub fn until(lhs: Formula, i: Interval, rhs: Formula) -> Self {
        Formula::Until(Box::new(lhs), i, Box::new(rhs))
    }

    /// Formula length: the number of steps after `k` needed to decide `(x, k) |= self`.
    pub fn length(&self) -> usize {
        match self {
            Formula::True | Formula::Pred(_) => 0,
            Formula::Not(f) => f.length(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::length).max().unwrap_or(0),
            Formula::Until(l, i, r) => i.hi() + l.length().max(r.length()),
            Formula::Eventually(i, f) | Formula::Always(i, f) => i.hi() + f.length(),
        }
    }

    /// Earliest time offset (relative to the evaluation time) the formula looks at.
    ///
    /// Together with [`Formula::length`] this is the complete interval of a formula
    /// evaluated at time 0.
    pub fn start(&self) -> usize {
        match self {
            Formula::True | Formula::Pred(_) => 0,
            Formula::Not(f) => f.start(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::start).min().unwrap_or(0),
            // phi1 is required from the evaluation time on.
            Formula::Until(l, i, r) => l.start().min(i.lo() + r.start()),
            Formula::Eventually(i, f) | Formula::Always(i, f) => i.lo() + f.start(),
        }
    }

    /// `[start, length]`: every time step the formula at time 0 depends on.
    pub fn complete_interval(&self) -> Interval {
        Interval::new(self.start(), self.length()).expect("start never exceeds length")
    }

    /// True for formulas built from predicates with `!`, `&`, `|` only.
    pub fn is_boolean(&self) -> bool {
        match self {
            Formula::True | Formula::Pred(_) => true,
            Formula::Not(f) => f.is_boolean(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_boolean),
            _ => false,
        }
    }

    /// Every predicate occurrence, in syntax order.
    pub fn predicates(&self) -> Vec<&Predicate> {
        let mut out = Vec::new();
        self.collect_predicates(&mut out);
        out
    }

    fn collect_predicates<'a>(&'a self, out: &mut Vec<&'a Predicate>) {
        match self {
            Formula::True => {}
            Formula::Pred(p) => out.push(p),
            Formula::Not(f) | Formula::Eventually(_, f) | Formula::Always(_, f) => {
                f.collect_predicates(out)
            }
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_predicates(out))
            }
            Formula::Until(l, _, r) => {
                l.collect_predicates(out);
                r.collect_predicates(out);
            }
        }
    }

    /// Largest predicate dimension occurring in the formula.
    pub fn dim(&self) -> usize {
        self.predicates().iter().map(|p| p.dim()).max().unwrap_or(0)
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            Formula::True | Formula::Pred(_) => 0,
            Formula::Not(f) | Formula::Eventually(_, f) | Formula::Always(_, f) => f.size(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::size).sum(),
            Formula::Until(l, _, r) => l.size() + r.size(),
        }
    }
}
