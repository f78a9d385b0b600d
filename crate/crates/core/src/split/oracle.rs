//! Exhaustive satisfaction sets over boolean abstractions of traces.
//!
//! Each atom is a predicate; a boolean trace assigns every atom a truth value at
//! every step `0..=L`. Trace number `t` sets atom `i` at step `k` iff bit
//! `k * n_atoms + i` of `t` is one.

use std::collections::HashMap;

use thiserror::Error;

use crate::stl::{Formula, Predicate, Trace};

/// Largest number of enumerated trace bits, `n_atoms * (L + 1)`.
pub const ORACLE_BIT_BUDGET: usize = 30;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum OracleError {
    #[error("enumeration needs 2^{bits} traces, budget is 2^{ORACLE_BIT_BUDGET}")]
    BudgetExceeded { bits: usize },
    #[error("formula needs horizon {needed}, enumeration horizon is {horizon}")]
    HorizonTooShort { needed: usize, horizon: usize },
    #[error("predicate {0:?} is not among the atoms")]
    UnknownAtom(Predicate),
}

/// A set of boolean traces, stored as a bitset over trace numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatSet {
    n_atoms: usize,
    horizon: usize,
    words: Vec<u64>,
}

fn n_words(bits: usize) -> usize {
    (1usize << bits).div_ceil(64)
}

impl SatSet {
    fn total_bits(&self) -> usize {
        self.n_atoms * (self.horizon + 1)
    }

    fn tail_mask(&self) -> u64 {
        let n = 1usize << self.total_bits();
        if n >= 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    fn filled(n_atoms: usize, horizon: usize, value: bool) -> Self {
        let mut s = Self {
            n_atoms,
            horizon,
            words: vec![if value { u64::MAX } else { 0 }; n_words(n_atoms * (horizon + 1))],
        };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let m = self.tail_mask();
        if let Some(w) = self.words.last_mut() {
            *w &= m;
        }
    }

    /// Traces where bit `p` of the trace number is one.
    fn bit_pattern(n_atoms: usize, horizon: usize, p: usize) -> Self {
        let mut s = Self::filled(n_atoms, horizon, false);
        if p >= 6 {
            let stride = 1usize << (p - 6);
            for (w, word) in s.words.iter_mut().enumerate() {
                if (w / stride) % 2 == 1 {
                    *word = u64::MAX;
                }
            }
        } else {
            let mut mask = 0u64;
            for b in 0..64 {
                if (b >> p) & 1 == 1 {
                    mask |= 1 << b;
                }
            }
            s.words.iter_mut().for_each(|w| *w = mask);
        }
        s.trim();
        s
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Number of enumerated traces, `2^(n_atoms * (L + 1))`.
    pub fn universe_size(&self) -> usize {
        1 << self.total_bits()
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn contains(&self, trace: usize) -> bool {
        self.words[trace / 64] >> (trace % 64) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &SatSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn difference(&self, other: &SatSet) -> SatSet {
        self.zip(other, |a, b| a & !b)
    }

    pub fn intersection(&self, other: &SatSet) -> SatSet {
        self.zip(other, |a, b| a & b)
    }

    pub fn union(&self, other: &SatSet) -> SatSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn complement(&self) -> SatSet {
        let mut s = SatSet {
            words: self.words.iter().map(|w| !w).collect(),
            ..*self
        };
        s.trim();
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe_size()).filter(|t| self.contains(*t))
    }

    fn zip(&self, other: &SatSet, op: impl Fn(u64, u64) -> u64) -> SatSet {
        assert_eq!(
            (self.n_atoms, self.horizon),
            (other.n_atoms, other.horizon),
            "satisfaction sets over different universes"
        );
        SatSet {
            n_atoms: self.n_atoms,
            horizon: self.horizon,
            words: self.words.iter().zip(&other.words).map(|(a, b)| op(*a, *b)).collect(),
        }
    }

    fn and_assign(&mut self, other: &SatSet) {
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= b);
    }

    fn or_assign(&mut self, other: &SatSet) {
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a |= b);
    }
}

struct Enumerator<'a> {
    atoms: &'a [Predicate],
    horizon: usize,
    memo: HashMap<(*const Formula, usize), SatSet>,
}

impl Enumerator<'_> {
    fn empty(&self, value: bool) -> SatSet {
        SatSet::filled(self.atoms.len(), self.horizon, value)
    }

    fn sat(&mut self, phi: &Formula, k: usize) -> Result<SatSet, OracleError> {
        let key = (phi as *const Formula, k);
        if let Some(s) = self.memo.get(&key) {
            return Ok(s.clone());
        }
        let s = match phi {
            Formula::True => self.empty(true),
            Formula::Pred(p) => {
                let i = self
                    .atoms
                    .iter()
                    .position(|a| a == p)
                    .ok_or_else(|| OracleError::UnknownAtom(p.clone()))?;
                SatSet::bit_pattern(self.atoms.len(), self.horizon, k * self.atoms.len() + i)
            }
            Formula::Not(f) => self.sat(f, k)?.complement(),
            Formula::And(fs) => {
                let mut acc = self.empty(true);
                for f in fs {
                    acc.and_assign(&self.sat(f, k)?);
                }
                acc
            }
            Formula::Or(fs) => {
                let mut acc = self.empty(false);
                for f in fs {
                    acc.or_assign(&self.sat(f, k)?);
                }
                acc
            }
            Formula::Always(i, f) => {
                let mut acc = self.empty(true);
                for j in i.iter() {
                    acc.and_assign(&self.sat(f, k + j)?);
                }
                acc
            }
            Formula::Eventually(i, f) => {
                let mut acc = self.empty(false);
                for j in i.iter() {
                    acc.or_assign(&self.sat(f, k + j)?);
                }
                acc
            }
            Formula::Until(l, i, r) => {
                let mut lhs = self.empty(true);
                for t in k..k + i.lo() {
                    lhs.and_assign(&self.sat(l, t)?);
                }
                let mut acc = self.empty(false);
                for t in k + i.lo()..=k + i.hi() {
                    lhs.and_assign(&self.sat(l, t)?);
                    acc.or_assign(&lhs.intersection(&self.sat(r, t)?));
                }
                acc
            }
        };
        self.memo.insert(key, s.clone());
        Ok(s)
    }
}

/// The boolean traces over `atoms` of horizon `horizon` satisfying `phi` at time 0.
pub fn enumerate_oracle(
    phi: &Formula,
    atoms: &[Predicate],
    horizon: usize,
) -> Result<SatSet, OracleError> {
    let bits = atoms.len() * (horizon + 1);
    if bits > ORACLE_BIT_BUDGET {
        return Err(OracleError::BudgetExceeded { bits });
    }
    if phi.length() > horizon {
        return Err(OracleError::HorizonTooShort {
            needed: phi.length(),
            horizon,
        });
    }
    Enumerator {
        atoms,
        horizon,
        memo: HashMap::new(),
    }
    .sat(phi, 0)
}

/// The atoms `x_i >= 0` for `i < n`.
pub fn axis_atoms(n: usize) -> Vec<Predicate> {
    (0..n).map(|i| Predicate::lower_bound(i, 0.0)).collect()
}

/// A real trace realizing boolean trace number `trace` over [`axis_atoms`]:
/// `x_i(k) = 1` where the atom holds and `-1` elsewhere.
pub fn realize_axis(trace: usize, n_atoms: usize, horizon: usize) -> Trace {
    let samples = (0..=horizon)
        .map(|k| {
            (0..n_atoms)
                .map(|i| if trace >> (k * n_atoms + i) & 1 == 1 { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    Trace::new(samples).expect("non-empty, uniform")
}
