use crate::stl::{Formula, Interval};

use super::SeparationError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemporalKind {
    Always,
    Eventually,
}

impl TemporalKind {
    fn wrap(self, i: Interval, f: Formula) -> Formula {
        match self {
            TemporalKind::Always => Formula::always(i, f),
            TemporalKind::Eventually => Formula::eventually(i, f),
        }
    }

    fn join(self, parts: Vec<Formula>) -> Formula {
        match self {
            TemporalKind::Always => Formula::and(parts),
            TemporalKind::Eventually => Formula::or(parts),
        }
    }
}

pub(crate) fn check_increasing(kappas: &[usize]) -> Result<(), SeparationError> {
    if kappas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SeparationError::UnorderedKappas(kappas.to_vec()));
    }
    Ok(())
}

/// Sub-intervals of `i` cut at every `kappa` strictly inside it; consecutive pieces
/// share their endpoint.
pub fn interval_pieces(i: Interval, kappas: &[usize]) -> Vec<Interval> {
    let mut cuts = vec![i.lo()];
    cuts.extend(kappas.iter().copied().filter(|k| i.lo() < *k && *k < i.hi()));
    cuts.push(i.hi());
    cuts.windows(2)
        .map(|w| Interval::new(w[0], w[1]).unwrap())
        .collect()
}

/// `G[a,b] psi` as a conjunction (or `F[a,b] psi` as a disjunction) of the same
/// operator over the pieces of `[a,b]` cut at the interior `kappas`.
pub fn split_temporal(
    kind: TemporalKind,
    interval: Interval,
    kappas: &[usize],
    psi: &Formula,
) -> Result<Formula, SeparationError> {
    check_increasing(kappas)?;
    let parts = interval_pieces(interval, kappas)
        .into_iter()
        .map(|p| kind.wrap(p, psi.clone()))
        .collect();
    Ok(kind.join(parts))
}

/// `G[a,b] phi` as `G{a} phi & G(a,b) phi & G{b} phi`, dropping pieces that close
/// to nothing (and the duplicate endpoint when `a == b`); `F` is the disjunctive dual.
pub fn split_endpoints(kind: TemporalKind, interval: Interval, phi: &Formula) -> Formula {
    let (a, b) = (interval.lo(), interval.hi());
    let mut parts = vec![kind.wrap(Interval::point(a), phi.clone())];
    if b > a + 1 {
        parts.push(kind.wrap(Interval::new(a + 1, b - 1).unwrap(), phi.clone()));
    }
    if b > a {
        parts.push(kind.wrap(Interval::point(b), phi.clone()));
    }
    kind.join(parts)
}

/// An equivalent of `F{kappa} phi` (evaluation of `phi` at time `kappa`) with the
/// point operator pushed through negation, conjunction, disjunction and until, and
/// absorbed into `G`/`F` intervals. Predicates keep an explicit `F[kappa,kappa]`.
pub fn shift_nested(kappa: usize, phi: &Formula) -> Formula {
    if kappa == 0 {
        return phi.clone();
    }
    match phi {
        Formula::True => Formula::True,
        Formula::Pred(_) => Formula::eventually(Interval::point(kappa), phi.clone()),
        Formula::Not(f) => Formula::not(shift_nested(kappa, f)),
        Formula::And(fs) => Formula::And(fs.iter().map(|f| shift_nested(kappa, f)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|f| shift_nested(kappa, f)).collect()),
        Formula::Until(l, i, r) => {
            Formula::until(shift_nested(kappa, l), *i, shift_nested(kappa, r))
        }
        Formula::Always(i, f) => Formula::Always(i.shift_up(kappa), f.clone()),
        Formula::Eventually(i, f) => Formula::Eventually(i.shift_up(kappa), f.clone()),
    }
}

/// Re-times `phi` by `delta` steps: the result at time 0 means `phi` at time `delta`
/// when `delta >= 0`; with `delta < 0` it is the inverse, used to move a window
/// formula stated in absolute time onto a sub-trace starting at `-delta`.
///
/// Negative shifts must not push any top-level temporal interval below 0 and can
/// only pass through `!`, `&`, `|`, `G` and `F`.
pub fn shift_time(phi: &Formula, delta: i64) -> Result<Formula, SeparationError> {
    if delta >= 0 {
        return Ok(shift_nested(delta as usize, phi));
    }
    let down = delta.unsigned_abs() as usize;
    let mapped = |fs: &[Formula]| fs.iter().map(|f| shift_time(f, delta)).collect::<Result<Vec<_>, _>>();
    Ok(match phi {
        Formula::True => Formula::True,
        Formula::Not(f) => Formula::not(shift_time(f, delta)?),
        Formula::And(fs) => Formula::And(mapped(fs)?),
        Formula::Or(fs) => Formula::Or(mapped(fs)?),
        Formula::Always(i, f) | Formula::Eventually(i, f) => {
            let j = i.shift_down(down).ok_or(SeparationError::ShiftBeforeZero {
                interval: *i,
                delta,
            })?;
            if matches!(phi, Formula::Always(..)) {
                Formula::Always(j, f.clone())
            } else {
                Formula::Eventually(j, f.clone())
            }
        }
        Formula::Pred(_) | Formula::Until(..) => {
            return Err(SeparationError::UnshiftableAtRoot { delta })
        }
    })
}

fn and_simplified(lhs: Formula, rhs: Formula) -> Formula {
    match (lhs, rhs) {
        (Formula::True, f) | (f, Formula::True) => f,
        (l, r) => Formula::and(vec![l, r]),
    }
}

fn until_simplified(lhs: &Formula, i: Interval, rhs: &Formula) -> Formula {
    if *lhs == Formula::True {
        Formula::eventually(i, rhs.clone())
    } else {
        Formula::until(lhs.clone(), i, rhs.clone())
    }
}

/// Splits `phi1 U(a,b) phi2` (open interval) at `kappa`, `a < kappa < b`:
///
/// `phi1 U(a,kappa) phi2 | (G[0,kappa-1] phi1 & F{kappa}(phi1 & phi2 | phi1 U(0,b-kappa) phi2))`
///
/// The guard covers `[0, kappa-1]` because until requires `phi1` from the evaluation
/// time on. Pieces whose intervals close to nothing are dropped and `true` operands
/// are simplified away, so `phi1 = true` yields the pure `F` split.
pub fn separate_until(
    phi1: &Formula,
    a: usize,
    b: usize,
    phi2: &Formula,
    kappa: usize,
) -> Result<Formula, SeparationError> {
    if !(a < kappa && kappa < b) {
        return Err(SeparationError::KappaOutside {
            kappa,
            lo: a,
            hi: b,
        });
    }
    let mut disjuncts = Vec::new();
    if a + 1 < kappa {
        disjuncts.push(until_simplified(phi1, Interval::new(a + 1, kappa - 1).unwrap(), phi2));
    }
    let mut at_kappa = vec![and_simplified(phi1.clone(), phi2.clone())];
    if kappa + 2 <= b {
        at_kappa.push(until_simplified(phi1, Interval::new(1, b - 1 - kappa).unwrap(), phi2));
    }
    let guard = if *phi1 == Formula::True {
        Formula::True
    } else {
        Formula::always(Interval::new(0, kappa - 1).unwrap(), phi1.clone())
    };
    let later = Formula::eventually(Interval::point(kappa), Formula::or(at_kappa));
    disjuncts.push(and_simplified(guard, later));
    Ok(Formula::or(disjuncts))
}
