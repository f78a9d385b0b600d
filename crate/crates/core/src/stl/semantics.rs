//! Qualitative and quantitative (min/max robustness) semantics on finite traces.

use super::{Formula, StlError, Trace};

fn check_horizon(trace: &Trace, k: usize, phi: &Formula) -> Result<(), StlError> {
    let needed = k + phi.length();
    if needed > trace.horizon() {
        return Err(StlError::HorizonTooShort {
            needed,
            available: trace.horizon(),
        });
    }
    if phi.dim() > trace.dim() {
        return Err(StlError::DimensionMismatch {
            expected: phi.dim(),
            found: trace.dim(),
        });
    }
    Ok(())
}

/// `(trace, k) |= phi`.
pub fn evaluate(trace: &Trace, k: usize, phi: &Formula) -> Result<bool, StlError> {
    check_horizon(trace, k, phi)?;
    Ok(sat(trace, k, phi))
}

fn sat(x: &Trace, k: usize, phi: &Formula) -> bool {
    match phi {
        Formula::True => true,
        Formula::Pred(p) => p.value(x.sample(k)) >= 0.0,
        Formula::Not(f) => !sat(x, k, f),
        Formula::And(fs) => fs.iter().all(|f| sat(x, k, f)),
        Formula::Or(fs) => fs.iter().any(|f| sat(x, k, f)),
        Formula::Always(i, f) => i.iter().all(|j| sat(x, k + j, f)),
        Formula::Eventually(i, f) => i.iter().any(|j| sat(x, k + j, f)),
        Formula::Until(l, i, r) => {
            // phi1 must hold on every step of [k, k'] including k'.
            let mut lhs_so_far = (k..k + i.lo()).all(|t| sat(x, t, l));
            for kp in k + i.lo()..=k + i.hi() {
                if !lhs_so_far {
                    return false;
                }
                lhs_so_far = sat(x, kp, l);
                if lhs_so_far && sat(x, kp, r) {
                    return true;
                }
            }
            false
        }
    }
}

/// Robustness degree `rho(trace, k, phi)`; positive implies satisfaction, negative violation.
pub fn robustness(trace: &Trace, k: usize, phi: &Formula) -> Result<f64, StlError> {
    check_horizon(trace, k, phi)?;
    Ok(rho(trace, k, phi))
}

fn rho(x: &Trace, k: usize, phi: &Formula) -> f64 {
    match phi {
        Formula::True => f64::INFINITY,
        Formula::Pred(p) => p.value(x.sample(k)),
        Formula::Not(f) => -rho(x, k, f),
        Formula::And(fs) => fs.iter().map(|f| rho(x, k, f)).fold(f64::INFINITY, f64::min),
        Formula::Or(fs) => fs
            .iter()
            .map(|f| rho(x, k, f))
            .fold(f64::NEG_INFINITY, f64::max),
        Formula::Always(i, f) => i.iter().map(|j| rho(x, k + j, f)).fold(f64::INFINITY, f64::min),
        Formula::Eventually(i, f) => i
            .iter()
            .map(|j| rho(x, k + j, f))
            .fold(f64::NEG_INFINITY, f64::max),
        Formula::Until(l, i, r) => {
            let mut lhs_min = (k..k + i.lo()).map(|t| rho(x, t, l)).fold(f64::INFINITY, f64::min);
            let mut best = f64::NEG_INFINITY;
            for kp in k + i.lo()..=k + i.hi() {
                lhs_min = lhs_min.min(rho(x, kp, l));
                best = best.max(lhs_min.min(rho(x, kp, r)));
            }
            best
        }
    }
}
