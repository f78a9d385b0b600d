use serde::{Deserialize, Serialize};

use crate::separation::shift_time;
use crate::stl::{evaluate, Formula, Trace};

use super::{SplitError, SplitSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    /// Whether each window's safety/progress conjunction holds on its sub-trace.
    pub per_window: Vec<bool>,
    /// First (1-based) window whose target holds on its sub-trace.
    pub target_window: Option<usize>,
    pub overall: bool,
}

fn eval_window(trace: &Trace, lo: usize, hi: usize, phi: &Formula) -> Result<bool, SplitError> {
    let local = shift_time(phi, -(lo as i64))?;
    let seg = trace.segment(lo, hi)?;
    evaluate(&seg, 0, &local).map_err(|e| match e {
        crate::stl::StlError::HorizonTooShort { .. } => {
            SplitError::Overlap(format!("a formula of window [{lo},{hi}] reads past {hi}"))
        }
        other => other.into(),
    })
}

/// Checks each window's formulas on its own sub-trace `x[kappa_{z-1}..=kappa_z]`,
/// shifted to start at 0.
pub fn modular_check(trace: &Trace, split: &SplitSpec) -> Result<Verdict, SplitError> {
    if trace.horizon() != split.horizon() {
        return Err(SplitError::LengthMismatch {
            trace: trace.horizon(),
            split: split.horizon(),
        });
    }
    let mut per_window = Vec::with_capacity(split.windows.len());
    let mut target_window = None;
    for (z, w) in split.windows.iter().enumerate() {
        let (lo, hi) = (split.kappas[z], split.kappas[z + 1]);
        per_window.push(eval_window(trace, lo, hi, &w.phi_bar())?);
        if target_window.is_none() {
            if let Some(t) = w.phi_bar_t() {
                if eval_window(trace, lo, hi, &t)? {
                    target_window = Some(z + 1);
                }
            }
        }
    }
    let overall = per_window.iter().all(|b| *b) && target_window.is_some();
    Ok(Verdict {
        per_window,
        target_window,
        overall,
    })
}
