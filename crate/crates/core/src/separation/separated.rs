use serde::{Deserialize, Serialize};

use crate::stl::{Formula, Interval};

use super::rewrite::{check_increasing, interval_pieces};
use super::{FragmentSpec, ProgressTerm, SafetyTerm, SeparationError, TargetTerm};

/// Obligations whose syntactic intervals lie in one window `[kappa_{z-1}, kappa_z]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub safety: Vec<SafetyTerm>,
    pub progress: Vec<ProgressTerm>,
    /// `None` stands for the target `!true`.
    pub target: Option<TargetTerm>,
}

impl Window {
    /// Conjunction of the safety and progress terms (`true` if there are none).
    pub fn formula(&self) -> Formula {
        let mut parts: Vec<Formula> = self.safety.iter().map(SafetyTerm::formula).collect();
        parts.extend(self.progress.iter().map(ProgressTerm::formula));
        Formula::and(parts)
    }

    /// The window's target formula, `!true` when absent.
    pub fn target_formula(&self) -> Formula {
        self.target
            .as_ref()
            .map_or_else(Formula::falsum, TargetTerm::formula)
    }

    fn syntactic_intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        self.safety
            .iter()
            .map(|t| t.interval)
            .chain(self.progress.iter().map(|t| t.interval))
            .chain(self.target.iter().map(|t| t.interval))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatedSpec {
    pub kappas: Vec<usize>,
    pub windows: Vec<Window>,
}

impl SeparatedSpec {
    /// `[kappa_{z-1}, kappa_z]` for the zero-based window index `z - 1`.
    pub fn window_bounds(&self, idx: usize) -> Interval {
        Interval::new(self.kappas[idx], self.kappas[idx + 1]).unwrap()
    }

    /// `phi_1 & ... & phi_l & (phi_1^t | ... | phi_l^t)`.
    pub fn formula(&self) -> Formula {
        let mut parts: Vec<Formula> = self.windows.iter().map(Window::formula).collect();
        parts.push(Formula::or(
            self.windows.iter().map(Window::target_formula).collect(),
        ));
        Formula::and(parts)
    }
}

/// Validates a timing-point list `0 = k_0 < ... < k_l = horizon`.
pub fn check_kappas(kappas: &[usize], horizon: usize) -> Result<(), SeparationError> {
    check_increasing(kappas)?;
    if kappas.len() < 2 || kappas[0] != 0 || *kappas.last().unwrap() != horizon {
        return Err(SeparationError::KappasNotSpanning {
            kappas: kappas.to_vec(),
            horizon,
        });
    }
    Ok(())
}

/// Index of the window holding `piece`. A single-point piece sitting on an interior
/// timing point goes to the later window.
fn owner(kappas: &[usize], piece: Interval) -> usize {
    (0..kappas.len() - 1)
        .rev()
        .find(|&z| kappas[z] <= piece.lo() && piece.hi() <= kappas[z + 1])
        .expect("pieces never straddle a timing point")
}

/// Cuts every syntactic interval of `frag` at the interior timing points and files
/// each piece under the window containing it.
pub fn syntactic_separation(
    frag: &FragmentSpec,
    kappas: &[usize],
) -> Result<SeparatedSpec, SeparationError> {
    check_kappas(kappas, frag.length())?;
    let mut windows = vec![Window::default(); kappas.len() - 1];
    for t in &frag.safety {
        for piece in interval_pieces(t.interval, kappas) {
            windows[owner(kappas, piece)]
                .safety
                .push(SafetyTerm::new(piece, t.gamma.clone()));
        }
    }
    for t in &frag.progress {
        for piece in interval_pieces(t.interval, kappas) {
            windows[owner(kappas, piece)]
                .progress
                .push(ProgressTerm::new(piece, t.c, t.gamma.clone()));
        }
    }
    let t = &frag.target;
    for piece in interval_pieces(t.interval, kappas) {
        windows[owner(kappas, piece)].target = Some(TargetTerm::new(piece, t.c, t.gamma.clone()));
    }
    Ok(SeparatedSpec {
        kappas: kappas.to_vec(),
        windows,
    })
}

/// True iff every window's syntactic intervals lie within its timing bounds.
pub fn verify_separated(spec: &SeparatedSpec) -> bool {
    if spec.kappas.len() != spec.windows.len() + 1 {
        return spec.windows.is_empty();
    }
    spec.windows.iter().enumerate().all(|(z, w)| {
        let bounds = spec.window_bounds(z);
        w.syntactic_intervals().all(|i| i.is_subset_of(&bounds))
    })
}
