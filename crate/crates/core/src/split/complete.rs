use serde::{Deserialize, Serialize};

use crate::separation::{ProgressTerm, SafetyTerm, SeparatedSpec, TargetTerm};
use crate::stl::{Formula, Interval};

use super::SplitError;

/// How the split point `tau` of each exceeding progress obligation is chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TauPlan {
    /// `ceil(c / 2)` clamped into the admissible range.
    Default,
    /// The same value for every obligation; must be admissible for each.
    Uniform(usize),
    /// One value per exceeding obligation, in window order and, within a window,
    /// in progress-term order.
    Explicit(Vec<usize>),
}

/// `F[interval] gamma` obligation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventuallyTerm {
    pub interval: Interval,
    pub gamma: Formula,
}

impl EventuallyTerm {
    pub fn formula(&self) -> Formula {
        Formula::eventually(self.interval, self.gamma.clone())
    }
}

/// Bookkeeping for one progress obligation that overruns its window's end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarryTerm {
    /// Zero-based index of the window the obligation belongs to; the head lands in
    /// the next one.
    pub window: usize,
    /// Index of the progress term within its separated window.
    pub term: usize,
    pub tau: usize,
    pub c: usize,
    pub tail: Interval,
    pub head: Interval,
}

/// One window of the complete split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitWindow {
    pub bounds: Interval,
    pub safety: Vec<SafetyTerm>,
    /// Progress terms truncated to end `c` steps before the window end.
    pub progress: Vec<ProgressTerm>,
    /// `F[kappa_z - tau, kappa_z] gamma` for obligations carried out of this window.
    pub tails: Vec<EventuallyTerm>,
    /// `F[kappa_{z-1}, kappa_{z-1} + c - tau] gamma` for obligations carried in.
    pub heads: Vec<EventuallyTerm>,
    /// Target truncated to end `c` steps before the window end; `None` is `!true`.
    pub target: Option<TargetTerm>,
}

impl SplitWindow {
    fn terms(&self) -> Vec<Formula> {
        let mut parts: Vec<Formula> = self.safety.iter().map(SafetyTerm::formula).collect();
        parts.extend(self.progress.iter().map(ProgressTerm::formula));
        parts.extend(self.tails.iter().map(EventuallyTerm::formula));
        parts.extend(self.heads.iter().map(EventuallyTerm::formula));
        parts
    }

    /// The window's safety/progress conjunction, `true` when it has no terms.
    pub fn phi_bar(&self) -> Formula {
        Formula::and(self.terms())
    }

    /// The window's target formula, if any.
    pub fn phi_bar_t(&self) -> Option<Formula> {
        self.target.as_ref().map(TargetTerm::formula)
    }

    /// Binaries the window adds to the modular complexity count: safety, progress,
    /// tail and head obligations.
    pub fn obligation_count(&self) -> usize {
        self.safety.len() + self.progress.len() + self.tails.len() + self.heads.len()
    }

    fn within_bounds(&self) -> bool {
        let target = self.phi_bar_t().map(|t| t.complete_interval());
        self.terms()
            .iter()
            .map(Formula::complete_interval)
            .chain(target)
            .all(|i| i.is_subset_of(&self.bounds))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub kappas: Vec<usize>,
    pub windows: Vec<SplitWindow>,
    pub carries: Vec<CarryTerm>,
}

impl SplitSpec {
    /// `phi_bar_1 & ... & phi_bar_l & (phi_bar_1^t | ... | phi_bar_l^t)`.
    pub fn formula(&self) -> Formula {
        let mut parts: Vec<Formula> = self.windows.iter().map(SplitWindow::phi_bar).collect();
        parts.push(Formula::or(
            self.windows.iter().filter_map(SplitWindow::phi_bar_t).collect(),
        ));
        Formula::and(parts)
    }

    pub fn horizon(&self) -> usize {
        *self.kappas.last().unwrap()
    }
}

/// Admissible `tau` for a progress term `G[a,b] F[0,c]` exceeding `kappa`.
pub fn tau_range(b: usize, c: usize, kappa: usize) -> (usize, usize) {
    (kappa.saturating_sub(b), c)
}

/// Replaces every overrunning progress obligation by a truncated term plus a tail in
/// its own window and a head in the next, and truncates each target piece, so that no
/// formula of a window reads past the window's end.
pub fn complete_split(spec: &SeparatedSpec, taus: &TauPlan) -> Result<SplitSpec, SplitError> {
    let kappas = &spec.kappas;
    let mut windows: Vec<SplitWindow> = (0..spec.windows.len())
        .map(|z| SplitWindow {
            bounds: spec.window_bounds(z),
            safety: spec.windows[z].safety.clone(),
            progress: Vec::new(),
            tails: Vec::new(),
            heads: Vec::new(),
            target: None,
        })
        .collect();
    let mut carries = Vec::new();
    let mut explicit = 0usize;
    for (z, w) in spec.windows.iter().enumerate() {
        let (start, end) = (kappas[z], kappas[z + 1]);
        for (r, p) in w.progress.iter().enumerate() {
            if end - start < p.c {
                return Err(SplitError::WindowTooNarrow {
                    window: z + 1,
                    width: end - start,
                    c: p.c,
                });
            }
            let (a, b) = (p.interval.lo(), p.interval.hi());
            if a + p.c <= end {
                let hi = b.min(end - p.c);
                windows[z].progress.push(ProgressTerm::new(
                    Interval::new(a, hi).unwrap(),
                    p.c,
                    p.gamma.clone(),
                ));
            }
            if b + p.c <= end {
                continue;
            }
            let (lo, hi) = tau_range(b, p.c, end);
            let tau = match taus {
                TauPlan::Default => p.c.div_ceil(2).clamp(lo, hi),
                TauPlan::Uniform(t) => *t,
                TauPlan::Explicit(list) => {
                    let t = *list.get(explicit).ok_or(SplitError::MissingTau {
                        needed: explicit + 1,
                        given: list.len(),
                    })?;
                    explicit += 1;
                    t
                }
            };
            if tau < lo || tau > hi {
                return Err(SplitError::TauOutOfRange {
                    window: z + 1,
                    term: r + 1,
                    tau,
                    lo,
                    hi,
                });
            }
            let next = z + 1;
            if next >= windows.len() || kappas[next + 1] - end < p.c - tau {
                return Err(SplitError::HeadDoesNotFit {
                    window: z + 1,
                    term: r + 1,
                    head_len: p.c - tau,
                });
            }
            let tail = Interval::new(end - tau, end).unwrap();
            let head = Interval::new(end, end + p.c - tau).unwrap();
            windows[z].tails.push(EventuallyTerm {
                interval: tail,
                gamma: p.gamma.clone(),
            });
            windows[next].heads.push(EventuallyTerm {
                interval: head,
                gamma: p.gamma.clone(),
            });
            carries.push(CarryTerm {
                window: z,
                term: r,
                tau,
                c: p.c,
                tail,
                head,
            });
        }
        if let Some(t) = &w.target {
            let a = t.interval.lo();
            if a + t.c <= end {
                let hi = t.interval.hi().min(end - t.c);
                windows[z].target = Some(TargetTerm::new(
                    Interval::new(a, hi).unwrap(),
                    t.c,
                    t.gamma.clone(),
                ));
            }
        }
    }
    if let TauPlan::Explicit(list) = taus {
        if list.len() != explicit {
            return Err(SplitError::MissingTau {
                needed: explicit,
                given: list.len(),
            });
        }
    }
    Ok(SplitSpec {
        kappas: kappas.clone(),
        windows,
        carries,
    })
}

/// True iff every formula of every window, target included, has its complete
/// interval inside the window's `[kappa_{z-1}, kappa_z]`.
pub fn check_nonoverlap(split: &SplitSpec) -> bool {
    split.windows.iter().all(SplitWindow::within_bounds)
}
