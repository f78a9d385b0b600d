//! Modularized synthesis: one MILP per window, solved in time order and stitched at
//! the window boundaries.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::milp::{LinearSystem, MilpError, Optimizer, SynthesisResult};
use crate::parser::{default_regions, format_formula_with, RegionTable};
use crate::separation::{shift_time, FragmentSpec, SeparationError};
use crate::split::{check_nonoverlap, modular_check, SplitError, SplitSpec, Verdict};
use crate::stl::{evaluate, robustness, Formula, StlError, Trace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModularError {
    #[error("window formulas read outside their windows")]
    Overlapping,
    #[error("split horizon {split} differs from the specification length {spec}")]
    HorizonMismatch { split: usize, spec: usize },
    #[error("window {window} is infeasible even without its target")]
    WindowInfeasible { window: usize },
    #[error("window {window}: {source}")]
    Milp { window: usize, source: MilpError },
    #[error(transparent)]
    Separation(#[from] SeparationError),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Stl(#[from] StlError),
}

/// One `opt()` call.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Attempt {
    /// Window formula in local time.
    pub formula: String,
    pub with_target: bool,
    pub feasible: bool,
    /// Set when the node or time budget ran out before any feasible point.
    pub budget_exhausted: bool,
    pub wall_time_s: f64,
    pub binaries: usize,
    pub predicate_binaries: usize,
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    /// 1-based window index.
    pub window: usize,
    pub start: usize,
    pub end: usize,
    /// An earlier window's target already holds on the prefix.
    pub target_already_met: bool,
    /// The target attempt failed and the window was solved without it.
    pub used_fallback: bool,
    pub attempts: Vec<Attempt>,
    pub wall_time_s: f64,
}

/// Complexity figures: `N` terms over horizon `L` for the monolithic problem, at most
/// `N_bar` obligations over at most `L_bar` steps per window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub n: usize,
    pub l: usize,
    pub n_bar: usize,
    pub l_bar: usize,
    /// Largest binary count of a window model that was solved.
    pub max_window_binaries: usize,
    pub total_wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularResult {
    pub states: Trace,
    pub inputs: Vec<Vec<f64>>,
    pub per_window: Vec<WindowReport>,
    /// First (1-based) window whose target holds on the stitched trace.
    pub target_achieved_window: Option<usize>,
    pub target_missed: bool,
    /// The original specification holds on the stitched trace and some target was met.
    pub final_verdict: bool,
    /// Robustness of the original specification on the stitched trace.
    pub robustness: f64,
    pub verdict: Verdict,
    pub metrics: Metrics,
}

/// Runs window-level synthesis with a fixed optimizer.
#[derive(Clone, Debug, PartialEq)]
pub struct Modular {
    pub optimizer: Optimizer,
    /// Used only to print window formulas.
    pub regions: RegionTable,
}

impl Modular {
    pub fn new(optimizer: Optimizer) -> Self {
        Self {
            optimizer,
            regions: default_regions(),
        }
    }

    fn attempt(
        &self,
        x: &[f64],
        len: usize,
        phi: &Formula,
        sys: &LinearSystem,
        with_target: bool,
        window: usize,
    ) -> Result<(Attempt, Option<SynthesisResult>), ModularError> {
        let started = Instant::now();
        let mut a = Attempt {
            formula: format_formula_with(phi, &self.regions),
            with_target,
            feasible: false,
            budget_exhausted: false,
            wall_time_s: 0.0,
            binaries: 0,
            predicate_binaries: 0,
            nodes: 0,
        };
        let result = match self.optimizer.opt(x, len, phi, sys) {
            Ok(r) => {
                a.feasible = r.feasible;
                a.binaries = r.stats.model.binaries;
                a.predicate_binaries = r.stats.model.predicate_binaries;
                a.nodes = r.stats.nodes;
                r.feasible.then_some(r)
            }
            Err(MilpError::BudgetExhausted { nodes, .. }) if with_target => {
                a.budget_exhausted = true;
                a.nodes = nodes;
                None
            }
            Err(source) => return Err(ModularError::Milp { window, source }),
        };
        a.wall_time_s = started.elapsed().as_secs_f64();
        Ok((a, result))
    }

    /// Solves the windows in order. Window `z` first tries its obligations together
    /// with its target, unless there is no target or an earlier target already holds
    /// on the prefix, and falls back to the obligations alone.
    pub fn run(
        &self,
        x0: &[f64],
        fragment: &FragmentSpec,
        split: &SplitSpec,
        sys: &LinearSystem,
    ) -> Result<ModularResult, ModularError> {
        if !check_nonoverlap(split) {
            return Err(ModularError::Overlapping);
        }
        let original = fragment.formula();
        if original.length() != split.horizon() {
            return Err(ModularError::HorizonMismatch {
                split: split.horizon(),
                spec: original.length(),
            });
        }
        let started = Instant::now();
        let mut states = Trace::new(vec![x0.to_vec()])?;
        let mut inputs: Vec<Vec<f64>> = Vec::new();
        let mut per_window = Vec::new();
        let mut max_window_binaries = 0;
        for (z, w) in split.windows.iter().enumerate() {
            let window = z + 1;
            let (start, end) = (split.kappas[z], split.kappas[z + 1]);
            let window_started = Instant::now();
            let x = states.sample(states.horizon()).to_vec();
            let mut met = false;
            for earlier in &split.windows[..z] {
                if let Some(t) = earlier.phi_bar_t() {
                    met |= evaluate(&states, 0, &t)?;
                }
            }
            let local = shift_time(&w.phi_bar(), -(start as i64))?;
            let mut attempts = Vec::new();
            let mut solved = None;
            let mut used_fallback = false;
            if let (false, Some(t)) = (met, w.phi_bar_t()) {
                let both = shift_time(&Formula::and(vec![w.phi_bar(), t]), -(start as i64))?;
                let (a, r) = self.attempt(&x, end - start, &both, sys, true, window)?;
                attempts.push(a);
                solved = r;
                used_fallback = solved.is_none();
            }
            if solved.is_none() {
                let (a, r) = self.attempt(&x, end - start, &local, sys, false, window)?;
                attempts.push(a);
                solved = Some(r.ok_or(ModularError::WindowInfeasible { window })?);
            }
            let r = solved.unwrap();
            max_window_binaries = max_window_binaries.max(r.stats.model.binaries);
            states.concat(r.states.as_ref().expect("feasible results carry states"))?;
            inputs.extend(r.inputs);
            per_window.push(WindowReport {
                window,
                start,
                end,
                target_already_met: met,
                used_fallback,
                attempts,
                wall_time_s: window_started.elapsed().as_secs_f64(),
            });
        }
        let verdict = modular_check(&states, split)?;
        let holds = evaluate(&states, 0, &original)?;
        let target_missed = verdict.target_window.is_none();
        let metrics = Metrics {
            n: fragment.safety.len() + fragment.progress.len() + 1,
            l: split.horizon(),
            n_bar: split.windows.iter().map(|w| w.obligation_count()).max().unwrap_or(0),
            l_bar: split.kappas.windows(2).map(|k| k[1] - k[0]).max().unwrap_or(0),
            max_window_binaries,
            total_wall_time_s: started.elapsed().as_secs_f64(),
        };
        Ok(ModularResult {
            robustness: robustness(&states, 0, &original)?,
            states,
            inputs,
            per_window,
            target_achieved_window: verdict.target_window,
            target_missed,
            final_verdict: holds && !target_missed,
            verdict,
            metrics,
        })
    }
}

/// [`Modular::run`] with the default region names for printing.
pub fn run_modular(
    x0: &[f64],
    fragment: &FragmentSpec,
    split: &SplitSpec,
    sys: &LinearSystem,
    optimizer: &Optimizer,
) -> Result<ModularResult, ModularError> {
    Modular::new(*optimizer).run(x0, fragment, split, sys)
}
