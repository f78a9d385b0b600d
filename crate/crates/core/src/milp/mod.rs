//! Big-M MILP encoding of STL synthesis for linear systems, a branch-and-bound
//! solver on a bounded simplex, and MPS export.

mod bnb;
mod encode;
mod lp;
mod mps;
mod program;
mod system;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stl::{Formula, Trace};

pub use bnb::solve;
pub use encode::{encode, EncodeParams, MilpModel, ModelStats, NEGATIVE_LITERAL_MIN_MARGIN};
pub use mps::{export_mps, parse_mps};
pub use program::{Constraint, LinearProgram, Sense, Variable};
pub use system::LinearSystem;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MilpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("formula needs a horizon of {needed} steps but L = {horizon}")]
    HorizonTooShort { needed: usize, horizon: usize },
    #[error("budget exhausted after {nodes} nodes ({seconds:.2} s) without a feasible point")]
    BudgetExhausted { nodes: usize, seconds: f64 },
    #[error("numerically unstable LP: {0}")]
    Numerical(String),
    #[error("MPS line {line}: {message}")]
    Mps { line: usize, message: String },
}

/// Branch-and-bound limits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveLimits {
    pub node_budget: usize,
    pub time_budget_s: f64,
    /// Extra nodes spent improving the objective after the first incumbent.
    pub improve_nodes: usize,
    /// Seed of the tie-breaking order among equally fractional binaries.
    pub seed: u64,
}

impl Default for SolveLimits {
    fn default() -> Self {
        Self {
            node_budget: 200_000,
            time_budget_s: 120.0,
            improve_nodes: 2000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: usize,
    pub lp_iterations: usize,
    pub wall_time_s: f64,
    /// The search tree was exhausted, so the incumbent is optimal.
    pub proven_optimal: bool,
    /// Integral LP points the monitor rejected.
    pub rejected_candidates: usize,
    pub model: ModelStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisResult {
    pub feasible: bool,
    /// `x_0 .. x_L` when feasible.
    pub states: Option<Trace>,
    /// `u_0 .. u_{L-1}` when feasible.
    pub inputs: Vec<Vec<f64>>,
    pub objective_value: f64,
    /// Robustness of the formula on `states` at time 0.
    pub robustness: Option<f64>,
    pub stats: SolveStats,
}

/// `opt(x0, L, phi)`: encode then solve with fixed parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Optimizer {
    pub params: EncodeParams,
    pub limits: SolveLimits,
}

impl Optimizer {
    pub fn opt(
        &self,
        x0: &[f64],
        horizon: usize,
        phi: &Formula,
        sys: &LinearSystem,
    ) -> Result<SynthesisResult, MilpError> {
        let model = encode(x0, horizon, phi, sys, self.params)?;
        solve(&model, &self.limits)
    }
}
