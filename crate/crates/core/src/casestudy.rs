//! The planar robot scenario and the monolithic-versus-modular benchmark.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::milp::{EncodeParams, LinearSystem, MilpError, SolveLimits};
use crate::modular::{Modular, ModularResult};
use crate::parser::{default_regions, ScenarioFile};
use crate::separation::{FragmentSpec, ProgressTerm, SafetyTerm, TargetTerm};
use crate::split::TauPlan;
use crate::stl::{evaluate, Formula, Interval};

fn region(name: &str) -> Formula {
    default_regions()[name].formula()
}

fn iv(a: usize, b: usize) -> Interval {
    Interval::new(a, b).expect("literal intervals are ordered")
}

/// Single integrator on the plane with `|u| <= 1` per axis, visiting TARGET every 5
/// steps until 40, returning HOME every 5 steps on `[15, 45]`, charging for 4
/// consecutive steps within `[20, 45]` and always staying in SAFETY.
pub fn build_casestudy() -> ScenarioFile {
    let fragment = FragmentSpec::new(
        vec![SafetyTerm::new(iv(0, 45), region("SAFETY"))],
        vec![
            ProgressTerm::new(iv(0, 35), 5, region("TARGET")),
            ProgressTerm::new(iv(15, 40), 5, region("HOME")),
        ],
        TargetTerm::new(iv(20, 42), 3, region("CHARGER")),
    )
    .expect("the case study is a valid fragment");
    ScenarioFile {
        system: LinearSystem::single_integrator(2, 1.0),
        x0: vec![0.0, 5.0],
        horizon: 45,
        regions: default_regions(),
        fragment,
        kappas: vec![0, 15, 30, 45],
        taus: TauPlan::Uniform(3),
        params: EncodeParams {
            // The complete split forces exact edge-to-edge moves between regions.
            epsilon: 0.0,
            ..EncodeParams::default()
        },
        limits: SolveLimits::default(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonolithicRun {
    pub feasible: bool,
    pub timed_out: bool,
    pub wall_time_s: f64,
    pub binaries: usize,
    pub nodes: usize,
    pub robustness: Option<f64>,
    /// Monitor verdict of the original specification on the trajectory.
    pub monitor_ok: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularRun {
    pub feasible: bool,
    pub per_window_times_s: Vec<f64>,
    pub total_wall_time_s: f64,
    pub max_window_binaries: usize,
    pub robustness: Option<f64>,
    pub monitor_ok: Option<bool>,
    pub target_window: Option<usize>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    /// Specification terms and horizon of the monolithic problem.
    pub n: usize,
    pub l: usize,
    /// Largest per-window obligation count and window length.
    pub n_bar: usize,
    pub l_bar: usize,
    pub monolithic: MonolithicRun,
    pub modular: ModularRun,
    /// Monolithic over modular wall time, when both finished.
    pub speedup: Option<f64>,
}

pub fn run_monolithic(s: &ScenarioFile) -> MonolithicRun {
    let started = Instant::now();
    let phi = s.formula();
    let result = s.optimizer().opt(&s.x0, s.horizon, &phi, &s.system);
    let wall_time_s = started.elapsed().as_secs_f64();
    match result {
        Ok(r) => MonolithicRun {
            feasible: r.feasible,
            timed_out: false,
            wall_time_s,
            binaries: r.stats.model.binaries,
            nodes: r.stats.nodes,
            robustness: r.robustness,
            monitor_ok: r.states.as_ref().map(|t| evaluate(t, 0, &phi).unwrap_or(false)),
            error: None,
        },
        Err(e) => MonolithicRun {
            feasible: false,
            timed_out: matches!(e, MilpError::BudgetExhausted { .. }),
            wall_time_s,
            binaries: crate::milp::encode(&s.x0, s.horizon, &phi, &s.system, s.params)
                .map_or(0, |m| m.stats.binaries),
            nodes: 0,
            robustness: None,
            monitor_ok: None,
            error: Some(e.to_string()),
        },
    }
}

/// Runs modular synthesis on the scenario's split.
pub fn run_scenario_modular(s: &ScenarioFile) -> Result<ModularResult, String> {
    let split = s.split().map_err(|e| e.to_string())?;
    let modular = Modular {
        optimizer: s.optimizer(),
        regions: s.regions.clone(),
    };
    modular
        .run(&s.x0, &s.fragment, &split, &s.system)
        .map_err(|e| e.to_string())
}

/// Runs both paths on the same scenario, monolithic first.
pub fn run_bench(s: &ScenarioFile) -> BenchReport {
    let monolithic = run_monolithic(s);
    let phi = s.formula();
    let started = Instant::now();
    let outcome = run_scenario_modular(s);
    let total = started.elapsed().as_secs_f64();
    let modular = match &outcome {
        Ok(r) => ModularRun {
            feasible: r.final_verdict,
            per_window_times_s: r.per_window.iter().map(|w| w.wall_time_s).collect(),
            total_wall_time_s: total,
            max_window_binaries: r.metrics.max_window_binaries,
            robustness: Some(r.robustness),
            monitor_ok: Some(evaluate(&r.states, 0, &phi).unwrap_or(false)),
            target_window: r.target_achieved_window,
            error: None,
        },
        Err(e) => ModularRun {
            feasible: false,
            per_window_times_s: Vec::new(),
            total_wall_time_s: total,
            max_window_binaries: 0,
            robustness: None,
            monitor_ok: None,
            target_window: None,
            error: Some(e.clone()),
        },
    };
    let split = s.split().ok();
    let speedup = (monolithic.feasible && modular.feasible && total > 0.0)
        .then(|| monolithic.wall_time_s / total);
    BenchReport {
        n: s.fragment.safety.len() + s.fragment.progress.len() + 1,
        l: s.horizon,
        n_bar: split
            .as_ref()
            .and_then(|sp| sp.windows.iter().map(|w| w.obligation_count()).max())
            .unwrap_or(0),
        l_bar: s.kappas.windows(2).map(|k| k[1] - k[0]).max().unwrap_or(0),
        monolithic,
        modular,
        speedup,
    }
}
