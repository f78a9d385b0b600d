//! Depth-first branch and bound on the most fractional binary.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::stl::{evaluate, robustness, Trace};

use super::encode::MilpModel;
use super::lp::{LpSolver, LpStatus};
use super::{MilpError, SolveLimits, SolveStats, SynthesisResult};

const INT_TOL: f64 = 1e-6;
const DYNAMICS_TOL: f64 = 1e-6;
/// Inputs are snapped to multiples of this so that re-simulated states are exact
/// for dyadic systems.
const SNAP: f64 = 1.0 / (1u64 << 30) as f64;

struct Candidate {
    states: Vec<Vec<f64>>,
    inputs: Vec<Vec<f64>>,
}

fn extract(model: &MilpModel, x: &[f64]) -> Option<Candidate> {
    let sys = &model.system;
    let raw: Vec<Vec<f64>> = (0..model.horizon)
        .map(|k| (0..sys.m()).map(|i| x[model.input_var(k, i)]).collect())
        .collect();
    let snapped: Vec<Vec<f64>> = raw
        .iter()
        .map(|u| {
            u.iter()
                .enumerate()
                .map(|(i, v)| {
                    let v = v.clamp(sys.input_lo[i], sys.input_hi[i]);
                    ((v / SNAP).round() * SNAP).clamp(sys.input_lo[i], sys.input_hi[i])
                })
                .collect()
        })
        .collect();
    let states = sys.simulate(&model.x0, &snapped);
    if satisfies(model, &states) {
        return Some(Candidate {
            states,
            inputs: snapped,
        });
    }
    let states: Vec<Vec<f64>> = (0..=model.horizon)
        .map(|k| (0..sys.n()).map(|i| x[model.state_var(k, i)]).collect())
        .collect();
    let valid = sys.inputs_admissible(&raw, 1e-9)
        && sys.dynamics_residual(&states, &raw) <= DYNAMICS_TOL
        && satisfies(model, &states);
    valid.then_some(Candidate { states, inputs: raw })
}

fn satisfies(model: &MilpModel, states: &[Vec<f64>]) -> bool {
    Trace::new(states.to_vec())
        .ok()
        .and_then(|t| evaluate(&t, 0, &model.formula).ok())
        .unwrap_or(false)
}

/// Binary farthest from integrality above `tol`, ties broken by the seeded rank.
fn most_fractional(order: &[usize], rank: &[usize], x: &[f64], tol: f64) -> Option<usize> {
    order
        .iter()
        .map(|&j| (j, (x[j] - x[j].floor()).min(x[j].ceil() - x[j])))
        .filter(|&(_, f)| f > tol)
        .max_by(|a, b| a.1.total_cmp(&b.1).then(rank[b.0].cmp(&rank[a.0])))
        .map(|(j, _)| j)
}

/// Pushes the down child first so the up child is explored first.
fn push_children(stack: &mut Vec<Vec<(usize, f64)>>, fixes: Vec<(usize, f64)>, j: usize) {
    let mut down = fixes.clone();
    down.push((j, 0.0));
    let mut up = fixes;
    up.push((j, 1.0));
    stack.push(down);
    stack.push(up);
}

/// Solves the model; the first point accepted by the monitor is kept and improved
/// for at most `improve_nodes` further nodes.
pub fn solve(model: &MilpModel, limits: &SolveLimits) -> Result<SynthesisResult, MilpError> {
    let start = Instant::now();
    let prog = &model.program;
    let mut lp = LpSolver::new(prog);
    let base_lo: Vec<f64> = prog.vars.iter().map(|v| v.lo).collect();
    let base_hi: Vec<f64> = prog.vars.iter().map(|v| v.hi).collect();
    let mut order: Vec<usize> = (0..prog.vars.len()).filter(|&j| prog.vars[j].integer).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(limits.seed));
    let mut rank = vec![usize::MAX; prog.vars.len()];
    for (r, &j) in order.iter().enumerate() {
        rank[j] = r;
    }

    let mut stack: Vec<Vec<(usize, f64)>> = vec![Vec::new()];
    let mut incumbent: Option<(Candidate, f64)> = None;
    let mut nodes = 0;
    let mut since_incumbent = 0;
    let mut rejected = 0;
    let mut lp_failures = Vec::new();
    let mut exhausted = false;
    let (mut lo, mut hi) = (base_lo.clone(), base_hi.clone());

    while let Some(fixes) = stack.pop() {
        if nodes >= limits.node_budget || start.elapsed().as_secs_f64() > limits.time_budget_s {
            exhausted = true;
            break;
        }
        if incumbent.is_some() && since_incumbent >= limits.improve_nodes {
            exhausted = true;
            break;
        }
        nodes += 1;
        since_incumbent += 1;
        lo.copy_from_slice(&base_lo);
        hi.copy_from_slice(&base_hi);
        for &(j, v) in &fixes {
            lo[j] = v;
            hi[j] = v;
        }
        let status = match lp.resolve(&lo, &hi) {
            Ok(s) => s,
            Err(e) => {
                lp_failures.push(e);
                continue;
            }
        };
        match status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => {
                lp_failures.push("unbounded relaxation".into());
                continue;
            }
            LpStatus::Optimal => {}
        }
        let bound = lp.objective();
        if let Some((_, best)) = &incumbent {
            if bound >= best - 1e-9 * best.abs().max(1.0) {
                continue;
            }
        }
        let x = lp.values().to_vec();
        let branch = most_fractional(&order, &rank, &x, INT_TOL);
        if let Some(j) = branch {
            push_children(&mut stack, fixes, j);
            continue;
        }
        // Binaries within the tolerance can still carry a big-M row slack of
        // `eps / M`; re-solve with every binary at its rounded value.
        for &j in &order {
            lo[j] = x[j].round();
            hi[j] = x[j].round();
        }
        match lp.resolve(&lo, &hi) {
            Ok(LpStatus::Optimal) => {}
            Ok(_) => {
                if let Some(j) = most_fractional(&order, &rank, &x, 0.0) {
                    push_children(&mut stack, fixes, j);
                }
                continue;
            }
            Err(e) => {
                lp_failures.push(e);
                continue;
            }
        }
        match extract(model, lp.values()) {
            Some(c) => {
                let obj =
                    model.params.lambda * c.inputs.iter().flatten().map(|u| u.abs()).sum::<f64>();
                let better = incumbent.as_ref().is_none_or(|(_, best)| obj < *best);
                if better {
                    incumbent = Some((c, obj));
                    since_incumbent = 0;
                }
            }
            None => {
                rejected += 1;
                log::debug!("node {nodes}: integral LP point rejected by the monitor");
            }
        }
    }

    let stats = SolveStats {
        nodes,
        lp_iterations: lp.iterations,
        wall_time_s: start.elapsed().as_secs_f64(),
        proven_optimal: !exhausted && lp_failures.is_empty(),
        rejected_candidates: rejected,
        model: model.stats.clone(),
    };
    if let Some((c, obj)) = incumbent {
        let trace = Trace::new(c.states).expect("simulated states are rectangular");
        let rho = robustness(&trace, 0, &model.formula).ok();
        return Ok(SynthesisResult {
            feasible: true,
            states: Some(trace),
            inputs: c.inputs,
            objective_value: obj,
            robustness: rho,
            stats,
        });
    }
    if exhausted {
        return Err(MilpError::BudgetExhausted {
            nodes,
            seconds: stats.wall_time_s,
        });
    }
    if !lp_failures.is_empty() || rejected > 0 {
        return Err(MilpError::Numerical(format!(
            "{} LP failures ({}), {rejected} integral points rejected by the monitor",
            lp_failures.len(),
            lp_failures.first().map(String::as_str).unwrap_or("none")
        )));
    }
    Ok(SynthesisResult {
        feasible: false,
        states: None,
        inputs: Vec::new(),
        objective_value: f64::INFINITY,
        robustness: None,
        stats,
    })
}
