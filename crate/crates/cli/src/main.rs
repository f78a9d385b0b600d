//! `stlsplit`: parse, monitor, separate, split and synthesize STL specifications.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use stlsplit_core::casestudy::{build_casestudy, run_bench, run_scenario_modular};
use stlsplit_core::io::{read_trace_csv, write_trajectory_csv};
use stlsplit_core::parser::{
    default_regions, format_formula_with, format_scenario, parse_formula_with, parse_scenario,
    RegionTable, ScenarioFile,
};
use stlsplit_core::split::{modular_check, TauPlan};
use stlsplit_core::stl::{evaluate, robustness};

// A closed stdout (e.g. piped into `head`) ends the process quietly.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout(), $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            eprintln!("stlsplit: {e}");
            std::process::exit(2);
        }
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        out!($($t)*);
        out!("\n");
    }};
}

#[derive(Parser)]
#[command(name = "stlsplit", version, about = "STL timing separation, complete split and modular synthesis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct ScenarioArgs {
    /// Scenario file; the built-in robot case study when omitted.
    #[arg(long, value_name = "PATH")]
    spec: Option<PathBuf>,
    /// Timing points, comma separated; 0 and the horizon are added when missing.
    #[arg(long, value_name = "CSV")]
    kappas: Option<String>,
    /// `default`, one value for every carried obligation, or one value each.
    #[arg(long, value_name = "CSV")]
    taus: Option<String>,
    /// Per-MILP time budget in seconds.
    #[arg(long, value_name = "SECONDS")]
    time_budget: Option<f64>,
    /// Branching tie-break seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the canonical form of a formula or scenario.
    Parse {
        #[arg(long, value_name = "STR")]
        formula: Option<String>,
        #[arg(long, value_name = "PATH")]
        spec: Option<PathBuf>,
    },
    /// Monitor a trajectory CSV against a formula (or a scenario's specification).
    Check {
        #[arg(long, value_name = "STR")]
        formula: Option<String>,
        #[arg(long, value_name = "PATH")]
        trace: PathBuf,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Print the syntactically separated windows.
    Separate {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Print the complete split.
    Split {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Solve the whole specification as one MILP.
    Synthesize {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Solve window by window over the complete split.
    Modular {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Run the built-in robot scenario end to end.
    Casestudy {
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "SECONDS")]
        time_budget: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare monolithic and modular synthesis.
    Bench {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

/// Exit code 2: bad flags or unreadable input.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

type Outcome = Result<bool, Usage>;

fn parse_list(flag: &str, text: &str) -> Result<Vec<usize>, Usage> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Usage(anyhow!("--{flag}: expected comma-separated integers, found `{text}`")))
}

fn load_scenario(args: &ScenarioArgs) -> Result<ScenarioFile, Usage> {
    let mut s = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("--spec: cannot read {}", path.display()))?;
            parse_scenario(&text).with_context(|| format!("--spec: {}", path.display()))?
        }
        None => build_casestudy(),
    };
    if let Some(k) = &args.kappas {
        let mut kappas = parse_list("kappas", k)?;
        if kappas.first() != Some(&0) {
            kappas.insert(0, 0);
        }
        if kappas.last() != Some(&s.horizon) {
            kappas.push(s.horizon);
        }
        s.kappas = kappas;
    }
    if let Some(t) = &args.taus {
        s.taus = if t == "default" {
            TauPlan::Default
        } else {
            let list = parse_list("taus", t)?;
            if list.len() == 1 {
                TauPlan::Uniform(list[0])
            } else {
                TauPlan::Explicit(list)
            }
        };
    }
    if let Some(t) = args.time_budget {
        if t.is_nan() || t < 0.0 {
            return Err(Usage(anyhow!("--time-budget: must be a non-negative number of seconds")));
        }
        s.limits.time_budget_s = t;
    }
    if let Some(seed) = args.seed {
        s.limits.seed = seed;
    }
    Ok(s)
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<(), Usage> {
    fs::create_dir_all(dir).with_context(|| format!("--out: cannot create {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("--out: cannot write {}", path.display()))?;
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize") + "\n"
}

fn cmd_parse(formula: Option<String>, spec: Option<PathBuf>) -> Outcome {
    match (formula, spec) {
        (Some(f), None) => {
            let regions = default_regions();
            let phi = parse_formula_with(&f, &regions).context("--formula")?;
            outln!("{}", format_formula_with(&phi, &regions));
        }
        (None, Some(path)) => {
            let s = load_scenario(&ScenarioArgs {
                spec: Some(path),
                ..ScenarioArgs::default()
            })?;
            out!("{}", format_scenario(&s));
        }
        _ => return Err(Usage(anyhow!("give exactly one of --formula or --spec"))),
    }
    Ok(true)
}

fn cmd_check(formula: Option<String>, trace: &Path, args: &ScenarioArgs) -> Outcome {
    let text = fs::read_to_string(trace)
        .with_context(|| format!("--trace: cannot read {}", trace.display()))?;
    let trace = read_trace_csv(&text).context("--trace")?;
    let scenario = match &args.spec {
        Some(_) => Some(load_scenario(args)?),
        None => None,
    };
    let regions: RegionTable = scenario
        .as_ref()
        .map_or_else(default_regions, |s| s.regions.clone());
    let phi = match (&formula, &scenario) {
        (Some(f), _) => parse_formula_with(f, &regions).context("--formula")?,
        (None, Some(s)) => s.formula(),
        (None, None) => return Err(Usage(anyhow!("give --formula or --spec"))),
    };
    let satisfied = evaluate(&trace, 0, &phi).context("--trace")?;
    let rho = robustness(&trace, 0, &phi).context("--trace")?;
    let verdict = match (&formula, &scenario) {
        (None, Some(s)) => Some(modular_check(&trace, &s.split()?)?),
        _ => None,
    };
    out!(
        "{}",
        to_json(&json!({ "satisfied": satisfied, "robustness": rho, "verdict": verdict }))
    );
    Ok(satisfied)
}

fn cmd_separate(args: &ScenarioArgs) -> Outcome {
    let s = load_scenario(args)?;
    let sep = s.separated()?;
    for (z, w) in sep.windows.iter().enumerate() {
        outln!("phi_{} = {}", z + 1, format_formula_with(&w.formula(), &s.regions));
        outln!("phi_t_{} = {}", z + 1, format_formula_with(&w.target_formula(), &s.regions));
    }
    Ok(true)
}

fn cmd_split(args: &ScenarioArgs) -> Outcome {
    let s = load_scenario(args)?;
    let split = s.split()?;
    for (z, w) in split.windows.iter().enumerate() {
        let target = w.phi_bar_t().map_or_else(
            || "!true".to_string(),
            |t| format_formula_with(&t, &s.regions),
        );
        outln!("phi_bar_{} = {}", z + 1, format_formula_with(&w.phi_bar(), &s.regions));
        outln!("phi_bar_t_{} = {}", z + 1, target);
    }
    for c in &split.carries {
        outln!(
            "carry window {} term {}: tau = {}, tail {}, head {}",
            c.window + 1,
            c.term + 1,
            c.tau,
            c.tail,
            c.head
        );
    }
    Ok(true)
}

fn cmd_synthesize(args: &ScenarioArgs, out: Option<&Path>) -> Outcome {
    let s = load_scenario(args)?;
    let phi = s.formula();
    let r = s
        .optimizer()
        .opt(&s.x0, s.horizon, &phi, &s.system)
        .map_err(|e| anyhow!(e));
    let r = match r {
        Ok(r) => r,
        Err(e) => {
            eprintln!("stlsplit: {e}");
            return Ok(false);
        }
    };
    let monitor = r.states.as_ref().map(|t| evaluate(t, 0, &phi)).transpose()?;
    if let Some(dir) = out {
        write_out(dir, "synthesis.json", &to_json(&r))?;
        if let Some(t) = &r.states {
            write_out(dir, "trajectory.csv", &write_trajectory_csv(t, &r.inputs))?;
        }
    }
    out!(
        "{}",
        to_json(&json!({
            "feasible": r.feasible,
            "monitor": monitor,
            "objective_value": r.objective_value,
            "robustness": r.robustness,
            "binaries": r.stats.model.binaries,
            "nodes": r.stats.nodes,
            "wall_time_s": r.stats.wall_time_s,
        }))
    );
    Ok(r.feasible && monitor == Some(true))
}

fn cmd_modular(s: &ScenarioFile, out: Option<&Path>) -> Outcome {
    let r = match run_scenario_modular(s) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("stlsplit: {e}");
            return Ok(false);
        }
    };
    if let Some(dir) = out {
        write_out(dir, "scenario.spec", &format_scenario(s))?;
        write_out(dir, "trajectory.csv", &write_trajectory_csv(&r.states, &r.inputs))?;
        write_out(dir, "modular.json", &to_json(&r))?;
        write_out(dir, "verdict.json", &to_json(&r.verdict))?;
    }
    let windows: Vec<_> = r
        .per_window
        .iter()
        .map(|w| {
            json!({
                "window": w.window,
                "used_fallback": w.used_fallback,
                "target_already_met": w.target_already_met,
                "wall_time_s": w.wall_time_s,
            })
        })
        .collect();
    out!(
        "{}",
        to_json(&json!({
            "verdict": r.verdict,
            "final_verdict": r.final_verdict,
            "target_achieved_window": r.target_achieved_window,
            "target_missed": r.target_missed,
            "robustness": r.robustness,
            "windows": windows,
            "metrics": r.metrics,
        }))
    );
    Ok(r.final_verdict)
}

fn cmd_bench(args: &ScenarioArgs, out: Option<&Path>) -> Outcome {
    let s = load_scenario(args)?;
    let report = run_bench(&s);
    let text = to_json(&report);
    if let Some(dir) = out {
        write_out(dir, "bench.json", &text)?;
    }
    out!("{text}");
    let ok = |feasible: bool, monitor: Option<bool>| !feasible || monitor == Some(true);
    Ok(ok(report.monolithic.feasible, report.monolithic.monitor_ok)
        && ok(report.modular.feasible, report.modular.monitor_ok)
        && report.modular.feasible)
}

fn run(cli: Cli) -> Outcome {
    match cli.cmd {
        Cmd::Parse { formula, spec } => cmd_parse(formula, spec),
        Cmd::Check {
            formula,
            trace,
            scenario,
        } => cmd_check(formula, &trace, &scenario),
        Cmd::Separate { scenario } => cmd_separate(&scenario),
        Cmd::Split { scenario } => cmd_split(&scenario),
        Cmd::Synthesize { scenario, out } => cmd_synthesize(&scenario, out.as_deref()),
        Cmd::Modular { scenario, out } => cmd_modular(&load_scenario(&scenario)?, out.as_deref()),
        Cmd::Casestudy {
            out,
            time_budget,
            seed,
        } => {
            let s = load_scenario(&ScenarioArgs {
                time_budget,
                seed,
                ..ScenarioArgs::default()
            })?;
            cmd_modular(&s, out.as_deref())
        }
        Cmd::Bench { scenario, out } => cmd_bench(&scenario, out.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("stlsplit: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_lists_are_completed() {
        let args = ScenarioArgs {
            kappas: Some("15,30".into()),
            taus: Some("3".into()),
            ..ScenarioArgs::default()
        };
        let s = load_scenario(&args).unwrap_or_else(|e| panic!("{:#}", e.0));
        assert_eq!(s.kappas, vec![0, 15, 30, 45]);
        assert_eq!(s.taus, TauPlan::Uniform(3));
        let bad = ScenarioArgs {
            kappas: Some("15;30".into()),
            ..ScenarioArgs::default()
        };
        assert!(load_scenario(&bad).is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
