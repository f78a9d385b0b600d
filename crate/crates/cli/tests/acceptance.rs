//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stlsplit_core::casestudy::{build_casestudy, run_bench};
use stlsplit_core::io::read_trace_csv;
use stlsplit_core::milp::{encode, solve, EncodeParams, LinearSystem, SolveLimits, NEGATIVE_LITERAL_MIN_MARGIN};
use stlsplit_core::parser::format_formula;
use stlsplit_core::separation::{
    separate_until, shift_nested, split_endpoints, split_temporal, syntactic_separation,
    FragmentSpec, ProgressTerm, SafetyTerm, SeparatedSpec, TargetTerm, TemporalKind, Window,
};
use stlsplit_core::split::oracle::{axis_atoms, realize_axis};
use stlsplit_core::split::{complete_split, enumerate_oracle, modular_check, SplitSpec, TauPlan};
use stlsplit_core::stl::{evaluate, Formula, Interval, Predicate, RawInterval, Trace};

const SEED: u64 = 0x5eed;
const CORPUS_SIZE: usize = 200;
const IDENTITY_INSTANCES: usize = 60;
const DECOMPOSITION_SPLITS: usize = 50;
const GRID_FORMULAS: usize = 50;
const MAX_LENGTH: usize = 8;
const N_ATOMS: usize = 2;
/// `|sat(G[0,6] F[0,3] p) \ sat(split)|` for kappa = {0,4,9}, tau = 2 over one atom.
const WITNESS_GAP: usize = 158;
const WINDOW_BUDGET_S: f64 = 120.0;
const TOTAL_BUDGET_S: f64 = 600.0;
const GRID_RUNTIME_S: f64 = 300.0;
const CORPUS_RUNTIME_S: f64 = 60.0;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} {id}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn iv(a: usize, b: usize) -> Interval {
    Interval::new(a, b).unwrap()
}

fn point(k: usize) -> Interval {
    Interval::point(k)
}

fn open(a: usize, b: usize) -> Interval {
    RawInterval::open(a as i64, b as i64).canonical().unwrap()
}

struct Gen {
    rng: ChaCha8Rng,
    atoms: Vec<Predicate>,
}

impl Gen {
    fn new(seed: u64, atoms: Vec<Predicate>) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            atoms,
        }
    }

    fn atom(&mut self) -> Formula {
        let p = Formula::pred(self.atoms.choose(&mut self.rng).unwrap().clone());
        if self.rng.gen_bool(0.3) {
            Formula::not(p)
        } else {
            p
        }
    }

    fn boolean(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.5) {
            return self.atom();
        }
        let parts = vec![self.boolean(depth - 1), self.boolean(depth - 1)];
        match self.rng.gen_range(0..3) {
            0 => Formula::and(parts),
            1 => Formula::or(parts),
            _ => Formula::not(Formula::and(parts)),
        }
    }

    fn interval(&mut self, budget: usize) -> Interval {
        let b = self.rng.gen_range(0..=budget);
        iv(self.rng.gen_range(0..=b), b)
    }

    /// A formula of length at most `budget`.
    fn formula(&mut self, budget: usize, depth: usize) -> Formula {
        if depth == 0 {
            return self.atom();
        }
        match self.rng.gen_range(0..8) {
            0 => self.atom(),
            1 => Formula::not(self.formula(budget, depth - 1)),
            2 => Formula::and(vec![self.formula(budget, depth - 1), self.formula(budget, depth - 1)]),
            3 => Formula::or(vec![self.formula(budget, depth - 1), self.formula(budget, depth - 1)]),
            4 => {
                let i = self.interval(budget);
                Formula::always(i, self.formula(budget - i.hi(), depth - 1))
            }
            5 => {
                let i = self.interval(budget);
                Formula::eventually(i, self.formula(budget - i.hi(), depth - 1))
            }
            _ => {
                let i = self.interval(budget);
                let rest = budget - i.hi();
                Formula::until(self.formula(rest, depth - 1), i, self.formula(rest, depth - 1))
            }
        }
    }

    fn fragment(&mut self) -> Option<FragmentSpec> {
        let len = self.rng.gen_range(4..=MAX_LENGTH);
        let safety = (0..self.rng.gen_range(1..=2))
            .map(|_| {
                let i = self.interval(len);
                SafetyTerm::new(i, self.boolean(1))
            })
            .collect();
        let progress = (0..self.rng.gen_range(1..=2))
            .map(|_| {
                let c = self.rng.gen_range(1..=3.min(len));
                let i = self.interval(len - c);
                ProgressTerm::new(i, c, self.boolean(1))
            })
            .collect();
        let c = self.rng.gen_range(0..=2);
        let i = self.interval(len - c);
        let target = TargetTerm::new(i, c, self.boolean(1));
        FragmentSpec::new(safety, progress, target).ok()
    }

    fn kappas(&mut self, horizon: usize) -> Vec<usize> {
        let mut inner: Vec<usize> = (1..horizon).collect();
        inner.shuffle(&mut self.rng);
        inner.truncate(self.rng.gen_range(0..=2.min(inner.len())));
        inner.sort_unstable();
        let mut k = vec![0];
        k.extend(inner);
        k.push(horizon);
        k
    }
}

struct Case {
    fragment: FragmentSpec,
    separated: SeparatedSpec,
    split: SplitSpec,
}

/// Random fragments with random timing points and split points, kept when both the
/// separation and the complete split exist.
fn corpus() -> Vec<Case> {
    let mut g = Gen::new(SEED, axis_atoms(N_ATOMS));
    let mut out = Vec::new();
    while out.len() < CORPUS_SIZE {
        let Some(fragment) = g.fragment() else { continue };
        let kappas = g.kappas(fragment.length());
        let Ok(separated) = syntactic_separation(&fragment, &kappas) else { continue };
        let taus = if g.rng.gen_bool(0.5) {
            TauPlan::Default
        } else {
            TauPlan::Uniform(g.rng.gen_range(0..=3))
        };
        let Ok(split) = complete_split(&separated, &taus) else { continue };
        out.push(Case {
            fragment,
            separated,
            split,
        });
    }
    out
}

fn sat(phi: &Formula, horizon: usize) -> stlsplit_core::split::SatSet {
    enumerate_oracle(phi, &axis_atoms(N_ATOMS), horizon).expect("within the oracle budget")
}

fn equivalent(lhs: &Formula, rhs: &Formula) -> bool {
    let h = lhs.length().max(rhs.length());
    sat(lhs, h) == sat(rhs, h)
}

fn separation_equivalence(cases: &[Case], r: &mut Report) {
    let started = Instant::now();
    let mismatches = cases
        .iter()
        .filter(|c| !equivalent(&c.fragment.formula(), &c.separated.formula()))
        .count();
    let secs = started.elapsed().as_secs_f64();
    r.line(
        "C1 separation equivalence",
        mismatches == 0 && secs < CORPUS_RUNTIME_S,
        format!("{} fragments, {mismatches} mismatches, {secs:.2} s", cases.len()),
    );
}

fn rewrite_identities(r: &mut Report) {
    let mut g = Gen::new(SEED + 1, axis_atoms(N_ATOMS));
    type Instance = Box<dyn Fn(&mut Gen) -> (Formula, Formula)>;
    let identities: Vec<(&str, Instance)> = vec![
        ("F{k} !phi = !F{k} phi", Box::new(|g| {
            let k = g.rng.gen_range(0..=4);
            let phi = g.formula(MAX_LENGTH - k, 3);
            (Formula::eventually(point(k), Formula::not(phi.clone())), Formula::not(Formula::eventually(point(k), phi)))
        })),
        ("F{k} (phi1 & phi2) = F{k} phi1 & F{k} phi2", Box::new(|g| {
            let k = g.rng.gen_range(0..=4);
            let (p1, p2) = (g.formula(MAX_LENGTH - k, 2), g.formula(MAX_LENGTH - k, 2));
            (
                Formula::eventually(point(k), Formula::and(vec![p1.clone(), p2.clone()])),
                Formula::and(vec![Formula::eventually(point(k), p1), Formula::eventually(point(k), p2)]),
            )
        })),
        ("F{k} (phi1 U(a,b) phi2) = F{k} phi1 U(a,b) F{k} phi2", Box::new(|g| {
            let k = g.rng.gen_range(0..=2);
            let a = g.rng.gen_range(0..=2);
            let b = g.rng.gen_range(a + 2..=a + 4);
            let i = open(a, b);
            let rest = MAX_LENGTH - k - i.hi();
            let (p1, p2) = (g.formula(rest, 1), g.formula(rest, 1));
            (
                Formula::eventually(point(k), Formula::until(p1.clone(), i, p2.clone())),
                Formula::until(Formula::eventually(point(k), p1), i, Formula::eventually(point(k), p2)),
            )
        })),
        ("phi U(a,b) (phi1 | phi2) = phi U(a,b) phi1 | phi U(a,b) phi2", Box::new(|g| {
            let a = g.rng.gen_range(0..=3);
            let b = g.rng.gen_range(a + 2..=a + 5);
            let i = open(a, b);
            let rest = MAX_LENGTH - i.hi();
            let (p, p1, p2) = (g.formula(rest, 2), g.formula(rest, 2), g.formula(rest, 2));
            (
                Formula::until(p.clone(), i, Formula::or(vec![p1.clone(), p2.clone()])),
                Formula::or(vec![Formula::until(p.clone(), i, p1), Formula::until(p, i, p2)]),
            )
        })),
        ("F{k} phi = G{k} phi", Box::new(|g| {
            let k = g.rng.gen_range(0..=6);
            let phi = g.formula(MAX_LENGTH - k, 3);
            (Formula::eventually(point(k), phi.clone()), Formula::always(point(k), phi))
        })),
        ("G{k} (phi1 | phi2) = G{k} phi1 | G{k} phi2", Box::new(|g| {
            let k = g.rng.gen_range(0..=6);
            let (p1, p2) = (g.formula(MAX_LENGTH - k, 2), g.formula(MAX_LENGTH - k, 2));
            (
                Formula::always(point(k), Formula::or(vec![p1.clone(), p2.clone()])),
                Formula::or(vec![Formula::always(point(k), p1), Formula::always(point(k), p2)]),
            )
        })),
        ("G{k} G[a,b] phi = G[k+a,k+b] phi", Box::new(|g| {
            let k = g.rng.gen_range(0..=3);
            let i = g.interval(MAX_LENGTH - k);
            let phi = g.formula(MAX_LENGTH - k - i.hi(), 2);
            (Formula::always(point(k), Formula::always(i, phi.clone())), Formula::always(i.shift_up(k), phi))
        })),
        ("F{k} F[a,b] phi = F[k+a,k+b] phi", Box::new(|g| {
            let k = g.rng.gen_range(0..=3);
            let i = g.interval(MAX_LENGTH - k);
            let phi = g.formula(MAX_LENGTH - k - i.hi(), 2);
            (Formula::eventually(point(k), Formula::eventually(i, phi.clone())), Formula::eventually(i.shift_up(k), phi))
        })),
        ("pushed-down F{k} phi = F{k} phi", Box::new(|g| {
            let k = g.rng.gen_range(0..=4);
            let phi = g.formula(MAX_LENGTH - k, 3);
            (shift_nested(k, &phi), Formula::eventually(point(k), phi))
        })),
        ("G[a,b] phi = G{a} phi & G(a,b) phi & G{b} phi", Box::new(|g| {
            let i = g.interval(MAX_LENGTH);
            let phi = g.formula(MAX_LENGTH - i.hi(), 2);
            (Formula::always(i, phi.clone()), split_endpoints(TemporalKind::Always, i, &phi))
        })),
        ("F[a,b] phi = F{a} phi | F(a,b) phi | F{b} phi", Box::new(|g| {
            let i = g.interval(MAX_LENGTH);
            let phi = g.formula(MAX_LENGTH - i.hi(), 2);
            (Formula::eventually(i, phi.clone()), split_endpoints(TemporalKind::Eventually, i, &phi))
        })),
        ("phi1 U(a,b) phi2 split at a < k < b", Box::new(|g| {
            let a = g.rng.gen_range(0..=3);
            let b = g.rng.gen_range(a + 2..=a + 5);
            let k = g.rng.gen_range(a + 1..b);
            let rest = MAX_LENGTH - (b - 1);
            let (p1, p2) = if g.rng.gen_bool(0.2) {
                (Formula::True, g.formula(rest, 2))
            } else {
                (g.formula(rest, 2), g.formula(rest, 2))
            };
            (Formula::until(p1.clone(), open(a, b), p2.clone()), separate_until(&p1, a, b, &p2, k).unwrap())
        })),
        ("G[a,b] phi = G[a,k] phi & G[k,b] phi", Box::new(|g| {
            let i = g.interval(MAX_LENGTH);
            let k = g.rng.gen_range(i.lo()..=i.hi());
            let phi = g.formula(MAX_LENGTH - i.hi(), 2);
            (
                Formula::always(i, phi.clone()),
                Formula::and(vec![Formula::always(iv(i.lo(), k), phi.clone()), Formula::always(iv(k, i.hi()), phi)]),
            )
        })),
        ("F[a,b] phi = F[a,k] phi | F[k,b] phi", Box::new(|g| {
            let i = g.interval(MAX_LENGTH);
            let k = g.rng.gen_range(i.lo()..=i.hi());
            let phi = g.formula(MAX_LENGTH - i.hi(), 2);
            (
                Formula::eventually(i, phi.clone()),
                Formula::or(vec![Formula::eventually(iv(i.lo(), k), phi.clone()), Formula::eventually(iv(k, i.hi()), phi)]),
            )
        })),
        ("G over cut points", Box::new(|g| {
            let i = g.interval(MAX_LENGTH);
            let kappas = g.kappas(MAX_LENGTH);
            let phi = g.formula(MAX_LENGTH - i.hi(), 2);
            (Formula::always(i, phi.clone()), split_temporal(TemporalKind::Always, i, &kappas, &phi).unwrap())
        })),
        ("F over cut points", Box::new(|g| {
            let i = g.interval(MAX_LENGTH);
            let kappas = g.kappas(MAX_LENGTH);
            let phi = g.formula(MAX_LENGTH - i.hi(), 2);
            (Formula::eventually(i, phi.clone()), split_temporal(TemporalKind::Eventually, i, &kappas, &phi).unwrap())
        })),
    ];
    let mut total = 0;
    for (name, make) in &identities {
        let mut bad = Vec::new();
        for _ in 0..IDENTITY_INSTANCES {
            let (lhs, rhs) = make(&mut g);
            if !equivalent(&lhs, &rhs) {
                bad.push(format!("{} vs {}", format_formula(&lhs), format_formula(&rhs)));
            }
        }
        println!("     {name}: {IDENTITY_INSTANCES} instances, {} mismatches", bad.len());
        for b in bad.iter().take(3) {
            println!("       {b}");
        }
        total += bad.len();
    }
    r.line(
        "C2 rewrite identities",
        total == 0,
        format!("{} identities x {IDENTITY_INSTANCES} instances, {total} mismatches", identities.len()),
    );
}

/// `G[0,6] F[0,3] p` cut at 4 with tau = 2, built without safety or target terms.
fn witness_gap() -> (usize, usize) {
    let p = Formula::pred(Predicate::lower_bound(0, 0.0));
    let phi = Formula::always(iv(0, 6), Formula::eventually(iv(0, 3), p.clone()));
    let separated = SeparatedSpec {
        kappas: vec![0, 4, 9],
        windows: vec![
            Window {
                progress: vec![ProgressTerm::new(iv(0, 4), 3, p.clone())],
                ..Window::default()
            },
            Window {
                progress: vec![ProgressTerm::new(iv(4, 6), 3, p.clone())],
                ..Window::default()
            },
        ],
    };
    let split = complete_split(&separated, &TauPlan::Uniform(2)).unwrap();
    let bar = Formula::and(split.windows.iter().map(|w| w.phi_bar()).collect());
    let atoms = axis_atoms(1);
    let whole = enumerate_oracle(&phi, &atoms, 9).unwrap();
    let conservative = enumerate_oracle(&bar, &atoms, 9).unwrap();
    let by_oracle = whole.difference(&conservative).len();
    let by_monitor = (0..1usize << 10)
        .filter(|&t| {
            let x = realize_axis(t, 1, 9);
            evaluate(&x, 0, &phi).unwrap() && !evaluate(&x, 0, &bar).unwrap()
        })
        .count();
    assert!(conservative.is_subset_of(&whole));
    (by_oracle, by_monitor)
}

fn split_soundness(cases: &[Case], r: &mut Report) {
    let violations = cases
        .iter()
        .filter(|c| {
            let h = c.fragment.length();
            !sat(&c.split.formula(), h).is_subset_of(&sat(&c.fragment.formula(), h))
        })
        .count();
    let (gap, brute) = witness_gap();
    r.line(
        "C3 split soundness",
        violations == 0 && gap == WITNESS_GAP && brute == gap,
        format!(
            "{} splits, {violations} violations; witness gap {gap} (monitor {brute}, reference {WITNESS_GAP})",
            cases.len()
        ),
    );
}

fn decomposition(cases: &[Case], r: &mut Report) {
    let started = Instant::now();
    let mut mismatches = 0;
    let mut traces = 0usize;
    for c in cases.iter().take(DECOMPOSITION_SPLITS) {
        let h = c.split.horizon();
        let s = sat(&c.split.formula(), h);
        for t in 0..1usize << (N_ATOMS * (h + 1)) {
            let v = modular_check(&realize_axis(t, N_ATOMS, h), &c.split).unwrap();
            traces += 1;
            if v.overall != s.contains(t) {
                mismatches += 1;
            }
        }
    }
    r.line(
        "C4 modular check decomposition",
        mismatches == 0,
        format!(
            "{DECOMPOSITION_SPLITS} splits, {traces} traces, {mismatches} mismatches, {:.1} s",
            started.elapsed().as_secs_f64()
        ),
    );
}

/// Evaluation with the encoder's margins: a predicate counts as true only with
/// margin `eps` and as false only with margin `neg`.
fn holds_with_margin(x: &[f64], k: usize, phi: &Formula, positive: bool, eps: f64, neg: f64) -> bool {
    let h = |k, f, pos| holds_with_margin(x, k, f, pos, eps, neg);
    match phi {
        Formula::True => true,
        Formula::Pred(p) => {
            let v = p.value(&[x[k]]);
            if positive {
                v >= eps
            } else {
                v > -neg
            }
        }
        Formula::Not(f) => !h(k, f, !positive),
        Formula::And(fs) => fs.iter().all(|f| h(k, f, positive)),
        Formula::Or(fs) => fs.iter().any(|f| h(k, f, positive)),
        Formula::Always(i, f) => i.iter().all(|j| h(k + j, f, positive)),
        Formula::Eventually(i, f) => i.iter().any(|j| h(k + j, f, positive)),
        Formula::Until(l, i, r) => i
            .iter()
            .any(|j| h(k + j, r, positive) && (k..=k + j).all(|m| h(m, l, positive))),
    }
}

fn grid_search(x0: f64, len: usize, phi: &Formula, eps: f64, neg: f64) -> bool {
    let mut x = vec![x0; len + 1];
    (0..3usize.pow(len as u32)).any(|mut code| {
        for k in 0..len {
            x[k + 1] = x[k] + (code % 3) as f64 - 1.0;
            code /= 3;
        }
        holds_with_margin(&x, 0, phi, true, eps, neg)
    })
}

fn milp_vs_grid(r: &mut Report) {
    let started = Instant::now();
    let thresholds: Vec<f64> = (-6..=6).map(|i| f64::from(i) * 0.5).collect();
    let atoms: Vec<Predicate> = thresholds
        .iter()
        .flat_map(|&c| [Predicate::lower_bound(0, c), Predicate::upper_bound(0, c)])
        .collect();
    let mut g = Gen::new(SEED + 2, atoms);
    let sys = LinearSystem::single_integrator(1, 1.0);
    let params = EncodeParams::default();
    let (eps, neg) = (params.epsilon, params.epsilon.max(NEGATIVE_LITERAL_MIN_MARGIN));
    let limits = SolveLimits::default();
    let mut disagreements = 0;
    let mut feasible = 0;
    let mut contract = 0;
    for _ in 0..GRID_FORMULAS {
        let phi = g.formula(6, 3);
        let len = phi.length();
        let x0 = f64::from(g.rng.gen_range(-2..=2));
        let mut model = encode(&[x0], len, &phi, &sys, params).unwrap();
        model.restrict_inputs_to_grid(&[-1.0, 0.0, 1.0]);
        let res = solve(&model, &limits).unwrap();
        let expected = grid_search(x0, len, &phi, eps, neg);
        if res.feasible != expected {
            disagreements += 1;
            println!("     disagreement: x0 = {x0}, {} (milp {}, search {expected})", format_formula(&phi), res.feasible);
        }
        if res.feasible {
            feasible += 1;
            let x: Vec<f64> = res.states.as_ref().unwrap().samples().iter().map(|s| s[0]).collect();
            let ok = res.inputs.len() == len
                && x[0] == x0
                && res.inputs.iter().enumerate().all(|(k, u)| {
                    [-1.0, 0.0, 1.0].contains(&u[0]) && (x[k] + u[0] - x[k + 1]).abs() < 1e-9
                })
                && holds_with_margin(&x, 0, &phi, true, eps, neg);
            if !ok {
                contract += 1;
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    r.line(
        "C5 MILP vs exhaustive grid search",
        disagreements == 0 && contract == 0 && secs < GRID_RUNTIME_S,
        format!(
            "{GRID_FORMULAS} formulas ({feasible} feasible), {disagreements} disagreements, {contract} contract violations, {secs:.1} s"
        ),
    );
}

fn casestudy(r: &mut Report) {
    let dir = tempfile::tempdir().unwrap();
    let started = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_stlsplit"))
        .args(["casestudy", "--out"])
        .arg(dir.path())
        .output()
        .unwrap()
        .status;
    let secs = started.elapsed().as_secs_f64();
    let read = |name: &str| std::fs::read_to_string(Path::new(dir.path()).join(name)).unwrap_or_default();
    let trace = read_trace_csv(&read("trajectory.csv")).ok();
    let report: serde_json::Value = serde_json::from_str(&read("modular.json")).unwrap_or_default();
    let window_times: Vec<f64> = report["per_window"]
        .as_array()
        .map(|ws| ws.iter().filter_map(|w| w["wall_time_s"].as_f64()).collect())
        .unwrap_or_default();
    let rho = report["robustness"].as_f64().unwrap_or(f64::NAN);
    let s = build_casestudy();
    let monitor = trace.as_ref().is_some_and(|t: &Trace| evaluate(t, 0, &s.formula()).unwrap_or(false));
    let states = trace.as_ref().map_or(0, Trace::len);
    let final_verdict = report["final_verdict"].as_bool() == Some(true);
    let slowest = window_times.iter().copied().fold(0.0, f64::max);
    let ok = status.success()
        && states == 46
        && final_verdict
        && monitor
        && window_times.len() == 3
        && slowest < WINDOW_BUDGET_S
        && secs < TOTAL_BUDGET_S
        && rho > 0.0;
    r.line(
        "C6 case study",
        ok,
        format!(
            "exit {:?}, {states} states, final_verdict {final_verdict}, monitor {monitor}, rho {rho}, slowest window {slowest:.2} s, total {secs:.2} s",
            status.code()
        ),
    );
}

fn bench(r: &mut Report) {
    let report = run_bench(&build_casestudy());
    let mono = &report.monolithic;
    let modular = &report.modular;
    let mono_ok = !mono.feasible || mono.monitor_ok == Some(true);
    let modular_ok = modular.feasible && modular.monitor_ok == Some(true);
    let evidence = mono.feasible || mono.timed_out;
    let smaller = modular.max_window_binaries < mono.binaries
        && report.l_bar < report.l
        && report.n_bar * report.l_bar < report.n * report.l;
    r.line(
        "C7 benchmark",
        mono_ok && modular_ok && evidence && smaller,
        format!(
            "monolithic feasible {} timed_out {} {:.2} s {} binaries; modular {:.2} s max {} binaries; N {} L {} N_bar {} L_bar {}; speedup {}",
            mono.feasible,
            mono.timed_out,
            mono.wall_time_s,
            mono.binaries,
            modular.total_wall_time_s,
            modular.max_window_binaries,
            report.n,
            report.l,
            report.n_bar,
            report.l_bar,
            report.speedup.map_or("n/a".to_string(), |s| format!("{s:.1}x")),
        ),
    );
}

fn main() -> ExitCode {
    let mut r = Report { failed: 0 };
    let cases = corpus();
    separation_equivalence(&cases, &mut r);
    rewrite_identities(&mut r);
    split_soundness(&cases, &mut r);
    decomposition(&cases, &mut r);
    milp_vs_grid(&mut r);
    casestudy(&mut r);
    bench(&mut r);
    if r.failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", r.failed);
        ExitCode::FAILURE
    }
}
