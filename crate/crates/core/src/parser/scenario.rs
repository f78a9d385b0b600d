//! Scenario documents: system, regions, fragment specification, split plan and
//! solver parameters.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::milp::{EncodeParams, LinearSystem, Optimizer, SolveLimits};
use crate::separation::{
    check_kappas, syntactic_separation, FragmentSpec, SeparatedSpec, SeparationError,
};
use crate::split::{complete_split, SplitError, SplitSpec, TauPlan};
use crate::stl::Formula;

use super::{format_formula_with, parse_formula_with, ParseError, ParseErrorKind, Region, RegionTable};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub system: LinearSystem,
    pub x0: Vec<f64>,
    pub horizon: usize,
    pub regions: RegionTable,
    pub fragment: FragmentSpec,
    pub kappas: Vec<usize>,
    pub taus: TauPlan,
    pub params: EncodeParams,
    pub limits: SolveLimits,
}

impl ScenarioFile {
    pub fn formula(&self) -> Formula {
        self.fragment.formula()
    }

    pub fn separated(&self) -> Result<SeparatedSpec, SeparationError> {
        syntactic_separation(&self.fragment, &self.kappas)
    }

    pub fn split(&self) -> Result<SplitSpec, SplitError> {
        complete_split(&self.separated()?, &self.taus)
    }

    pub fn optimizer(&self) -> Optimizer {
        Optimizer {
            params: self.params,
            limits: self.limits,
        }
    }
}

const SECTIONS: [&str; 5] = ["SYSTEM", "REGIONS", "SPEC", "SPLIT", "SOLVER"];

/// A source line with its 1-based number and the column its text starts at.
#[derive(Clone, Copy)]
struct Line<'a> {
    no: usize,
    col: usize,
    text: &'a str,
}

struct Entry<'a> {
    key: Line<'a>,
    value: Line<'a>,
}

fn err(kind: ParseErrorKind, at: Line, message: impl Into<String>) -> ParseError {
    ParseError::new(kind, at.no, at.col, message)
}

fn entries<'a>(lines: &[Line<'a>]) -> Result<BTreeMap<&'a str, Entry<'a>>, ParseError> {
    let mut out = BTreeMap::new();
    for &line in lines {
        let Some(eq) = line.text.find('=') else {
            return Err(err(ParseErrorKind::Syntax, line, "expected `key = value`"));
        };
        let raw_key = &line.text[..eq];
        let key = raw_key.trim();
        let raw_value = &line.text[eq + 1..];
        let value = raw_value.trim();
        let value_col = line.col + eq + 1 + (raw_value.len() - raw_value.trim_start().len());
        let entry = Entry {
            key: Line { text: key, ..line },
            value: Line {
                no: line.no,
                col: value_col,
                text: value,
            },
        };
        if out.insert(key, entry).is_some() {
            return Err(err(ParseErrorKind::Syntax, line, format!("duplicate key `{key}`")));
        }
    }
    Ok(out)
}

fn check_keys(entries: &BTreeMap<&str, Entry>, section: &str, allowed: &[&str]) -> Result<(), ParseError> {
    for (key, e) in entries {
        if !allowed.contains(key) {
            return Err(err(
                ParseErrorKind::Syntax,
                e.key,
                format!("unknown key `{key}` in [{section}]"),
            ));
        }
    }
    Ok(())
}

fn number(at: Line, s: &str) -> Result<f64, ParseError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| err(ParseErrorKind::Syntax, at, format!("invalid number `{}`", s.trim())))?;
    if !v.is_finite() {
        return Err(err(ParseErrorKind::Validation, at, "numbers must be finite"));
    }
    Ok(v)
}

fn integer(at: Line, s: &str) -> Result<usize, ParseError> {
    s.trim().parse().map_err(|_| {
        err(
            ParseErrorKind::Syntax,
            at,
            format!("expected a non-negative integer, found `{}`", s.trim()),
        )
    })
}

fn vector(at: Line) -> Result<Vec<f64>, ParseError> {
    at.text.split(',').map(|s| number(at, s)).collect()
}

fn matrix(at: Line) -> Result<Vec<Vec<f64>>, ParseError> {
    at.text
        .split(';')
        .map(|row| row.split(',').map(|s| number(at, s)).collect())
        .collect()
}

fn required<'a, 'b>(
    entries: &'b BTreeMap<&str, Entry<'a>>,
    key: &str,
    section: Line,
) -> Result<&'b Entry<'a>, ParseError> {
    entries.get(key).ok_or_else(|| {
        err(
            ParseErrorKind::Validation,
            section,
            format!("missing key `{key}`"),
        )
    })
}

fn dim_check(at: Line, what: &str, found: usize, expected: usize) -> Result<(), ParseError> {
    if found != expected {
        return Err(err(
            ParseErrorKind::DimensionMismatch,
            at,
            format!("{what} has {found} entries, expected {expected}"),
        ));
    }
    Ok(())
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioFile, ParseError> {
    let mut sections: BTreeMap<&str, (Line, Vec<Line>)> = BTreeMap::new();
    let mut current: Option<&str> = None;
    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        let content = raw.split('#').next().unwrap();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = content.len() - content.trim_start().len() + 1;
        let line = Line {
            no,
            col,
            text: trimmed,
        };
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = SECTIONS.iter().find(|s| **s == name).ok_or_else(|| {
                err(ParseErrorKind::Syntax, line, format!("unknown section [{name}]"))
            })?;
            if sections.contains_key(name) {
                return Err(err(ParseErrorKind::Syntax, line, format!("duplicate section [{name}]")));
            }
            sections.insert(name, (line, Vec::new()));
            current = Some(name);
            continue;
        }
        let Some(name) = current else {
            return Err(err(ParseErrorKind::Syntax, line, "content before the first section"));
        };
        // SPEC keeps the raw line so that formula error columns stay exact.
        let kept = if name == "SPEC" {
            Line {
                no,
                col: 1,
                text: content,
            }
        } else {
            line
        };
        sections.get_mut(name).unwrap().1.push(kept);
    }
    let whole = Line {
        no: 1,
        col: 1,
        text: "",
    };
    let section = |name: &str| -> Result<&(Line, Vec<Line>), ParseError> {
        sections.get(name).ok_or_else(|| {
            err(ParseErrorKind::Validation, whole, format!("missing section [{name}]"))
        })
    };

    // SYSTEM
    let (sys_at, sys_lines) = section("SYSTEM")?;
    let sys = entries(sys_lines)?;
    check_keys(&sys, "SYSTEM", &["n", "m", "A", "B", "input_lo", "input_hi", "x0", "horizon"])?;
    let a_at = required(&sys, "A", *sys_at)?.value;
    let a = matrix(a_at)?;
    let n = a.len();
    if let Some(e) = sys.get("n") {
        dim_check(e.value, "n", integer(e.value, e.value.text)?, n)?;
    }
    for row in &a {
        dim_check(a_at, "a row of A", row.len(), n)?;
    }
    let b_at = required(&sys, "B", *sys_at)?.value;
    let b = matrix(b_at)?;
    dim_check(b_at, "B", b.len(), n)?;
    let m = b[0].len();
    for row in &b {
        dim_check(b_at, "a row of B", row.len(), m)?;
    }
    if let Some(e) = sys.get("m") {
        dim_check(e.value, "m", integer(e.value, e.value.text)?, m)?;
    }
    let lo_at = required(&sys, "input_lo", *sys_at)?.value;
    let input_lo = vector(lo_at)?;
    dim_check(lo_at, "input_lo", input_lo.len(), m)?;
    let hi_at = required(&sys, "input_hi", *sys_at)?.value;
    let input_hi = vector(hi_at)?;
    dim_check(hi_at, "input_hi", input_hi.len(), m)?;
    let system = LinearSystem::new(a, b, input_lo, input_hi)
        .map_err(|e| err(ParseErrorKind::Validation, hi_at, e.to_string()))?;
    let x0_at = required(&sys, "x0", *sys_at)?.value;
    let x0 = vector(x0_at)?;
    dim_check(x0_at, "x0", x0.len(), n)?;
    let horizon_at = required(&sys, "horizon", *sys_at)?.value;
    let horizon = integer(horizon_at, horizon_at.text)?;

    // REGIONS
    let mut regions = RegionTable::new();
    if let Some((_, lines)) = sections.get("REGIONS") {
        for (name, e) in entries(lines)? {
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(err(ParseErrorKind::Syntax, e.key, format!("invalid region name `{name}`")));
            }
            let rows = matrix(e.value)?;
            dim_check(e.value, &format!("region {name}"), rows.len(), n)?;
            let mut lo = Vec::with_capacity(n);
            let mut hi = Vec::with_capacity(n);
            for row in rows {
                if row.len() != 2 || row[0] > row[1] {
                    return Err(err(
                        ParseErrorKind::Validation,
                        e.value,
                        format!("region {name}: each axis needs `lo, hi` with lo <= hi"),
                    ));
                }
                lo.push(row[0]);
                hi.push(row[1]);
            }
            regions.insert(name.to_string(), Region::new(lo, hi));
        }
    }

    // SPEC
    let (spec_at, spec_lines) = section("SPEC")?;
    let Some(first) = spec_lines.first() else {
        return Err(err(ParseErrorKind::Validation, *spec_at, "empty [SPEC] section"));
    };
    // Blank lines inside SPEC were skipped; pad them back so positions line up.
    let mut spec_text = String::new();
    let mut next_no = first.no;
    for l in spec_lines {
        while next_no < l.no {
            spec_text.push('\n');
            next_no += 1;
        }
        spec_text.push_str(l.text);
        spec_text.push('\n');
        next_no += 1;
    }
    let phi = parse_formula_with(&spec_text, &regions).map_err(|mut e| {
        e.line += first.no - 1;
        e
    })?;
    if phi.dim() > n {
        return Err(err(
            ParseErrorKind::DimensionMismatch,
            *first,
            format!("the specification uses x{} but the system has {n} states", phi.dim()),
        ));
    }
    let fragment = FragmentSpec::from_formula(&phi)
        .map_err(|e| err(ParseErrorKind::Validation, *first, e.to_string()))?;
    let length = fragment.length();
    if horizon != length {
        return Err(err(
            ParseErrorKind::HorizonMismatch,
            horizon_at,
            format!("horizon is {horizon} but the specification has length {length}"),
        ));
    }

    // SPLIT
    let mut kappas = vec![0, horizon];
    let mut taus = TauPlan::Default;
    if let Some((split_at, lines)) = sections.get("SPLIT") {
        let split = entries(lines)?;
        check_keys(&split, "SPLIT", &["kappas", "taus"])?;
        let mut kappa_at = *split_at;
        if let Some(e) = split.get("kappas") {
            kappa_at = e.value;
            kappas = e
                .value
                .text
                .split(',')
                .map(|s| integer(e.value, s))
                .collect::<Result<_, _>>()?;
        }
        check_kappas(&kappas, horizon)
            .map_err(|e| err(ParseErrorKind::Validation, kappa_at, e.to_string()))?;
        if let Some(e) = split.get("taus") {
            let t = e.value.text;
            taus = if t == "default" {
                TauPlan::Default
            } else if let Some(list) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let list = if list.trim().is_empty() {
                    Vec::new()
                } else {
                    list.split(',').map(|s| integer(e.value, s)).collect::<Result<_, _>>()?
                };
                TauPlan::Explicit(list)
            } else {
                TauPlan::Uniform(integer(e.value, t)?)
            };
        }
    }

    // SOLVER
    let mut params = EncodeParams::default();
    let mut limits = SolveLimits::default();
    if let Some((_, lines)) = sections.get("SOLVER") {
        let solver = entries(lines)?;
        check_keys(
            &solver,
            "SOLVER",
            &["big_m", "epsilon", "lambda", "node_budget", "time_budget_s", "improve_nodes", "seed"],
        )?;
        for (key, e) in &solver {
            let at = e.value;
            match *key {
                "big_m" => params.big_m = number(at, at.text)?,
                "epsilon" => params.epsilon = number(at, at.text)?,
                "lambda" => params.lambda = number(at, at.text)?,
                "node_budget" => limits.node_budget = integer(at, at.text)?,
                "time_budget_s" => limits.time_budget_s = number(at, at.text)?,
                "improve_nodes" => limits.improve_nodes = integer(at, at.text)?,
                "seed" => {
                    limits.seed = at.text.parse().map_err(|_| {
                        err(ParseErrorKind::Syntax, at, format!("invalid seed `{}`", at.text))
                    })?
                }
                _ => unreachable!("keys were checked"),
            }
            let ok = match *key {
                "big_m" => params.big_m > 0.0,
                "epsilon" => params.epsilon >= 0.0,
                "lambda" => params.lambda >= 0.0,
                "time_budget_s" => limits.time_budget_s >= 0.0,
                _ => true,
            };
            if !ok {
                let rule = if *key == "big_m" { "positive" } else { "non-negative" };
                return Err(err(ParseErrorKind::Validation, at, format!("{key} must be {rule}")));
            }
        }
    }

    Ok(ScenarioFile {
        system,
        x0,
        horizon,
        regions,
        fragment,
        kappas,
        taus,
        params,
        limits,
    })
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn join_rows(rows: &[Vec<f64>]) -> String {
    rows.iter().map(|r| join(r)).collect::<Vec<_>>().join("; ")
}

/// Writes a scenario document that [`parse_scenario`] reads back unchanged.
pub fn format_scenario(s: &ScenarioFile) -> String {
    let mut out = String::new();
    let sys = &s.system;
    out.push_str("[SYSTEM]\n");
    writeln!(out, "n = {}", sys.n()).unwrap();
    writeln!(out, "m = {}", sys.m()).unwrap();
    writeln!(out, "A = {}", join_rows(&sys.a)).unwrap();
    writeln!(out, "B = {}", join_rows(&sys.b)).unwrap();
    writeln!(out, "input_lo = {}", join(&sys.input_lo)).unwrap();
    writeln!(out, "input_hi = {}", join(&sys.input_hi)).unwrap();
    writeln!(out, "x0 = {}", join(&s.x0)).unwrap();
    writeln!(out, "horizon = {}", s.horizon).unwrap();
    out.push_str("\n[REGIONS]\n");
    for (name, r) in &s.regions {
        let axes: Vec<Vec<f64>> = r.lo.iter().zip(&r.hi).map(|(l, h)| vec![*l, *h]).collect();
        writeln!(out, "{name} = {}", join_rows(&axes)).unwrap();
    }
    out.push_str("\n[SPEC]\n");
    let terms: Vec<String> = match s.formula() {
        Formula::And(fs) => fs.iter().map(|f| format_formula_with(f, &s.regions)).collect(),
        f => vec![format_formula_with(&f, &s.regions)],
    };
    for (i, t) in terms.iter().enumerate() {
        let lead = if i == 0 { "  " } else { "& " };
        writeln!(out, "{lead}{t}").unwrap();
    }
    out.push_str("\n[SPLIT]\n");
    let kappas: Vec<String> = s.kappas.iter().map(|k| k.to_string()).collect();
    writeln!(out, "kappas = {}", kappas.join(", ")).unwrap();
    let taus = match &s.taus {
        TauPlan::Default => "default".to_string(),
        TauPlan::Uniform(t) => t.to_string(),
        TauPlan::Explicit(list) => {
            let list: Vec<String> = list.iter().map(|t| t.to_string()).collect();
            format!("[{}]", list.join(", "))
        }
    };
    writeln!(out, "taus = {taus}").unwrap();
    out.push_str("\n[SOLVER]\n");
    writeln!(out, "big_m = {}", s.params.big_m).unwrap();
    writeln!(out, "epsilon = {}", s.params.epsilon).unwrap();
    writeln!(out, "lambda = {}", s.params.lambda).unwrap();
    writeln!(out, "node_budget = {}", s.limits.node_budget).unwrap();
    writeln!(out, "time_budget_s = {}", s.limits.time_budget_s).unwrap();
    writeln!(out, "improve_nodes = {}", s.limits.improve_nodes).unwrap();
    writeln!(out, "seed = {}", s.limits.seed).unwrap();
    out
}
