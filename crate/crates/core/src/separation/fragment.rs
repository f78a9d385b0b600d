use serde::{Deserialize, Serialize};

use crate::stl::{Formula, Interval};

use super::SeparationError;

/// `G[a,b] gamma`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SafetyTerm {
    pub interval: Interval,
    pub gamma: Formula,
}

/// `G[a,b] F[0,c] gamma`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProgressTerm {
    pub interval: Interval,
    pub c: usize,
    pub gamma: Formula,
}

/// `F[a,b] G[0,c] gamma`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetTerm {
    pub interval: Interval,
    pub c: usize,
    pub gamma: Formula,
}

impl SafetyTerm {
    pub fn new(interval: Interval, gamma: Formula) -> Self {
        Self { interval, gamma }
    }

    pub fn formula(&self) -> Formula {
        Formula::always(self.interval, self.gamma.clone())
    }

    pub fn complete_interval(&self) -> Interval {
        self.interval
    }
}

impl ProgressTerm {
    pub fn new(interval: Interval, c: usize, gamma: Formula) -> Self {
        Self { interval, c, gamma }
    }

    pub fn formula(&self) -> Formula {
        Formula::always(
            self.interval,
            Formula::eventually(Interval::new(0, self.c).unwrap(), self.gamma.clone()),
        )
    }

    pub fn complete_interval(&self) -> Interval {
        Interval::new(self.interval.lo(), self.interval.hi() + self.c).unwrap()
    }
}

impl TargetTerm {
    pub fn new(interval: Interval, c: usize, gamma: Formula) -> Self {
        Self { interval, c, gamma }
    }

    pub fn formula(&self) -> Formula {
        Formula::eventually(
            self.interval,
            Formula::always(Interval::new(0, self.c).unwrap(), self.gamma.clone()),
        )
    }

    pub fn complete_interval(&self) -> Interval {
        Interval::new(self.interval.lo(), self.interval.hi() + self.c).unwrap()
    }
}

/// Conjunction of safety, progress and a single target obligation over boolean `gamma`s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FragmentSpec {
    pub safety: Vec<SafetyTerm>,
    pub progress: Vec<ProgressTerm>,
    pub target: TargetTerm,
}

impl FragmentSpec {
    /// Checks the shape invariants: at least one safety and one progress term,
    /// boolean `gamma`s.
    pub fn new(
        safety: Vec<SafetyTerm>,
        progress: Vec<ProgressTerm>,
        target: TargetTerm,
    ) -> Result<Self, SeparationError> {
        let mut problems = Vec::new();
        if safety.is_empty() {
            problems.push("no safety term G[a,b] gamma".to_string());
        }
        if progress.is_empty() {
            problems.push("no progress term G[a,b] F[0,c] gamma".to_string());
        }
        let gammas = safety
            .iter()
            .map(|t| &t.gamma)
            .chain(progress.iter().map(|t| &t.gamma))
            .chain(std::iter::once(&target.gamma));
        if gammas.into_iter().any(|g| !g.is_boolean()) {
            problems.push("a gamma contains a temporal operator".to_string());
        }
        if !problems.is_empty() {
            return Err(SeparationError::Shape(problems));
        }
        Ok(Self {
            safety,
            progress,
            target,
        })
    }

    /// Recognizes a conjunction of fragment terms, in any order.
    pub fn from_formula(phi: &Formula) -> Result<Self, SeparationError> {
        let terms: Vec<&Formula> = match phi {
            Formula::And(fs) => fs.iter().collect(),
            other => vec![other],
        };
        let mut safety = Vec::new();
        let mut progress = Vec::new();
        let mut targets = Vec::new();
        let mut problems = Vec::new();
        for (idx, t) in terms.iter().enumerate() {
            match t {
                Formula::Always(i, inner) => match inner.as_ref() {
                    Formula::Eventually(j, g) if j.lo() == 0 && g.is_boolean() => {
                        progress.push(ProgressTerm::new(*i, j.hi(), (**g).clone()))
                    }
                    Formula::Eventually(j, _) if j.lo() != 0 => problems.push(format!(
                        "term {}: progress needs F[0,c], found F{j}",
                        idx + 1
                    )),
                    g if g.is_boolean() => safety.push(SafetyTerm::new(*i, g.clone())),
                    _ => problems.push(format!(
                        "term {}: G must wrap a boolean formula or F[0,c] of one",
                        idx + 1
                    )),
                },
                Formula::Eventually(i, inner) => match inner.as_ref() {
                    Formula::Always(j, g) if j.lo() == 0 && g.is_boolean() => {
                        targets.push(TargetTerm::new(*i, j.hi(), (**g).clone()))
                    }
                    _ => problems.push(format!(
                        "term {}: target must be F[a,b] G[0,c] gamma with boolean gamma",
                        idx + 1
                    )),
                },
                _ => problems.push(format!(
                    "term {}: expected G[a,b] gamma, G[a,b] F[0,c] gamma or F[a,b] G[0,c] gamma",
                    idx + 1
                )),
            }
        }
        if safety.is_empty() {
            problems.push("no safety term G[a,b] gamma".to_string());
        }
        if progress.is_empty() {
            problems.push("no progress term G[a,b] F[0,c] gamma".to_string());
        }
        match targets.len() {
            1 => {}
            0 => problems.push("no target term F[a,b] G[0,c] gamma".to_string()),
            n => problems.push(format!("{n} target terms, exactly one allowed")),
        }
        if !problems.is_empty() {
            return Err(SeparationError::Shape(problems));
        }
        Self::new(safety, progress, targets.pop().unwrap())
    }

    /// The induced formula: safety terms, then progress terms, then the target.
    pub fn formula(&self) -> Formula {
        let mut parts: Vec<Formula> = self.safety.iter().map(SafetyTerm::formula).collect();
        parts.extend(self.progress.iter().map(ProgressTerm::formula));
        parts.push(self.target.formula());
        Formula::and(parts)
    }

    pub fn length(&self) -> usize {
        self.formula().length()
    }
}
