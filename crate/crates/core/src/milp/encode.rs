//! Big-M encoding of STL satisfaction over a linear system's trajectory.
//!
//! The formula is first put in negation normal form. Only literals carry binaries;
//! every other node at every time step is a continuous indicator in `[0, 1]` bounded
//! from above by its children, which is enough because the root is forced to 1 and
//! satisfaction is monotone in the literals. A conjunction made only of literals
//! (a box region, say) shares one binary for all of them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::stl::{Formula, Interval, Predicate};

use super::program::{LinearProgram, Sense};
use super::{LinearSystem, MilpError};

/// Smallest margin used to assert a predicate false when `epsilon` is 0, so that an
/// asserted `!(eta >= 0)` really means `eta < 0`.
pub const NEGATIVE_LITERAL_MIN_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodeParams {
    /// Big-M constant.
    pub big_m: f64,
    /// Required predicate margin: `eta >= epsilon` when asserted, `eta <= -epsilon`
    /// when negated.
    pub epsilon: f64,
    /// Weight of the L1 input cost.
    pub lambda: f64,
}

impl Default for EncodeParams {
    fn default() -> Self {
        Self {
            big_m: 1e4,
            epsilon: 1e-3,
            lambda: 1.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelStats {
    pub variables: usize,
    pub constraints: usize,
    pub binaries: usize,
    /// Binaries attached to predicates (one per literal or literal conjunction and step).
    pub predicate_binaries: usize,
}

/// Encoded synthesis problem together with what is needed to read solutions back.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MilpModel {
    pub program: LinearProgram,
    pub horizon: usize,
    pub x0: Vec<f64>,
    pub system: LinearSystem,
    pub formula: Formula,
    pub params: EncodeParams,
    pub stats: ModelStats,
    state_vars: Vec<Vec<usize>>,
    input_vars: Vec<Vec<usize>>,
}

impl MilpModel {
    pub fn state_var(&self, k: usize, i: usize) -> usize {
        self.state_vars[k][i]
    }

    pub fn input_var(&self, k: usize, i: usize) -> usize {
        self.input_vars[k][i]
    }

    /// Restricts every input component to the values in `grid` with one binary per
    /// value.
    pub fn restrict_inputs_to_grid(&mut self, grid: &[f64]) {
        for k in 0..self.horizon {
            for i in 0..self.system.m() {
                let u = self.input_vars[k][i];
                let mut pick = Vec::with_capacity(grid.len());
                let mut link = vec![(u, 1.0)];
                for (g, &v) in grid.iter().enumerate() {
                    let b = self
                        .program
                        .add_var(format!("g_{k}_{}_{}", i + 1, g + 1), 0.0, 1.0, true);
                    pick.push((b, 1.0));
                    link.push((b, -v));
                }
                self.program
                    .add_constraint(format!("gs_{k}_{}", i + 1), pick, Sense::Eq, 1.0);
                self.program
                    .add_constraint(format!("gv_{k}_{}", i + 1), link, Sense::Eq, 0.0);
            }
        }
        self.refresh_stats();
    }

    fn refresh_stats(&mut self) {
        self.stats.variables = self.program.vars.len();
        self.stats.constraints = self.program.constraints.len();
        self.stats.binaries = self.program.binaries();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(Predicate, bool),
    And(Vec<usize>),
    Or(Vec<usize>),
    Always(Interval, usize),
    Eventually(Interval, usize),
    Until(usize, Interval, usize),
    /// `!(!l U !r)`: at every step of the window `r` holds or `l` has held since `k`.
    Release(usize, Interval, usize),
}

#[derive(Default)]
struct Nnf {
    nodes: Vec<Node>,
    ids: HashMap<Node, usize>,
}

impl Nnf {
    fn intern(&mut self, node: Node) -> usize {
        if let Some(&id) = self.ids.get(&node) {
            return id;
        }
        self.nodes.push(node.clone());
        self.ids.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn build(&mut self, phi: &Formula, neg: bool) -> usize {
        let node = match phi {
            Formula::True => {
                if neg {
                    Node::False
                } else {
                    Node::True
                }
            }
            Formula::Pred(p) => Node::Lit(p.clone(), neg),
            Formula::Not(f) => return self.build(f, !neg),
            Formula::And(fs) | Formula::Or(fs) => {
                let kids = fs.iter().map(|f| self.build(f, neg)).collect();
                if matches!(phi, Formula::And(_)) != neg {
                    Node::And(kids)
                } else {
                    Node::Or(kids)
                }
            }
            Formula::Always(i, f) | Formula::Eventually(i, f) => {
                let kid = self.build(f, neg);
                if matches!(phi, Formula::Always(..)) != neg {
                    Node::Always(*i, kid)
                } else {
                    Node::Eventually(*i, kid)
                }
            }
            Formula::Until(l, i, r) => {
                let (l, r) = (self.build(l, neg), self.build(r, neg));
                if neg {
                    Node::Release(l, *i, r)
                } else {
                    Node::Until(l, *i, r)
                }
            }
        };
        self.intern(node)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Enc {
    Const(bool),
    Var(usize),
}

struct Encoder<'a> {
    nnf: &'a Nnf,
    lp: LinearProgram,
    params: EncodeParams,
    states: Vec<Vec<usize>>,
    boxes: Vec<(Vec<f64>, Vec<f64>)>,
    memo: HashMap<(usize, usize), Enc>,
    predicate_binaries: usize,
    aux: usize,
    big_m_short: f64,
}

impl Encoder<'_> {
    fn margin(&self, neg: bool) -> f64 {
        if neg {
            self.params.epsilon.max(NEGATIVE_LITERAL_MIN_MARGIN)
        } else {
            self.params.epsilon
        }
    }

    /// `z = 1  =>  eta(x_k) >= eps` (or `<= -eps` when negated).
    fn literal_row(&mut self, p: &Predicate, neg: bool, k: usize, z: usize) {
        let sign = if neg { -1.0 } else { 1.0 };
        let eps = self.margin(neg);
        let m = self.params.big_m;
        let mut coeffs: Vec<(usize, f64)> = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| (self.states[k][i], sign * c))
            .collect();
        coeffs.push((z, -m));
        let rhs = eps - m - sign * p.offset();
        let name = format!("lit_{}", self.lp.constraints.len());
        self.lp.add_constraint(name, coeffs, Sense::Ge, rhs);
        // The row must be slack when z = 0 anywhere in the reachable box.
        let (lo, hi) = &self.boxes[k];
        let worst: f64 = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (sign * c * lo[i]).min(sign * c * hi[i]))
            .sum::<f64>()
            + sign * p.offset();
        let needed = eps - worst;
        if needed > m {
            self.big_m_short = self.big_m_short.max(needed);
        }
    }

    fn fresh(&mut self, prefix: &str, id: usize, k: usize) -> usize {
        self.aux += 1;
        let name = format!("{prefix}_{id}_{k}_{}", self.aux);
        self.lp.add_var(name, 0.0, 1.0, false)
    }

    fn and_of(&mut self, encs: Vec<Enc>, id: usize, k: usize) -> Enc {
        if encs.contains(&Enc::Const(false)) {
            return Enc::Const(false);
        }
        let mut vars: Vec<usize> = encs
            .into_iter()
            .filter_map(|e| match e {
                Enc::Var(v) => Some(v),
                Enc::Const(_) => None,
            })
            .collect();
        vars.sort_unstable();
        vars.dedup();
        match vars.len() {
            0 => Enc::Const(true),
            1 => Enc::Var(vars[0]),
            _ => {
                let z = self.fresh("w", id, k);
                for v in vars {
                    let name = format!("and_{}", self.lp.constraints.len());
                    self.lp
                        .add_constraint(name, vec![(z, 1.0), (v, -1.0)], Sense::Le, 0.0);
                }
                Enc::Var(z)
            }
        }
    }

    fn or_of(&mut self, encs: Vec<Enc>, id: usize, k: usize) -> Enc {
        if encs.contains(&Enc::Const(true)) {
            return Enc::Const(true);
        }
        let mut vars: Vec<usize> = encs
            .into_iter()
            .filter_map(|e| match e {
                Enc::Var(v) => Some(v),
                Enc::Const(_) => None,
            })
            .collect();
        vars.sort_unstable();
        vars.dedup();
        match vars.len() {
            0 => Enc::Const(false),
            1 => Enc::Var(vars[0]),
            _ => {
                let z = self.fresh("w", id, k);
                let mut coeffs = vec![(z, 1.0)];
                coeffs.extend(vars.into_iter().map(|v| (v, -1.0)));
                let name = format!("or_{}", self.lp.constraints.len());
                self.lp.add_constraint(name, coeffs, Sense::Le, 0.0);
                Enc::Var(z)
            }
        }
    }

    fn enc(&mut self, id: usize, k: usize) -> Enc {
        if let Some(e) = self.memo.get(&(id, k)) {
            return *e;
        }
        let nnf = self.nnf;
        let e = match &nnf.nodes[id] {
            Node::True => Enc::Const(true),
            Node::False => Enc::Const(false),
            Node::Lit(p, neg) => {
                let z = self.lp.add_var(format!("z_{id}_{k}"), 0.0, 1.0, true);
                self.predicate_binaries += 1;
                self.literal_row(p, *neg, k, z);
                Enc::Var(z)
            }
            Node::And(kids) if kids.iter().all(|c| matches!(nnf.nodes[*c], Node::Lit(..))) => {
                let z = self.lp.add_var(format!("z_{id}_{k}"), 0.0, 1.0, true);
                self.predicate_binaries += 1;
                for c in kids {
                    if let Node::Lit(p, neg) = &nnf.nodes[*c] {
                        self.literal_row(p, *neg, k, z);
                    }
                }
                Enc::Var(z)
            }
            Node::And(kids) => {
                let encs = kids.iter().map(|c| self.enc(*c, k)).collect();
                self.and_of(encs, id, k)
            }
            Node::Or(kids) => {
                let encs = kids.iter().map(|c| self.enc(*c, k)).collect();
                self.or_of(encs, id, k)
            }
            Node::Always(i, c) => {
                let encs = i.iter().map(|j| self.enc(*c, k + j)).collect();
                self.and_of(encs, id, k)
            }
            Node::Eventually(i, c) => {
                let encs = i.iter().map(|j| self.enc(*c, k + j)).collect();
                self.or_of(encs, id, k)
            }
            Node::Until(l, i, r) => {
                let mut options = Vec::new();
                for kp in k + i.lo()..=k + i.hi() {
                    let mut parts = vec![self.enc(*r, kp)];
                    parts.extend((k..=kp).map(|t| self.enc(*l, t)));
                    options.push(self.and_of(parts, id, k));
                }
                self.or_of(options, id, k)
            }
            Node::Release(l, i, r) => {
                let mut musts = Vec::new();
                for kp in k + i.lo()..=k + i.hi() {
                    let mut parts = vec![self.enc(*r, kp)];
                    parts.extend((k..=kp).map(|t| self.enc(*l, t)));
                    musts.push(self.or_of(parts, id, k));
                }
                self.and_of(musts, id, k)
            }
        };
        self.memo.insert((id, k), e);
        e
    }
}

/// Builds the MILP whose feasible points are the trajectories of `sys` from `x0`
/// over `horizon` steps with admissible inputs that satisfy `phi` with margin
/// `epsilon`; the objective is `lambda * sum |u|`.
pub fn encode(
    x0: &[f64],
    horizon: usize,
    phi: &Formula,
    sys: &LinearSystem,
    params: EncodeParams,
) -> Result<MilpModel, MilpError> {
    if phi.length() > horizon {
        return Err(MilpError::HorizonTooShort {
            needed: phi.length(),
            horizon,
        });
    }
    let (n, m) = (sys.n(), sys.m());
    if x0.len() != n {
        return Err(MilpError::Dimension(format!(
            "x0 has {} entries, the system has {n} states",
            x0.len()
        )));
    }
    if phi.dim() > n {
        return Err(MilpError::Dimension(format!(
            "formula uses x{} but the system has {n} states",
            phi.dim()
        )));
    }
    let mut lp = LinearProgram::default();
    let inf = f64::INFINITY;
    let states: Vec<Vec<usize>> = (0..=horizon)
        .map(|k| {
            (0..n)
                .map(|i| {
                    let (lo, hi) = if k == 0 { (x0[i], x0[i]) } else { (-inf, inf) };
                    lp.add_var(format!("x_{k}_{}", i + 1), lo, hi, false)
                })
                .collect()
        })
        .collect();
    let inputs: Vec<Vec<usize>> = (0..horizon)
        .map(|k| {
            (0..m)
                .map(|i| lp.add_var(format!("u_{k}_{}", i + 1), sys.input_lo[i], sys.input_hi[i], false))
                .collect()
        })
        .collect();
    for k in 0..horizon {
        for i in 0..n {
            let mut coeffs = vec![(states[k + 1][i], 1.0)];
            coeffs.extend((0..n).filter(|&j| sys.a[i][j] != 0.0).map(|j| (states[k][j], -sys.a[i][j])));
            coeffs.extend((0..m).filter(|&j| sys.b[i][j] != 0.0).map(|j| (inputs[k][j], -sys.b[i][j])));
            lp.add_constraint(format!("dyn_{k}_{}", i + 1), coeffs, Sense::Eq, 0.0);
        }
    }
    if params.lambda != 0.0 {
        for (k, row) in inputs.iter().enumerate() {
            for (i, &u) in row.iter().enumerate() {
                let t = lp.add_var(format!("t_{k}_{}", i + 1), 0.0, inf, false);
                lp.objective[t] = params.lambda;
                lp.add_constraint(format!("tp_{k}_{}", i + 1), vec![(t, 1.0), (u, -1.0)], Sense::Ge, 0.0);
                lp.add_constraint(format!("tn_{k}_{}", i + 1), vec![(t, 1.0), (u, 1.0)], Sense::Ge, 0.0);
            }
        }
    }
    let mut nnf = Nnf::default();
    let root = nnf.build(phi, false);
    let mut enc = Encoder {
        nnf: &nnf,
        lp,
        params,
        states: states.clone(),
        boxes: sys.reachable_boxes(x0, horizon),
        memo: HashMap::new(),
        predicate_binaries: 0,
        aux: 0,
        big_m_short: 0.0,
    };
    match enc.enc(root, 0) {
        Enc::Const(true) => {}
        Enc::Const(false) => enc
            .lp
            .add_constraint("unsat".into(), Vec::new(), Sense::Ge, 1.0),
        Enc::Var(z) => enc.lp.vars[z].lo = 1.0,
    }
    if enc.big_m_short > 0.0 {
        log::warn!(
            "big-M {} is below {} needed to relax predicates over the reachable set",
            params.big_m,
            enc.big_m_short
        );
    }
    let predicate_binaries = enc.predicate_binaries;
    let mut model = MilpModel {
        program: enc.lp,
        horizon,
        x0: x0.to_vec(),
        system: sys.clone(),
        formula: phi.clone(),
        params,
        stats: ModelStats {
            predicate_binaries,
            ..ModelStats::default()
        },
        state_vars: states,
        input_vars: inputs,
    };
    model.refresh_stats();
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn scalar() -> LinearSystem {
        LinearSystem::single_integrator(1, 1.0)
    }

    #[test]
    fn always_counts() {
        let phi = parse_formula("G[0,1] x1 >= 0").unwrap();
        let model = encode(&[1.0], 1, &phi, &scalar(), EncodeParams::default()).unwrap();
        let names: Vec<&str> = model.program.vars.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names.iter().filter(|n| n.starts_with("x_")).count(), 2);
        assert_eq!(names.iter().filter(|n| n.starts_with("u_")).count(), 1);
        assert_eq!(model.stats.predicate_binaries, 2);
        assert_eq!(model.stats.binaries, 2);
    }

    #[test]
    fn box_region_shares_a_binary() {
        let phi = parse_formula("G[0,3] inbox(SAFETY)").unwrap();
        let sys = LinearSystem::single_integrator(2, 1.0);
        let model = encode(&[0.0, 5.0], 3, &phi, &sys, EncodeParams::default()).unwrap();
        assert_eq!(model.stats.predicate_binaries, 4);
    }

    #[test]
    fn horizon_and_dimension_errors() {
        let phi = parse_formula("F[0,5] x1 >= 0").unwrap();
        assert!(matches!(
            encode(&[0.0], 3, &phi, &scalar(), EncodeParams::default()),
            Err(MilpError::HorizonTooShort { needed: 5, horizon: 3 })
        ));
        let phi = parse_formula("x2 >= 0").unwrap();
        assert!(encode(&[0.0], 3, &phi, &scalar(), EncodeParams::default()).is_err());
        assert!(encode(&[0.0, 1.0], 3, &Formula::True, &scalar(), EncodeParams::default()).is_err());
    }

    #[test]
    fn constants_fold() {
        let model = encode(&[0.0], 2, &Formula::True, &scalar(), EncodeParams::default()).unwrap();
        assert_eq!(model.stats.binaries, 0);
        let model = encode(&[0.0], 2, &Formula::falsum(), &scalar(), EncodeParams::default()).unwrap();
        assert!(model.program.constraints.iter().any(|c| c.name == "unsat"));
    }

    #[test]
    fn negation_normal_form() {
        let mut nnf = Nnf::default();
        let phi = parse_formula("!(G[0,2] x1 >= 0 & x1 >= 0 U[0,1] x1 >= 1)").unwrap();
        let root = nnf.build(&phi, false);
        let Node::Or(kids) = &nnf.nodes[root] else {
            panic!("negated conjunction must become a disjunction")
        };
        assert!(matches!(nnf.nodes[kids[0]], Node::Eventually(..)));
        assert!(matches!(nnf.nodes[kids[1]], Node::Release(..)));
    }
}
