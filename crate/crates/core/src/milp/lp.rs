//! Bounded-variable revised simplex with an explicit dense basis inverse.
//!
//! Every row `i` of `A x (sense) rhs` becomes `a_i . x - s_i = 0` with the row
//! bounds moved onto the logical `s_i`, plus an artificial column used only to
//! find a first feasible basis. Nonbasic columns always sit on a bound (free
//! columns at 0), so both primal and dual simplex iterations work directly on the
//! bounds, and branch-and-bound can re-solve after tightening bounds with the dual
//! simplex from the current basis.

use super::program::{LinearProgram, Sense};

const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
/// Iterations without objective progress before switching to Bland's rule.
const STALL_LIMIT: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
    /// Nonbasic free column held at 0.
    Zero,
}

pub(crate) struct LpSolver {
    m: usize,
    n: usize,
    cols: Vec<Vec<(usize, f64)>>,
    art_sign: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    pivots_since_refactor: usize,
    refactor_every: usize,
    pub(crate) iterations: usize,
    call_start: usize,
    iteration_limit: usize,
}

impl LpSolver {
    pub(crate) fn new(lp: &LinearProgram) -> Self {
        let m = lp.constraints.len();
        let n = lp.vars.len();
        let mut cols = vec![Vec::new(); n];
        for (i, c) in lp.constraints.iter().enumerate() {
            for &(j, a) in &c.coeffs {
                if a != 0.0 {
                    cols[j].push((i, a));
                }
            }
        }
        // Merge repeated entries of the same variable in one row.
        for col in &mut cols {
            col.sort_by_key(|e| e.0);
            col.dedup_by(|b, a| {
                if a.0 == b.0 {
                    a.1 += b.1;
                    true
                } else {
                    false
                }
            });
        }
        let total = n + 2 * m;
        let mut lo = vec![0.0; total];
        let mut hi = vec![0.0; total];
        for (j, v) in lp.vars.iter().enumerate() {
            lo[j] = v.lo;
            hi[j] = v.hi;
        }
        for (i, c) in lp.constraints.iter().enumerate() {
            let (l, h) = match c.sense {
                Sense::Le => (f64::NEG_INFINITY, c.rhs),
                Sense::Ge => (c.rhs, f64::INFINITY),
                Sense::Eq => (c.rhs, c.rhs),
            };
            lo[n + i] = l;
            hi[n + i] = h;
        }
        let mut cost = vec![0.0; total];
        cost[..n].copy_from_slice(&lp.objective);
        Self {
            m,
            n,
            cols,
            art_sign: vec![1.0; m],
            lo,
            hi,
            cost,
            x: vec![0.0; total],
            state: vec![State::Lower; total],
            basis: Vec::new(),
            binv: Vec::new(),
            pivots_since_refactor: 0,
            refactor_every: 100.max(m / 2),
            iterations: 0,
            call_start: 0,
            iteration_limit: 50_000 + 50 * (n + 2 * m),
        }
    }

    fn total(&self) -> usize {
        self.n + 2 * self.m
    }

    /// Values of the structural variables.
    pub(crate) fn values(&self) -> &[f64] {
        &self.x[..self.n]
    }

    pub(crate) fn objective(&self) -> f64 {
        (0..self.n).map(|j| self.cost[j] * self.x[j]).sum()
    }

    fn for_col(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        if j < self.n {
            for &(i, a) in &self.cols[j] {
                f(i, a);
            }
        } else if j < self.n + self.m {
            f(j - self.n, -1.0);
        } else {
            let i = j - self.n - self.m;
            f(i, self.art_sign[i]);
        }
    }

    fn dot_row(&self, row: &[f64], j: usize) -> f64 {
        let mut s = 0.0;
        self.for_col(j, |i, a| s += row[i] * a);
        s
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        self.for_col(j, |i, a| {
            for (r, out) in alpha.iter_mut().enumerate() {
                *out += self.binv[r * m + i] * a;
            }
        });
        alpha
    }

    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (r, &b) in self.basis.iter().enumerate() {
            let c = cost[b];
            if c != 0.0 {
                for (yi, bi) in y.iter_mut().zip(&self.binv[r * m..(r + 1) * m]) {
                    *yi += c * bi;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, cost: &[f64], y: &[f64], j: usize) -> f64 {
        cost[j] - self.dot_row(y, j)
    }

    fn fixed(&self, j: usize) -> bool {
        self.lo[j] == self.hi[j]
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[r];
        let row_r: Vec<f64> = self.binv[r * m..(r + 1) * m].iter().map(|v| v / piv).collect();
        for (i, &a) in alpha.iter().enumerate() {
            if i == r || a == 0.0 {
                continue;
            }
            let row = &mut self.binv[i * m..(i + 1) * m];
            for (v, rr) in row.iter_mut().zip(&row_r) {
                *v -= a * rr;
            }
        }
        self.binv[r * m..(r + 1) * m].copy_from_slice(&row_r);
        self.state[q] = State::Basic;
        self.basis[r] = q;
        self.pivots_since_refactor += 1;
        self.iterations += 1;
    }

    /// Rebuilds the basis inverse from scratch and recomputes basic values.
    fn refactor(&mut self) -> Result<(), String> {
        let m = self.m;
        let mut b = vec![0.0; m * m];
        for (r, &j) in self.basis.iter().enumerate() {
            let mut col = vec![0.0; m];
            self.for_col(j, |i, a| col[i] = a);
            for (i, v) in col.into_iter().enumerate() {
                b[i * m + r] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let p = (c..m)
                .max_by(|&a, &bb| b[a * m + c].abs().total_cmp(&b[bb * m + c].abs()))
                .unwrap();
            let pv = b[p * m + c];
            if pv.abs() < 1e-11 {
                return Err(format!("singular basis at column {c} (pivot {pv:e})"));
            }
            if p != c {
                for k in 0..m {
                    b.swap(p * m + k, c * m + k);
                    inv.swap(p * m + k, c * m + k);
                }
            }
            for k in 0..m {
                b[c * m + k] /= pv;
                inv[c * m + k] /= pv;
            }
            for i in 0..m {
                if i == c {
                    continue;
                }
                let f = b[i * m + c];
                if f == 0.0 {
                    continue;
                }
                for k in 0..m {
                    b[i * m + k] -= f * b[c * m + k];
                    inv[i * m + k] -= f * inv[c * m + k];
                }
            }
        }
        self.binv = inv;
        self.pivots_since_refactor = 0;
        self.recompute_basics();
        Ok(())
    }

    fn maybe_refactor(&mut self) -> Result<(), String> {
        if self.pivots_since_refactor >= self.refactor_every {
            self.refactor()?;
        }
        Ok(())
    }

    /// `x_B = -B^{-1} N x_N` from the row equations `sum_j a_j x_j = 0`.
    fn recompute_basics(&mut self) {
        let m = self.m;
        let mut rhs = vec![0.0; m];
        for j in 0..self.total() {
            if self.state[j] != State::Basic && self.x[j] != 0.0 {
                let v = self.x[j];
                self.for_col(j, |i, a| rhs[i] -= a * v);
            }
        }
        for r in 0..m {
            let v: f64 = self.binv[r * m..(r + 1) * m].iter().zip(&rhs).map(|(b, c)| b * c).sum();
            self.x[self.basis[r]] = v;
        }
    }

    fn infeasibility(&self, j: usize) -> f64 {
        (self.lo[j] - self.x[j]).max(self.x[j] - self.hi[j]).max(0.0)
    }

    fn primal_feasible(&self) -> bool {
        self.basis.iter().all(|&j| self.infeasibility(j) <= PRIMAL_TOL)
    }

    fn place_nonbasic(&mut self, j: usize, prefer_upper: bool) {
        let (l, h) = (self.lo[j], self.hi[j]);
        let (state, value) = if l.is_finite() && (!prefer_upper || !h.is_finite()) {
            (State::Lower, l)
        } else if h.is_finite() {
            (State::Upper, h)
        } else {
            (State::Zero, 0.0)
        };
        self.state[j] = state;
        self.x[j] = value;
    }

    /// Solves from the slack basis: phase 1 on artificials, then phase 2.
    pub(crate) fn solve(&mut self) -> Result<LpStatus, String> {
        self.call_start = self.iterations;
        let (n, m) = (self.n, self.m);
        self.basis = (n..n + m).collect();
        self.binv = vec![0.0; m * m];
        for i in 0..m {
            self.binv[i * m + i] = -1.0;
        }
        self.pivots_since_refactor = 0;
        for j in 0..n {
            self.place_nonbasic(j, false);
        }
        let mut activity = vec![0.0; m];
        for j in 0..n {
            let v = self.x[j];
            if v != 0.0 {
                for &(i, a) in &self.cols[j] {
                    activity[i] += a * v;
                }
            }
        }
        let mut phase1_cost = vec![0.0; self.total()];
        let mut any_artificial = false;
        for (i, &r) in activity.iter().enumerate() {
            let (s, art) = (n + i, n + m + i);
            self.lo[art] = 0.0;
            self.hi[art] = 0.0;
            self.x[art] = 0.0;
            self.state[art] = State::Lower;
            if r >= self.lo[s] - PRIMAL_TOL && r <= self.hi[s] + PRIMAL_TOL {
                self.state[s] = State::Basic;
                self.x[s] = r;
                continue;
            }
            // The logical leaves at its violated bound; the artificial absorbs the gap.
            let bound = if r < self.lo[s] { self.lo[s] } else { self.hi[s] };
            self.state[s] = if r < self.lo[s] { State::Lower } else { State::Upper };
            self.x[s] = bound;
            let sign = if bound - r >= 0.0 { 1.0 } else { -1.0 };
            self.art_sign[i] = sign;
            self.hi[art] = f64::INFINITY;
            self.x[art] = (bound - r).abs();
            self.state[art] = State::Basic;
            self.basis[i] = art;
            self.binv[i * m + i] = sign;
            phase1_cost[art] = 1.0;
            any_artificial = true;
        }
        if any_artificial {
            let status = self.primal(&phase1_cost)?;
            debug_assert_ne!(status, LpStatus::Unbounded);
            let residual: f64 = (n + m..n + 2 * m).map(|j| self.x[j].max(0.0)).sum();
            for j in n + m..n + 2 * m {
                self.hi[j] = 0.0;
                if self.state[j] != State::Basic {
                    self.state[j] = State::Lower;
                    self.x[j] = 0.0;
                }
            }
            if residual > PRIMAL_TOL * (1.0 + m as f64).sqrt() {
                return Ok(LpStatus::Infeasible);
            }
            self.refactor()?;
        }
        let cost = self.cost.clone();
        self.primal(&cost)
    }

    /// Primal simplex from a primal feasible basis.
    fn primal(&mut self, cost: &[f64]) -> Result<LpStatus, String> {
        let mut best = f64::INFINITY;
        let mut stall = 0usize;
        loop {
            if self.iterations - self.call_start > self.iteration_limit {
                return Err("simplex iteration limit reached".into());
            }
            self.maybe_refactor()?;
            let y = self.duals(cost);
            let bland = stall >= STALL_LIMIT;
            let mut entering: Option<(usize, f64, f64)> = None;
            for j in 0..self.total() {
                if self.state[j] == State::Basic || self.fixed(j) {
                    continue;
                }
                let d = self.reduced_cost(cost, &y, j);
                let dir = match self.state[j] {
                    State::Lower if d < -DUAL_TOL => 1.0,
                    State::Upper if d > DUAL_TOL => -1.0,
                    State::Zero if d.abs() > DUAL_TOL => -d.signum(),
                    _ => continue,
                };
                if bland {
                    entering = Some((j, dir, d));
                    break;
                }
                if entering.is_none_or(|(_, _, bd)| d.abs() > bd.abs()) {
                    entering = Some((j, dir, d));
                }
            }
            let Some((q, dir, _)) = entering else {
                return Ok(LpStatus::Optimal);
            };
            let alpha = self.ftran(q);
            // Harris two-pass ratio test on x_B - dir * t * alpha.
            let mut theta_max = f64::INFINITY;
            for (i, &a) in alpha.iter().enumerate() {
                if a.abs() <= PIVOT_TOL {
                    continue;
                }
                let b = self.basis[i];
                let delta = -dir * a;
                let lim = if delta < 0.0 && self.lo[b].is_finite() {
                    (self.x[b] - self.lo[b] + PRIMAL_TOL) / -delta
                } else if delta > 0.0 && self.hi[b].is_finite() {
                    (self.hi[b] - self.x[b] + PRIMAL_TOL) / delta
                } else {
                    continue;
                };
                theta_max = theta_max.min(lim);
            }
            let flip = self.hi[q] - self.lo[q];
            let mut leave: Option<(usize, f64)> = None;
            if theta_max.is_finite() {
                let mut best_a = 0.0;
                for (i, &a) in alpha.iter().enumerate() {
                    if a.abs() <= PIVOT_TOL {
                        continue;
                    }
                    let b = self.basis[i];
                    let delta = -dir * a;
                    let ratio = if delta < 0.0 && self.lo[b].is_finite() {
                        (self.x[b] - self.lo[b]) / -delta
                    } else if delta > 0.0 && self.hi[b].is_finite() {
                        (self.hi[b] - self.x[b]) / delta
                    } else {
                        continue;
                    };
                    if ratio <= theta_max && a.abs() > best_a {
                        best_a = a.abs();
                        leave = Some((i, ratio.max(0.0)));
                    }
                }
            }
            let t = match leave {
                Some((_, t)) if t < flip => t,
                _ if flip.is_finite() => {
                    // Bound flip: the entering column runs to its other bound.
                    for (i, &a) in alpha.iter().enumerate() {
                        let b = self.basis[i];
                        self.x[b] -= dir * flip * a;
                    }
                    self.x[q] = if dir > 0.0 { self.hi[q] } else { self.lo[q] };
                    self.state[q] = if dir > 0.0 { State::Upper } else { State::Lower };
                    self.iterations += 1;
                    self.track_progress(cost, &mut best, &mut stall);
                    continue;
                }
                None => return Ok(LpStatus::Unbounded),
                Some((_, t)) => t,
            };
            let (r, _) = leave.unwrap();
            for (i, &a) in alpha.iter().enumerate() {
                let b = self.basis[i];
                self.x[b] -= dir * t * a;
            }
            self.x[q] += dir * t;
            let out = self.basis[r];
            let delta = -dir * alpha[r];
            if delta < 0.0 {
                self.x[out] = self.lo[out];
                self.state[out] = State::Lower;
            } else {
                self.x[out] = self.hi[out];
                self.state[out] = State::Upper;
            }
            self.pivot(r, q, &alpha);
            self.track_progress(cost, &mut best, &mut stall);
        }
    }

    fn track_progress(&self, cost: &[f64], best: &mut f64, stall: &mut usize) {
        let obj: f64 = (0..self.total())
            .filter(|&j| cost[j] != 0.0)
            .map(|j| cost[j] * self.x[j])
            .sum();
        if obj < *best - 1e-12 * (1.0 + best.abs().min(1e12)) {
            *best = obj;
            *stall = 0;
        } else {
            *stall += 1;
        }
    }

    /// Dual simplex from a dual feasible basis.
    fn dual(&mut self) -> Result<LpStatus, String> {
        let cost = self.cost.clone();
        let m = self.m;
        loop {
            if self.iterations - self.call_start > self.iteration_limit {
                return Err("dual simplex iteration limit reached".into());
            }
            self.maybe_refactor()?;
            let mut leave: Option<(usize, f64)> = None;
            for (r, &b) in self.basis.iter().enumerate() {
                let inf = self.infeasibility(b);
                if inf > PRIMAL_TOL && leave.is_none_or(|(_, v)| inf > v) {
                    leave = Some((r, inf));
                }
            }
            let Some((r, _)) = leave else {
                return Ok(LpStatus::Optimal);
            };
            let out = self.basis[r];
            let below = self.x[out] < self.lo[out];
            let rho: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
            let y = self.duals(&cost);
            // Harris two-pass dual ratio test.
            let mut cands: Vec<(usize, f64, f64)> = Vec::new();
            let mut theta_max = f64::INFINITY;
            for j in 0..self.total() {
                if self.state[j] == State::Basic || self.fixed(j) {
                    continue;
                }
                let a = self.dot_row(&rho, j);
                if a.abs() <= PIVOT_TOL {
                    continue;
                }
                let ok = match (self.state[j], below) {
                    (State::Lower, true) => a < 0.0,
                    (State::Upper, true) => a > 0.0,
                    (State::Lower, false) => a > 0.0,
                    (State::Upper, false) => a < 0.0,
                    (State::Zero, _) => true,
                    (State::Basic, _) => unreachable!(),
                };
                if !ok {
                    continue;
                }
                let d = self.reduced_cost(&cost, &y, j);
                theta_max = theta_max.min((d.abs() + DUAL_TOL) / a.abs());
                cands.push((j, a, d));
            }
            let Some(&(q, _, _)) = cands
                .iter()
                .filter(|(_, a, d)| d.abs() / a.abs() <= theta_max)
                .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            else {
                return Ok(LpStatus::Infeasible);
            };
            let alpha = self.ftran(q);
            if alpha[r].abs() <= PIVOT_TOL {
                self.refactor()?;
                continue;
            }
            let target = if below { self.lo[out] } else { self.hi[out] };
            let step = (self.x[out] - target) / alpha[r];
            for (i, &a) in alpha.iter().enumerate() {
                let b = self.basis[i];
                self.x[b] -= step * a;
            }
            self.x[q] += step;
            self.x[out] = target;
            self.state[out] = if below { State::Lower } else { State::Upper };
            self.pivot(r, q, &alpha);
        }
    }

    /// Replaces the structural bounds and re-optimizes from the current basis.
    pub(crate) fn resolve(&mut self, lo: &[f64], hi: &[f64]) -> Result<LpStatus, String> {
        if self.basis.is_empty() {
            self.lo[..self.n].copy_from_slice(lo);
            self.hi[..self.n].copy_from_slice(hi);
            return self.solve();
        }
        self.lo[..self.n].copy_from_slice(lo);
        self.hi[..self.n].copy_from_slice(hi);
        self.call_start = self.iterations;
        let cost = self.cost.clone();
        let y = self.duals(&cost);
        let mut dual_ok = true;
        for j in 0..self.total() {
            if self.state[j] == State::Basic {
                continue;
            }
            let d = self.reduced_cost(&cost, &y, j);
            let prefer_upper = d < 0.0 || (d == 0.0 && self.state[j] == State::Upper);
            self.place_nonbasic(j, prefer_upper);
            let ok = match self.state[j] {
                _ if self.fixed(j) => true,
                State::Lower => d >= -DUAL_TOL,
                State::Upper => d <= DUAL_TOL,
                State::Zero => d.abs() <= DUAL_TOL,
                State::Basic => true,
            };
            dual_ok &= ok;
        }
        self.recompute_basics();
        if dual_ok {
            match self.dual()? {
                LpStatus::Infeasible => return Ok(LpStatus::Infeasible),
                _ => return self.primal(&cost),
            }
        }
        if self.primal_feasible() {
            return self.primal(&cost);
        }
        self.solve()
    }

    /// Largest residual of the row equations at the current point.
    #[cfg(test)]
    fn residual(&self) -> f64 {
        let mut r = vec![0.0; self.m];
        for j in 0..self.total() {
            let v = self.x[j];
            self.for_col(j, |i, a| r[i] += a * v);
        }
        r.iter().fold(0.0, |a, b| a.max(b.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(vars: &[(f64, f64)], rows: &[(&[f64], Sense, f64)], obj: &[f64]) -> LinearProgram {
        let mut p = LinearProgram::default();
        for (j, &(l, h)) in vars.iter().enumerate() {
            p.add_var(format!("v{j}"), l, h, false);
        }
        for (i, (coeffs, sense, rhs)) in rows.iter().enumerate() {
            let c = coeffs.iter().enumerate().map(|(j, a)| (j, *a)).collect();
            p.add_constraint(format!("r{i}"), c, *sense, *rhs);
        }
        p.objective = obj.to_vec();
        p
    }

    #[test]
    fn small_optimum() {
        // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0  -> (1.6, 1.2)
        let p = lp(
            &[(0.0, f64::INFINITY), (0.0, f64::INFINITY)],
            &[(&[1.0, 2.0], Sense::Le, 4.0), (&[3.0, 1.0], Sense::Le, 6.0)],
            &[-1.0, -1.0],
        );
        let mut s = LpSolver::new(&p);
        assert_eq!(s.solve().unwrap(), LpStatus::Optimal);
        assert!((s.values()[0] - 1.6).abs() < 1e-9);
        assert!((s.values()[1] - 1.2).abs() < 1e-9);
        assert!(s.residual() < 1e-9);
    }

    #[test]
    fn needs_phase_one() {
        // min x + y  s.t. x + y >= 2, x - y = 1, free vars -> (1.5, 0.5)
        let inf = f64::INFINITY;
        let p = lp(
            &[(-inf, inf), (-inf, inf)],
            &[(&[1.0, 1.0], Sense::Ge, 2.0), (&[1.0, -1.0], Sense::Eq, 1.0)],
            &[1.0, 1.0],
        );
        let mut s = LpSolver::new(&p);
        assert_eq!(s.solve().unwrap(), LpStatus::Optimal);
        assert!((s.values()[0] - 1.5).abs() < 1e-9);
        assert!((s.values()[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let p = lp(&[(0.0, 1.0)], &[(&[1.0], Sense::Ge, 2.0)], &[0.0]);
        assert_eq!(LpSolver::new(&p).solve().unwrap(), LpStatus::Infeasible);
        let p = lp(&[(0.0, f64::INFINITY)], &[(&[1.0], Sense::Ge, 2.0)], &[-1.0]);
        assert_eq!(LpSolver::new(&p).solve().unwrap(), LpStatus::Unbounded);
    }

    #[test]
    fn bound_change_resolve() {
        // min -x - y s.t. x + y <= 1.5 with 0 <= x, y <= 1.
        let p = lp(&[(0.0, 1.0), (0.0, 1.0)], &[(&[1.0, 1.0], Sense::Le, 1.5)], &[-1.0, -1.0]);
        let mut s = LpSolver::new(&p);
        assert_eq!(s.solve().unwrap(), LpStatus::Optimal);
        assert!((s.objective() + 1.5).abs() < 1e-9);
        assert_eq!(s.resolve(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), LpStatus::Optimal);
        assert!((s.objective() + 1.0).abs() < 1e-9);
        assert_eq!(s.resolve(&[1.0, 1.0], &[1.0, 1.0]).unwrap(), LpStatus::Infeasible);
        assert_eq!(s.resolve(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), LpStatus::Optimal);
        assert!((s.objective() + 1.5).abs() < 1e-9);
    }
}
