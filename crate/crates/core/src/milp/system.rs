use serde::{Deserialize, Serialize};

use super::MilpError;

/// `x_{k+1} = A x_k + B u_k` with `input_lo <= u_k <= input_hi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub input_lo: Vec<f64>,
    pub input_hi: Vec<f64>,
}

impl LinearSystem {
    pub fn new(
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
        input_lo: Vec<f64>,
        input_hi: Vec<f64>,
    ) -> Result<Self, MilpError> {
        let n = a.len();
        if n == 0 || a.iter().any(|r| r.len() != n) {
            return Err(MilpError::Dimension("A must be a non-empty square matrix".into()));
        }
        if b.len() != n {
            return Err(MilpError::Dimension(format!("B has {} rows, A has {n}", b.len())));
        }
        let m = b[0].len();
        if m == 0 || b.iter().any(|r| r.len() != m) {
            return Err(MilpError::Dimension("B rows must share a non-zero length".into()));
        }
        if input_lo.len() != m || input_hi.len() != m {
            return Err(MilpError::Dimension(format!(
                "input bounds have lengths {} and {}, B has {m} columns",
                input_lo.len(),
                input_hi.len()
            )));
        }
        if input_lo.iter().zip(&input_hi).any(|(l, h)| l > h) {
            return Err(MilpError::Dimension("input_lo exceeds input_hi".into()));
        }
        Ok(Self {
            a,
            b,
            input_lo,
            input_hi,
        })
    }

    /// `x_{k+1} = x_k + u_k` in `n` dimensions with `|u_i| <= umax`.
    pub fn single_integrator(n: usize, umax: f64) -> Self {
        let eye: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
            .collect();
        Self::new(eye.clone(), eye, vec![-umax; n], vec![umax; n]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn m(&self) -> usize {
        self.b[0].len()
    }

    pub fn step(&self, x: &[f64], u: &[f64]) -> Vec<f64> {
        (0..self.n())
            .map(|i| {
                let ax: f64 = self.a[i].iter().zip(x).map(|(a, v)| a * v).sum();
                let bu: f64 = self.b[i].iter().zip(u).map(|(b, v)| b * v).sum();
                ax + bu
            })
            .collect()
    }

    /// States `x_0 .. x_L` driven by `inputs` from `x0`.
    pub fn simulate(&self, x0: &[f64], inputs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut xs = vec![x0.to_vec()];
        for u in inputs {
            let next = self.step(xs.last().unwrap(), u);
            xs.push(next);
        }
        xs
    }

    /// Largest violation of the dynamics by a state/input sequence.
    pub fn dynamics_residual(&self, states: &[Vec<f64>], inputs: &[Vec<f64>]) -> f64 {
        inputs
            .iter()
            .enumerate()
            .map(|(k, u)| {
                self.step(&states[k], u)
                    .iter()
                    .zip(&states[k + 1])
                    .map(|(p, x)| (p - x).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn inputs_admissible(&self, inputs: &[Vec<f64>], tol: f64) -> bool {
        inputs.iter().all(|u| {
            u.iter()
                .zip(self.input_lo.iter().zip(&self.input_hi))
                .all(|(v, (lo, hi))| *v >= lo - tol && *v <= hi + tol)
        })
    }

    /// Interval hull of the states reachable at each step from `x0`.
    pub fn reachable_boxes(&self, x0: &[f64], horizon: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
        let mut boxes = vec![(x0.to_vec(), x0.to_vec())];
        for _ in 0..horizon {
            let (lo, hi) = boxes.last().unwrap();
            let mut nlo = vec![0.0; self.n()];
            let mut nhi = vec![0.0; self.n()];
            for i in 0..self.n() {
                for j in 0..self.n() {
                    let (p, q) = (self.a[i][j] * lo[j], self.a[i][j] * hi[j]);
                    nlo[i] += p.min(q);
                    nhi[i] += p.max(q);
                }
                for j in 0..self.m() {
                    let (p, q) = (self.b[i][j] * self.input_lo[j], self.b[i][j] * self.input_hi[j]);
                    nlo[i] += p.min(q);
                    nhi[i] += p.max(q);
                }
            }
            boxes.push((nlo, nhi));
        }
        boxes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_shapes() {
        assert!(LinearSystem::new(vec![vec![1.0]], vec![vec![1.0, 0.0]], vec![-1.0], vec![1.0]).is_err());
        assert!(LinearSystem::new(vec![vec![1.0]], vec![vec![1.0]], vec![1.0], vec![-1.0]).is_err());
        assert!(LinearSystem::new(vec![vec![1.0, 0.0]], vec![vec![1.0]], vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn simulate_and_reach() {
        let s = LinearSystem::single_integrator(2, 1.0);
        let xs = s.simulate(&[0.0, 5.0], &[vec![1.0, -1.0], vec![0.5, 0.0]]);
        assert_eq!(xs, vec![vec![0.0, 5.0], vec![1.0, 4.0], vec![1.5, 4.0]]);
        assert_eq!(s.dynamics_residual(&xs, &[vec![1.0, -1.0], vec![0.5, 0.0]]), 0.0);
        let boxes = s.reachable_boxes(&[0.0, 5.0], 2);
        assert_eq!(boxes[2], (vec![-2.0, 3.0], vec![2.0, 7.0]));
    }
}
