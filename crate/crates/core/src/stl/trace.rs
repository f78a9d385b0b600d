use serde::{Deserialize, Serialize};

use super::StlError;

/// Finite discrete-time signal `x_0 .. x_L` with samples of uniform dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    samples: Vec<Vec<f64>>,
}

impl Trace {
    pub fn new(samples: Vec<Vec<f64>>) -> Result<Self, StlError> {
        let Some(first) = samples.first() else {
            return Err(StlError::EmptyTrace);
        };
        let dim = first.len();
        if let Some(k) = samples.iter().position(|s| s.len() != dim) {
            return Err(StlError::RaggedTrace {
                step: k,
                expected: dim,
                found: samples[k].len(),
            });
        }
        Ok(Self { samples })
    }

    /// One-dimensional trace from scalar samples.
    pub fn scalar(values: &[f64]) -> Result<Self, StlError> {
        Self::new(values.iter().map(|v| vec![*v]).collect())
    }

    /// Last time index `L`.
    pub fn horizon(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.samples[0].len()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample(&self, k: usize) -> &[f64] {
        &self.samples[k]
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    /// The segment `x_[k1, k2]`, re-indexed from 0.
    pub fn segment(&self, k1: usize, k2: usize) -> Result<Trace, StlError> {
        if k1 > k2 || k2 > self.horizon() {
            return Err(StlError::SegmentOutOfRange {
                from: k1,
                to: k2,
                horizon: self.horizon(),
            });
        }
        Ok(Trace {
            samples: self.samples[k1..=k2].to_vec(),
        })
    }

    /// Appends `other` whose first sample must equal this trace's last sample.
    pub fn concat(&mut self, other: &Trace) -> Result<(), StlError> {
        if other.dim() != self.dim() {
            return Err(StlError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if other.samples[0] != *self.samples.last().unwrap() {
            return Err(StlError::StitchMismatch);
        }
        self.samples.extend_from_slice(&other.samples[1..]);
        Ok(())
    }
}
