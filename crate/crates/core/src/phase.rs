use serde::Serialize;

use crate::error::{Error, Result};

/// A point `(x, p)` of the 2N-dimensional phase space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if x.len() != p.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: p.len() });
        }
        Ok(PhasePoint { x, p })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Flattened `(x_1..x_N, p_1..p_N)`.
    pub fn to_vec(&self) -> Vec<f64> {
        self.x.iter().chain(&self.p).copied().collect()
    }

    pub fn from_slice(z: &[f64]) -> Self {
        let n = z.len() / 2;
        PhasePoint { x: z[..n].to_vec(), p: z[n..2 * n].to_vec() }
    }

    pub fn dot_xp(&self) -> f64 {
        self.x.iter().zip(&self.p).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq_x(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum()
    }

    pub fn norm_sq_p(&self) -> f64 {
        self.p.iter().map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.x.iter().chain(&self.p).fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.p).all(|v| v.is_finite())
    }
}
