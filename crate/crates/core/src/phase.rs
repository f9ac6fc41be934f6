//! Canonical phase-space state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `(q, p)` of the canonical phase space `R^N x R^N`.
///
/// Systems built on the coalgebra need `N >= 2`; the one-site realization
/// (`N = 1`) is still representable so the Casimir of a single site can be
/// evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    q: Vec<f64>,
    p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                found: p.len(),
            });
        }
        if q.is_empty() {
            return Err(Error::Domain("phase point must have at least one degree of freedom".into()));
        }
        if q.iter().chain(p.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("phase point entries must be finite".into()));
        }
        Ok(Self { q, p })
    }

    /// Builds a point from a flat `[q_1..q_N, p_1..p_N]` slice.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: flat.len() + 1,
                found: flat.len(),
            });
        }
        let n = flat.len() / 2;
        Self::new(flat[..n].to_vec(), flat[n..].to_vec())
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.dim());
        v.extend_from_slice(&self.q);
        v.extend_from_slice(&self.p);
        v
    }

    /// Euclidean distance in `R^{2N}`.
    pub fn distance(&self, other: &PhasePoint) -> f64 {
        self.q
            .iter()
            .zip(&other.q)
            .chain(self.p.iter().zip(&other.p))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Phase-space gradient `(dF/dq, dF/dp)` of a scalar function.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGradient {
    pub dq: Vec<f64>,
    pub dp: Vec<f64>,
}

impl PhaseGradient {
    pub fn zeros(n: usize) -> Self {
        Self {
            dq: vec![0.0; n],
            dp: vec![0.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.dq.len()
    }

    /// The gradient as one row of length `2N`, positions first.
    pub fn to_row(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.dim());
        v.extend_from_slice(&self.dq);
        v.extend_from_slice(&self.dp);
        v
    }

    pub fn norm(&self) -> f64 {
        self.dq
            .iter()
            .chain(&self.dp)
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }
}
