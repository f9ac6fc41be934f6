//! Poisson brackets, involution tables and rank certificates.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::integrals::IntegralSet;
use crate::observable::ConservedQuantity;
use crate::phase::{PhaseGradient, PhasePoint};
use crate::svd::{numerical_rank, singular_values};

pub const DEFAULT_BRACKET_TOL: f64 = 1e-9;
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// `{f, g} = sum_i (df/dq_i dg/dp_i - dg/dq_i df/dp_i)` from gradients.
pub fn bracket_of_gradients(f: &PhaseGradient, g: &PhaseGradient) -> f64 {
    f.dq.iter()
        .zip(&f.dp)
        .zip(g.dq.iter().zip(&g.dp))
        .map(|((fq, fp), (gq, gp))| fq * gp - gq * fp)
        .sum()
}

pub fn poisson_bracket(f: &ConservedQuantity, g: &ConservedQuantity, x: &PhasePoint) -> Result<f64> {
    Ok(bracket_of_gradients(&f.gradient(x)?, &g.gradient(x)?))
}

/// Raw bracket value and the value scaled by `1 + |grad f| |grad g|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BracketResidual {
    pub raw: f64,
    pub normalized: f64,
}

pub fn bracket_residual(f: &ConservedQuantity, g: &ConservedQuantity, x: &PhasePoint) -> Result<BracketResidual> {
    let (gf, gg) = (f.gradient(x)?, g.gradient(x)?);
    let raw = bracket_of_gradients(&gf, &gg);
    Ok(BracketResidual {
        raw,
        normalized: raw.abs() / (1.0 + gf.norm() * gg.norm()),
    })
}

/// Central-difference gradient with step `1e-6 max(1, |x_i|)`, an
/// independent check on the analytic gradients.
pub fn finite_difference_gradient(f: &ConservedQuantity, x: &PhasePoint) -> Result<PhaseGradient> {
    let base = x.to_flat();
    let n = x.dim();
    let mut out = vec![0.0; 2 * n];
    let mut probe = base.clone();
    for (i, slot) in out.iter_mut().enumerate() {
        let h = 1e-6 * base[i].abs().max(1.0);
        probe[i] = base[i] + h;
        let up = f.value(&PhasePoint::from_flat(&probe)?)?;
        probe[i] = base[i] - h;
        let down = f.value(&PhasePoint::from_flat(&probe)?)?;
        probe[i] = base[i];
        *slot = (up - down) / (2.0 * h);
    }
    let dp = out.split_off(n);
    Ok(PhaseGradient { dq: out, dp })
}

/// Largest residual of one pair over the samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairResidual {
    pub first: String,
    pub second: String,
    pub max_raw: f64,
    pub max_normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketResidualTable {
    pub pairs: Vec<PairResidual>,
    pub samples: usize,
    pub tolerance: f64,
}

impl BracketResidualTable {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.max_normalized < self.tolerance)
    }

    pub fn max_normalized(&self) -> f64 {
        self.pairs.iter().map(|p| p.max_normalized).fold(0.0, f64::max)
    }

    /// Entry for the unordered pair `(a, b)`.
    pub fn get(&self, a: &str, b: &str) -> Option<&PairResidual> {
        self.pairs
            .iter()
            .find(|p| (p.first == a && p.second == b) || (p.first == b && p.second == a))
    }
}

/// Residual table for explicit pairs at explicit points. Points are
/// evaluated in parallel and reduced in a fixed order.
pub fn bracket_table(
    pairs: &[(ConservedQuantity, ConservedQuantity)],
    points: &[PhasePoint],
    tolerance: f64,
) -> Result<BracketResidualTable> {
    if points.is_empty() {
        return Err(Error::Sampling("at least one sample point is required".into()));
    }
    let per_point: Vec<Vec<BracketResidual>> = points
        .par_iter()
        .map(|x| pairs.iter().map(|(f, g)| bracket_residual(f, g, x)).collect())
        .collect::<Result<_>>()?;
    let pairs = pairs
        .iter()
        .enumerate()
        .map(|(k, (f, g))| PairResidual {
            first: f.name().to_string(),
            second: g.name().to_string(),
            max_raw: per_point.iter().map(|r| r[k].raw.abs()).fold(0.0, f64::max),
            max_normalized: per_point.iter().map(|r| r[k].normalized).fold(0.0, f64::max),
        })
        .collect();
    Ok(BracketResidualTable {
        pairs,
        samples: points.len(),
        tolerance,
    })
}

/// Pairs asserted by the involution structure: each family against `H` and
/// within itself. Left family: `C^(2..N)`; right family: `C_(2..N-1)` and
/// `C^(N)`.
pub fn involution_pairs(spec: &HamiltonianSpec, set: &IntegralSet) -> Vec<(ConservedQuantity, ConservedQuantity)> {
    let h = spec.energy();
    let mut pairs = Vec::new();
    for family in [set.left_family(), set.right_family()] {
        for (i, a) in family.iter().enumerate() {
            if !pairs.iter().any(|(x, y): &(ConservedQuantity, ConservedQuantity)| {
                x.name() == h.name() && y.name() == a.name()
            }) {
                pairs.push((h.clone(), a.clone()));
            }
            for b in &family[i + 1..] {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    pairs
}

pub fn involution_table(
    spec: &HamiltonianSpec,
    set: &IntegralSet,
    points: &[PhasePoint],
    tolerance: f64,
) -> Result<BracketResidualTable> {
    if set.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: set.dim(),
        });
    }
    bracket_table(&involution_pairs(spec, set), points, tolerance)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceCertificate {
    pub functions: Vec<String>,
    pub num_points: usize,
    pub singular_values: Vec<Vec<f64>>,
    pub point_ranks: Vec<usize>,
    pub numerical_rank: usize,
    pub rank_tolerance: f64,
}

impl IndependenceCertificate {
    pub fn passed(&self) -> bool {
        self.numerical_rank == self.functions.len()
    }
}

/// Rank of the stacked gradients, maximized over the points.
pub fn independence_rank(
    functions: &[ConservedQuantity],
    points: &[PhasePoint],
    rank_tolerance: f64,
) -> Result<IndependenceCertificate> {
    if points.is_empty() {
        return Err(Error::Sampling("at least one sample point is required".into()));
    }
    let n = points[0].dim();
    if let Some(x) = points.iter().find(|x| x.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.dim(),
        });
    }
    let singular: Vec<Vec<f64>> = points
        .par_iter()
        .map(|x| {
            let rows = functions
                .iter()
                .map(|f| f.gradient(x).map(|g| g.to_row()))
                .collect::<Result<Vec<_>>>()?;
            let mut sv = singular_values(&rows);
            sv.truncate(functions.len().min(2 * n));
            Ok(sv)
        })
        .collect::<Result<_>>()?;
    let point_ranks: Vec<usize> = singular.iter().map(|sv| numerical_rank(sv, rank_tolerance)).collect();
    Ok(IndependenceCertificate {
        functions: functions.iter().map(|f| f.name().to_string()).collect(),
        num_points: points.len(),
        numerical_rank: point_ranks.iter().copied().max().unwrap_or(0),
        singular_values: singular,
        point_ranks,
        rank_tolerance,
    })
}
