//! The N-site symplectic realization of sl(2,R).
//!
//! ```text
//! J- = sum q_i^2      J+ = sum (p_i^2 + b_i / q_i^2)      J3 = sum q_i p_i
//! ```
//!
//! These close the Lie-Poisson algebra `{J3, J+} = 2 J+`, `{J3, J-} = -2 J-`,
//! `{J-, J+} = 4 J3`, and every Hamiltonian in the crate is a function of them.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::phase::{PhaseGradient, PhasePoint};

/// Below this `|q_i|` a site with `b_i != 0` is treated as singular.
pub const CENTRIFUGAL_DOMAIN_RADIUS: f64 = 1e-10;

/// Values of the three generators at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Generators {
    pub minus: f64,
    pub plus: f64,
    pub three: f64,
}

impl Generators {
    /// `J- J+ - J3^2`.
    pub fn casimir(&self) -> f64 {
        self.minus * self.plus - self.three * self.three
    }
}

/// Centrifugal coefficients `b_1..b_N` of the realization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sl2Realization {
    b: Vec<f64>,
}

impl Sl2Realization {
    pub fn new(b: Vec<f64>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::Domain("realization needs at least one site".into()));
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("centrifugal coefficients must be finite".into()));
        }
        Ok(Self { b })
    }

    /// The realization without centrifugal terms.
    pub fn free(n: usize) -> Self {
        Self { b: vec![0.0; n.max(1)] }
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.b.len() {
            return Err(Error::DimensionMismatch {
                expected: self.b.len(),
                found: n,
            });
        }
        Ok(())
    }

    pub(crate) fn check_sites(&self, q: &[f64]) -> Result<()> {
        for (i, (&qi, &bi)) in q.iter().zip(&self.b).enumerate() {
            if bi != 0.0 && qi.abs() < CENTRIFUGAL_DOMAIN_RADIUS {
                return Err(domain(format!(
                    "q_{} = {qi:e} on a centrifugal site (b_{} = {bi})",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Smallest `|q_i|` over sites carrying a centrifugal term.
    pub fn centrifugal_clearance(&self, q: &[f64]) -> f64 {
        q.iter()
            .zip(&self.b)
            .filter(|(_, &b)| b != 0.0)
            .map(|(qi, _)| qi.abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Generator values from raw slices; dimensions must already agree.
    pub(crate) fn generators_raw(&self, q: &[f64], p: &[f64]) -> Result<Generators> {
        self.check_sites(q)?;
        let mut g = Generators {
            minus: 0.0,
            plus: 0.0,
            three: 0.0,
        };
        for ((&qi, &pi), &bi) in q.iter().zip(p).zip(&self.b) {
            g.minus += qi * qi;
            g.plus += pi * pi;
            if bi != 0.0 {
                g.plus += bi / (qi * qi);
            }
            g.three += qi * pi;
        }
        Ok(g)
    }

    pub fn generators(&self, x: &PhasePoint) -> Result<Generators> {
        self.check_dim(x.dim())?;
        self.generators_raw(x.q(), x.p())
    }
}

/// Generator values together with their phase-space gradients.
///
/// Gradient arrays are indexed `[J-, J+, J3]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Values {
    pub j_minus: f64,
    pub j_plus: f64,
    pub j3: f64,
    pub grad_q: [Vec<f64>; 3],
    pub grad_p: [Vec<f64>; 3],
}

impl Sl2Values {
    pub fn generators(&self) -> Generators {
        Generators {
            minus: self.j_minus,
            plus: self.j_plus,
            three: self.j3,
        }
    }
}

pub fn evaluate_sl2(realization: &Sl2Realization, x: &PhasePoint) -> Result<Sl2Values> {
    let g = realization.generators(x)?;
    let n = x.dim();
    let mut grad_q = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut grad_p = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for i in 0..n {
        let (qi, pi, bi) = (x.q()[i], x.p()[i], realization.b[i]);
        grad_q[0][i] = 2.0 * qi;
        grad_q[1][i] = if bi != 0.0 { -2.0 * bi / (qi * qi * qi) } else { 0.0 };
        grad_q[2][i] = pi;
        grad_p[1][i] = 2.0 * pi;
        grad_p[2][i] = qi;
    }
    Ok(Sl2Values {
        j_minus: g.minus,
        j_plus: g.plus,
        j3: g.three,
        grad_q,
        grad_p,
    })
}

/// Which generator of the realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Minus,
    Plus,
    Three,
}

impl Generator {
    fn index(self) -> usize {
        match self {
            Generator::Minus => 0,
            Generator::Plus => 1,
            Generator::Three => 2,
        }
    }

    pub fn select(self, g: &Generators) -> f64 {
        match self {
            Generator::Minus => g.minus,
            Generator::Plus => g.plus,
            Generator::Three => g.three,
        }
    }

    pub fn gradient(self, v: &Sl2Values) -> PhaseGradient {
        PhaseGradient {
            dq: v.grad_q[self.index()].clone(),
            dp: v.grad_p[self.index()].clone(),
        }
    }
}
