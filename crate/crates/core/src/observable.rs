//! Scalar phase-space functions with analytic gradients.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::phase::{PhaseGradient, PhasePoint};
use crate::realization::{evaluate_sl2, Generator, Sl2Realization};

/// A smooth function on phase space with a hand-derived gradient.
pub trait PhaseFunction: Send + Sync + fmt::Debug {
    fn value(&self, x: &PhasePoint) -> Result<f64>;
    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient>;
}

/// A named observable: a universal or extra integral, the energy, or any
/// other phase function fed to the bracket engine.
#[derive(Clone)]
pub struct ConservedQuantity {
    name: String,
    inner: Arc<dyn PhaseFunction>,
}

impl fmt::Debug for ConservedQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConservedQuantity")
            .field("name", &self.name)
            .field("inner", &self.inner)
            .finish()
    }
}

impl ConservedQuantity {
    pub fn new(name: impl Into<String>, inner: impl PhaseFunction + 'static) -> Self {
        Self {
            name: name.into(),
            inner: Arc::new(inner),
        }
    }

    pub fn from_arc(name: impl Into<String>, inner: Arc<dyn PhaseFunction>) -> Self {
        Self {
            name: name.into(),
            inner,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn value(&self, x: &PhasePoint) -> Result<f64> {
        self.inner.value(x)
    }

    pub fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        self.inner.gradient(x)
    }

    /// The canonical coordinate `q_i` (zero-based `i`).
    pub fn position(i: usize) -> Self {
        Self::new(format!("q{}", i + 1), Canonical { index: i, momentum: false })
    }

    /// The canonical momentum `p_i` (zero-based `i`).
    pub fn momentum(i: usize) -> Self {
        Self::new(format!("p{}", i + 1), Canonical { index: i, momentum: true })
    }

    /// One of the sl(2,R) generators as an observable.
    pub fn generator(realization: &Sl2Realization, which: Generator) -> Self {
        let name = match which {
            Generator::Minus => "J-",
            Generator::Plus => "J+",
            Generator::Three => "J3",
        };
        Self::new(
            name,
            GeneratorFunction {
                realization: realization.clone(),
                which,
            },
        )
    }

    /// The N-site Casimir `J- J+ - J3^2`.
    pub fn casimir(realization: &Sl2Realization) -> Self {
        Self::new(
            "Casimir",
            CasimirFunction {
                realization: realization.clone(),
            },
        )
    }
}

#[derive(Debug)]
struct Canonical {
    index: usize,
    momentum: bool,
}

impl Canonical {
    fn check(&self, x: &PhasePoint) -> Result<()> {
        if self.index >= x.dim() {
            return Err(Error::Range {
                index: self.index + 1,
                min: 1,
                max: x.dim(),
            });
        }
        Ok(())
    }
}

impl PhaseFunction for Canonical {
    fn value(&self, x: &PhasePoint) -> Result<f64> {
        self.check(x)?;
        Ok(if self.momentum { x.p()[self.index] } else { x.q()[self.index] })
    }

    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        self.check(x)?;
        let mut g = PhaseGradient::zeros(x.dim());
        if self.momentum {
            g.dp[self.index] = 1.0;
        } else {
            g.dq[self.index] = 1.0;
        }
        Ok(g)
    }
}

#[derive(Debug)]
struct GeneratorFunction {
    realization: Sl2Realization,
    which: Generator,
}

impl PhaseFunction for GeneratorFunction {
    fn value(&self, x: &PhasePoint) -> Result<f64> {
        Ok(self.which.select(&self.realization.generators(x)?))
    }

    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        Ok(self.which.gradient(&evaluate_sl2(&self.realization, x)?))
    }
}

#[derive(Debug)]
struct CasimirFunction {
    realization: Sl2Realization,
}

impl PhaseFunction for CasimirFunction {
    fn value(&self, x: &PhasePoint) -> Result<f64> {
        Ok(self.realization.generators(x)?.casimir())
    }

    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        let v = evaluate_sl2(&self.realization, x)?;
        let n = x.dim();
        let mut g = PhaseGradient::zeros(n);
        for i in 0..n {
            g.dq[i] = v.grad_q[0][i] * v.j_plus + v.j_minus * v.grad_q[1][i] - 2.0 * v.j3 * v.grad_q[2][i];
            g.dp[i] = v.grad_p[0][i] * v.j_plus + v.j_minus * v.grad_p[1][i] - 2.0 * v.j3 * v.grad_p[2][i];
        }
        Ok(g)
    }
}
