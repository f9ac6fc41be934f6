//! Hamiltonians of the form `H = Hf(J-, J+, J3)`.
//!
//! A [`HamiltonianForm`] supplies the scalar function `Hf(xi-, xi+, xi3)` and
//! its three partial derivatives; phase-space gradients follow from the chain
//! rule through the realization, so no numerical differentiation is involved.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::observable::{ConservedQuantity, PhaseFunction};
use crate::phase::{PhaseGradient, PhasePoint};
use crate::realization::{Generators, Sl2Realization};

/// A smooth scalar function of one variable together with its derivative.
///
/// Profiles are the caller hooks `F`, `G`, `M` of the catalog; they are
/// always evaluated at `s = J- = q^2`.
pub trait ScalarProfile: Send + Sync + fmt::Debug {
    /// Returns `(f(s), f'(s))`.
    fn eval(&self, s: f64) -> Result<(f64, f64)>;

    /// A length-like distance from `s` to the nearest singularity, used by
    /// the dynamics guard. Infinite for profiles that are smooth everywhere.
    fn singularity_distance(&self, _s: f64) -> f64 {
        f64::INFINITY
    }
}

/// `f(s) = c_0 + c_1 s + c_2 s^2 + ...`
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl ScalarProfile for Polynomial {
    fn eval(&self, s: f64) -> Result<(f64, f64)> {
        // Horner for the value and the derivative together
        let mut v = 0.0;
        let mut d = 0.0;
        for &c in self.0.iter().rev() {
            d = d * s + v;
            v = v * s + c;
        }
        Ok((v, d))
    }
}

/// `f(s) = coefficient * s^exponent`, defined for `s > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Power {
    pub coefficient: f64,
    pub exponent: f64,
}

/// `s` below which a negative power is considered singular (`|q| < 1e-10`).
const POWER_DOMAIN_S: f64 = 1e-20;

impl ScalarProfile for Power {
    fn eval(&self, s: f64) -> Result<(f64, f64)> {
        if self.exponent < 0.0 && s < POWER_DOMAIN_S {
            return Err(domain(format!("s^{} singular at s = {s:e}", self.exponent)));
        }
        if s < 0.0 {
            return Err(domain(format!("s^{} undefined at s = {s}", self.exponent)));
        }
        let v = self.coefficient * s.powf(self.exponent);
        let d = self.coefficient * self.exponent * s.powf(self.exponent - 1.0);
        Ok((v, d))
    }

    fn singularity_distance(&self, s: f64) -> f64 {
        if self.exponent < 0.0 {
            s.max(0.0).sqrt()
        } else {
            f64::INFINITY
        }
    }
}

/// A profile built from two closures, the value and its derivative.
#[derive(Clone)]
pub struct FnProfile {
    label: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    df: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl FnProfile {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            f: Arc::new(f),
            df: Arc::new(df),
        }
    }
}

impl fmt::Debug for FnProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnProfile({})", self.label)
    }
}

impl ScalarProfile for FnProfile {
    fn eval(&self, s: f64) -> Result<(f64, f64)> {
        let (v, d) = ((self.f)(s), (self.df)(s));
        if !v.is_finite() || !d.is_finite() {
            return Err(domain(format!("profile {} not finite at s = {s}", self.label)));
        }
        Ok((v, d))
    }
}

/// The scalar function `Hf(xi-, xi+, xi3)` behind a Hamiltonian.
pub trait HamiltonianForm: Send + Sync + fmt::Debug {
    fn value(&self, xi: &Generators) -> Result<f64>;

    /// `(dHf/dxi-, dHf/dxi+, dHf/dxi3)`.
    fn partials(&self, xi: &Generators) -> Result<[f64; 3]>;

    /// Distance to the nearest guarded singularity in generator space
    /// (chart boundaries, `q = 0` for Coulomb-type terms).
    fn guard_distance(&self, _xi: &Generators) -> f64 {
        f64::INFINITY
    }
}

/// A catalog member: named parameters, the realization, and `Hf`.
#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    name: String,
    params: BTreeMap<String, f64>,
    realization: Sl2Realization,
    form: Arc<dyn HamiltonianForm>,
}

impl HamiltonianSpec {
    pub fn new(
        name: impl Into<String>,
        params: BTreeMap<String, f64>,
        realization: Sl2Realization,
        form: Arc<dyn HamiltonianForm>,
    ) -> Self {
        Self {
            name: name.into(),
            params,
            realization,
            form,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    pub fn realization(&self) -> &Sl2Realization {
        &self.realization
    }

    pub fn form(&self) -> &Arc<dyn HamiltonianForm> {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.realization.dim()
    }

    /// `Hf` evaluated at explicit generator values.
    pub fn eval_form(&self, xi: &Generators) -> Result<f64> {
        self.form.value(xi)
    }

    pub fn partials_form(&self, xi: &Generators) -> Result<[f64; 3]> {
        self.form.partials(xi)
    }

    pub(crate) fn value_raw(&self, q: &[f64], p: &[f64]) -> Result<f64> {
        let xi = self.realization.generators_raw(q, p)?;
        self.form.value(&xi)
    }

    /// Chain rule over the three generator partials, writing into `dq`, `dp`.
    pub(crate) fn gradient_raw(&self, q: &[f64], p: &[f64], dq: &mut [f64], dp: &mut [f64]) -> Result<()> {
        let xi = self.realization.generators_raw(q, p)?;
        let [dm, dplus, d3] = self.form.partials(&xi)?;
        for i in 0..q.len() {
            let (qi, pi, bi) = (q[i], p[i], self.realization.b()[i]);
            let djp_dq = if bi != 0.0 { -2.0 * bi / (qi * qi * qi) } else { 0.0 };
            dq[i] = dm * 2.0 * qi + dplus * djp_dq + d3 * pi;
            dp[i] = dplus * 2.0 * pi + d3 * qi;
        }
        Ok(())
    }

    /// Smallest distance to any guarded singularity: centrifugal sites,
    /// chart boundaries and profile singularities.
    pub fn guard_distance(&self, x: &PhasePoint) -> Result<f64> {
        self.realization.check_dim(x.dim())?;
        let site = self.realization.centrifugal_clearance(x.q());
        let xi = self.realization.generators_raw(x.q(), x.p())?;
        Ok(site.min(self.form.guard_distance(&xi)))
    }

    /// The energy as an observable.
    pub fn energy(&self) -> ConservedQuantity {
        ConservedQuantity::new("H", Energy(self.clone()))
    }
}

#[derive(Debug)]
struct Energy(HamiltonianSpec);

impl PhaseFunction for Energy {
    fn value(&self, x: &PhasePoint) -> Result<f64> {
        hamiltonian_value(&self.0, x)
    }

    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        hamiltonian_gradient(&self.0, x)
    }
}

pub fn hamiltonian_value(spec: &HamiltonianSpec, x: &PhasePoint) -> Result<f64> {
    spec.realization.check_dim(x.dim())?;
    let v = spec.value_raw(x.q(), x.p())?;
    if !v.is_finite() {
        return Err(Error::Domain(format!("{} is not finite at this point", spec.name)));
    }
    Ok(v)
}

pub fn hamiltonian_gradient(spec: &HamiltonianSpec, x: &PhasePoint) -> Result<PhaseGradient> {
    spec.realization.check_dim(x.dim())?;
    let mut g = PhaseGradient::zeros(x.dim());
    spec.gradient_raw(x.q(), x.p(), &mut g.dq, &mut g.dp)?;
    Ok(g)
}
