//! Fixed-step integration of Hamilton's equations with conserved-quantity
//! drift monitoring and closed-orbit detection.
//!
//! The default scheme is the two-stage Gauss-Legendre collocation method
//! (order 4, symplectic, symmetric) solved by fixed-point iteration; classical
//! RK4 is kept as a non-symplectic reference.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::observable::ConservedQuantity;
use crate::phase::PhasePoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[serde(alias = "gl2", alias = "gauss_legendre")]
    GaussLegendre2,
    Rk4,
}

impl Method {
    pub fn key(self) -> &'static str {
        match self {
            Method::GaussLegendre2 => "gauss_legendre2",
            Method::Rk4 => "rk4",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub step: f64,
    pub fixed_point_tol: f64,
    pub max_fixed_point_iters: usize,
    /// Integration stops once the Hamiltonian's guard distance drops below this.
    pub guard_radius: f64,
    /// Keep every `record_every`-th state (the final state is always kept).
    pub record_every: usize,
}

impl IntegratorConfig {
    pub fn new(method: Method, step: f64) -> Self {
        Self {
            method,
            step,
            fixed_point_tol: 1e-13,
            max_fixed_point_iters: 100,
            guard_radius: 1e-6,
            record_every: 1,
        }
    }

    pub fn gauss_legendre(step: f64) -> Self {
        Self::new(Method::GaussLegendre2, step)
    }

    pub fn rk4(step: f64) -> Self {
        Self::new(Method::Rk4, step)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.step) {
            return Err(Error::Config(format!("step must be positive, got {}", self.step)));
        }
        if !positive(self.fixed_point_tol) || self.max_fixed_point_iters == 0 {
            return Err(Error::Config("fixed-point tolerance and iteration cap must be positive".into()));
        }
        if self.guard_radius.is_nan() || self.guard_radius < 0.0 || self.record_every == 0 {
            return Err(Error::Config("guard radius must be >= 0 and record_every >= 1".into()));
        }
        Ok(())
    }
}

/// Recorded states plus per-monitor values and drift.
#[derive(Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    pub monitor_names: Vec<String>,
    /// `monitor_values[k][j]`: monitor `j` at recorded state `k`.
    pub monitor_values: Vec<Vec<f64>>,
    /// Per monitor, `max |F(t) - F(0)| / (1 + |F(0)|)` over every step taken.
    pub drift: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<&PhasePoint> {
        self.states.last()
    }

    pub fn max_drift(&self) -> f64 {
        self.drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn drift_of(&self, name: &str) -> Option<f64> {
        self.monitor_names.iter().position(|n| n == name).map(|i| self.drift[i])
    }
}

impl fmt::Debug for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Trajectory")
            .field("states", &self.states.len())
            .field("t_start", &self.times.first())
            .field("t_end", &self.times.last())
            .field("monitors", &self.monitor_names)
            .field("drift", &self.drift)
            .finish()
    }
}

/// `dy/dt` for `y = (q, p)`: `(dH/dp, -dH/dq)`.
fn vector_field(spec: &HamiltonianSpec, y: &[f64], out: &mut [f64]) -> Result<()> {
    let n = y.len() / 2;
    let (q, p) = y.split_at(n);
    let (dq_out, dp_out) = out.split_at_mut(n);
    // dH/dq lands in dp_out, dH/dp in dq_out
    spec.gradient_raw(q, p, dp_out, dq_out)?;
    for v in dp_out.iter_mut() {
        *v = -*v;
    }
    if out.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain("non-finite vector field".into()))
    }
}

const SQRT3: f64 = 1.732_050_807_568_877_2;
const GL_A11: f64 = 0.25;
const GL_A12: f64 = 0.25 - SQRT3 / 6.0;
const GL_A21: f64 = 0.25 + SQRT3 / 6.0;
const GL_A22: f64 = 0.25;

enum StepFailure {
    Domain(String),
    NonConvergence(usize),
}

impl From<Error> for StepFailure {
    fn from(e: Error) -> Self {
        StepFailure::Domain(e.to_string())
    }
}

struct Stepper<'a> {
    spec: &'a HamiltonianSpec,
    cfg: &'a IntegratorConfig,
    k1: Vec<f64>,
    k2: Vec<f64>,
    seeded: bool,
    tmp: Vec<f64>,
    f: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(spec: &'a HamiltonianSpec, cfg: &'a IntegratorConfig, dim: usize) -> Self {
        Self {
            spec,
            cfg,
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            seeded: false,
            tmp: vec![0.0; dim],
            f: vec![0.0; dim],
        }
    }

    fn step(&mut self, y: &mut [f64], h: f64) -> std::result::Result<(), StepFailure> {
        match self.cfg.method {
            Method::GaussLegendre2 => self.gauss_legendre(y, h),
            Method::Rk4 => self.rk4(y, h),
        }
    }

    fn gauss_legendre(&mut self, y: &mut [f64], h: f64) -> std::result::Result<(), StepFailure> {
        if !self.seeded {
            vector_field(self.spec, y, &mut self.k1)?;
            self.k2.copy_from_slice(&self.k1);
            self.seeded = true;
        }
        let mut converged = false;
        for _ in 0..self.cfg.max_fixed_point_iters {
            let mut change: f64 = 0.0;
            for (t, ((yi, a), b)) in self.tmp.iter_mut().zip(y.iter().zip(&self.k1).zip(&self.k2)) {
                *t = yi + h * (GL_A11 * a + GL_A12 * b);
            }
            vector_field(self.spec, &self.tmp, &mut self.f)?;
            for (k, f) in self.k1.iter_mut().zip(&self.f) {
                change = change.max((f - *k).abs() / k.abs().max(1.0));
                *k = *f;
            }
            for (t, ((yi, a), b)) in self.tmp.iter_mut().zip(y.iter().zip(&self.k1).zip(&self.k2)) {
                *t = yi + h * (GL_A21 * a + GL_A22 * b);
            }
            vector_field(self.spec, &self.tmp, &mut self.f)?;
            for (k, f) in self.k2.iter_mut().zip(&self.f) {
                change = change.max((f - *k).abs() / k.abs().max(1.0));
                *k = *f;
            }
            if change <= self.cfg.fixed_point_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(StepFailure::NonConvergence(self.cfg.max_fixed_point_iters));
        }
        for ((yi, a), b) in y.iter_mut().zip(&self.k1).zip(&self.k2) {
            *yi += 0.5 * h * (a + b);
        }
        Ok(())
    }

    fn rk4(&mut self, y: &mut [f64], h: f64) -> std::result::Result<(), StepFailure> {
        let dim = y.len();
        let mut acc = vec![0.0; dim];
        let weights = [1.0, 2.0, 2.0, 1.0];
        let offsets = [0.0, 0.5, 0.5, 1.0];
        let mut k = vec![0.0; dim];
        for stage in 0..4 {
            for i in 0..dim {
                self.tmp[i] = y[i] + offsets[stage] * h * k[i];
            }
            vector_field(self.spec, &self.tmp, &mut k)?;
            for i in 0..dim {
                acc[i] += weights[stage] * k[i];
            }
        }
        for i in 0..dim {
            y[i] += h / 6.0 * acc[i];
        }
        Ok(())
    }
}

/// A failed step is blamed on a singularity when the guard distance is
/// within ten step lengths of travel, or has shrunk a hundredfold since the
/// start of the run.
fn near_singularity(spec: &HamiltonianSpec, y: &[f64], h: f64, initial_guard: f64) -> Option<String> {
    let x = PhasePoint::from_flat(y).ok()?;
    let d = spec.guard_distance(&x).ok()?;
    let mut f = vec![0.0; y.len()];
    let speed = match vector_field(spec, y, &mut f) {
        Ok(()) => f[..y.len() / 2].iter().map(|v| v * v).sum::<f64>().sqrt(),
        Err(_) => f64::INFINITY,
    };
    let travel = h.abs() * speed;
    (d < 10.0 * travel || d < 1e-2 * initial_guard)
        .then(|| format!("step cannot resolve the approach: guard distance {d:e}, travel per step {travel:e}"))
}

/// Integrates from `x0` over `t_final` with a uniform step
/// `t_final / ceil(|t_final| / cfg.step)`. A negative `t_final` integrates
/// backwards in time; `t_final = 0` returns the initial state alone.
pub fn integrate(
    spec: &HamiltonianSpec,
    x0: &PhasePoint,
    t_final: f64,
    cfg: &IntegratorConfig,
    monitors: &[ConservedQuantity],
) -> Result<Trajectory> {
    cfg.validate()?;
    if !t_final.is_finite() {
        return Err(Error::Config("t_final must be finite".into()));
    }
    if x0.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: x0.dim(),
        });
    }
    let guard0 = spec.guard_distance(x0)?;
    if guard0 < cfg.guard_radius {
        return Err(Error::Domain(format!(
            "initial state is within {guard0:e} of a singularity"
        )));
    }
    let initial: Vec<f64> = monitors.iter().map(|m| m.value(x0)).collect::<Result<_>>()?;
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![x0.clone()],
        monitor_names: monitors.iter().map(|m| m.name().to_string()).collect(),
        monitor_values: vec![initial.clone()],
        drift: vec![0.0; monitors.len()],
    };
    let steps = (t_final.abs() / cfg.step).ceil() as usize;
    if steps == 0 {
        return Ok(traj);
    }
    let h = t_final / steps as f64;
    let mut y = x0.to_flat();
    let mut stepper = Stepper::new(spec, cfg, y.len());
    for k in 1..=steps {
        let t = k as f64 * h;
        let before = y.clone();
        let fail = |traj: Trajectory, reason: String| Error::SingularApproach {
            time: t,
            reason,
            partial: Box::new(traj),
        };
        let record_partial = |mut traj: Trajectory| {
            // make sure the last safe state is present
            let last_t = (k - 1) as f64 * h;
            if traj.times.last() != Some(&last_t) {
                if let Ok(x) = PhasePoint::from_flat(&before) {
                    let vals = monitors.iter().map(|m| m.value(&x).unwrap_or(f64::NAN)).collect();
                    traj.times.push(last_t);
                    traj.states.push(x);
                    traj.monitor_values.push(vals);
                }
            }
            traj
        };
        match stepper.step(&mut y, h) {
            Ok(()) => {}
            Err(StepFailure::NonConvergence(iterations)) => {
                if let Some(reason) = near_singularity(spec, &before, h, guard0) {
                    return Err(fail(record_partial(traj), reason));
                }
                return Err(Error::NonConvergence { time: t, iterations });
            }
            Err(StepFailure::Domain(msg)) => return Err(fail(record_partial(traj), msg)),
        }
        let x = match PhasePoint::from_flat(&y) {
            Ok(x) => x,
            Err(e) => return Err(fail(record_partial(traj), e.to_string())),
        };
        match spec.guard_distance(&x) {
            Ok(d) if d >= cfg.guard_radius => {}
            Ok(d) => {
                return Err(fail(
                    record_partial(traj),
                    format!("guard distance {d:e} below radius {:e}", cfg.guard_radius),
                ))
            }
            Err(e) => return Err(fail(record_partial(traj), e.to_string())),
        }
        let mut vals = Vec::with_capacity(monitors.len());
        for (j, m) in monitors.iter().enumerate() {
            let v = match m.value(&x) {
                Ok(v) => v,
                Err(e) => return Err(fail(record_partial(traj), e.to_string())),
            };
            let d = (v - initial[j]).abs() / (1.0 + initial[j].abs());
            traj.drift[j] = traj.drift[j].max(d);
            vals.push(v);
        }
        if k % cfg.record_every == 0 || k == steps {
            traj.times.push(t);
            traj.states.push(x);
            traj.monitor_values.push(vals);
        }
    }
    Ok(traj)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    pub period_estimate: Option<f64>,
    pub closure_distance: f64,
    pub is_closed: bool,
    pub tolerance: f64,
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Degree-4 Lagrange interpolation through nodes `-2..=2` at `u`.
fn lagrange5(values: [f64; 5], u: f64) -> f64 {
    let nodes = [-2.0, -1.0, 0.0, 1.0, 2.0];
    (0..5)
        .map(|i| {
            let w: f64 = (0..5)
                .filter(|&j| j != i)
                .map(|j| (u - nodes[j]) / (nodes[i] - nodes[j]))
                .product();
            w * values[i]
        })
        .sum()
}

/// Looks for returns of the orbit to its initial state.
///
/// After the phase distance first exceeds `max(10 tol, 0.1 max_distance)`,
/// every local minimum of the sampled distance is refined by interpolating
/// the state through five neighbouring samples. The closure distance is the
/// smallest refined minimum and the period the time of the first refined
/// minimum below `tol`.
pub fn detect_closure(traj: &Trajectory, tol: f64) -> Result<ClosureReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Config(format!("closure tolerance must be positive, got {tol}")));
    }
    let n = traj.states.len();
    if n < 5 {
        return Err(Error::InsufficientData(format!("{n} samples, need at least 5")));
    }
    let x0 = &traj.states[0];
    let dist: Vec<f64> = traj.states.iter().map(|s| s.distance(x0)).collect();
    let max = dist.iter().copied().fold(0.0, f64::max);
    let threshold = (10.0 * tol).max(0.1 * max);
    let excursion = dist
        .iter()
        .position(|&d| d > threshold)
        .ok_or_else(|| Error::InsufficientData("orbit never leaves the initial state".into()))?;
    let flat: Vec<Vec<f64>> = traj.states.iter().map(PhasePoint::to_flat).collect();
    let x0f = &flat[0];
    let mut best = f64::INFINITY;
    let mut period = None;
    let mut found = false;
    for k in (excursion + 1)..(n - 1) {
        if !(dist[k] <= dist[k - 1] && dist[k] <= dist[k + 1] && dist[k] < threshold) {
            continue;
        }
        found = true;
        let (mut dmin, mut tmin) = (dist[k], traj.times[k]);
        if k >= 2 && k + 2 < n {
            let dt = (traj.times[k + 1] - traj.times[k - 1]) / 2.0;
            let dist_at = |u: f64| -> f64 {
                (0..x0f.len())
                    .map(|c| {
                        let vals = [flat[k - 2][c], flat[k - 1][c], flat[k][c], flat[k + 1][c], flat[k + 2][c]];
                        let diff = lagrange5(vals, u) - x0f[c];
                        diff * diff
                    })
                    .sum::<f64>()
                    .sqrt()
            };
            let (u, d) = golden_min(dist_at, -1.0, 1.0);
            if d < dmin {
                dmin = d;
                tmin = traj.times[k] + u * dt;
            }
        }
        best = best.min(dmin);
        if period.is_none() && dmin < tol {
            period = Some(tmin - traj.times[0]);
        }
    }
    if !found {
        return Err(Error::InsufficientData("no return towards the initial state".into()));
    }
    Ok(ClosureReport {
        period_estimate: period,
        closure_distance: best,
        is_closed: best < tol,
        tolerance: tol,
    })
}
