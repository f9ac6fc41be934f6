//! Seeded sampling of regular phase-space points.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::{hamiltonian_gradient, hamiltonian_value, HamiltonianSpec};
use crate::observable::ConservedQuantity;
use crate::phase::PhasePoint;

/// Draw region: `|q_i|` in `[q_min, q_max]` with a random sign and `p_i` in
/// `[-p_max, p_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerBox {
    pub q_min: f64,
    pub q_max: f64,
    pub p_max: f64,
}

impl Default for SamplerBox {
    fn default() -> Self {
        Self {
            q_min: 0.2,
            q_max: 1.5,
            p_max: 1.5,
        }
    }
}

impl SamplerBox {
    /// The default box shrunk so that `|kappa| q^2 <= 0.8` for every draw,
    /// which keeps curved samples well inside their charts.
    pub fn adapted(kappa: f64, n: usize) -> Self {
        let mut b = Self::default();
        if kappa != 0.0 && n > 0 {
            let cap = (0.8 / (kappa.abs() * n as f64)).sqrt();
            if cap < b.q_max {
                b.q_max = cap;
                b.q_min = b.q_min.min(cap / 4.0);
            }
        }
        b
    }
}

/// Draws points at which the Hamiltonian and every listed function are
/// finite and the guard distance exceeds `margin`.
#[derive(Clone, Debug)]
pub struct PointSampler {
    rng: ChaCha8Rng,
    pub region: SamplerBox,
    pub margin: f64,
    pub max_draws: usize,
}

impl PointSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            region: SamplerBox::default(),
            margin: 0.1,
            max_draws: 1000,
        }
    }

    pub fn with_region(mut self, region: SamplerBox) -> Self {
        self.region = region;
        self
    }

    /// An unchecked draw from the box.
    pub fn raw(&mut self, n: usize) -> PhasePoint {
        let SamplerBox { q_min, q_max, p_max } = self.region;
        let q: Vec<f64> = (0..n)
            .map(|_| {
                let mag = self.rng.gen_range(q_min..=q_max);
                if self.rng.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        let p: Vec<f64> = (0..n).map(|_| self.rng.gen_range(-p_max..=p_max)).collect();
        PhasePoint::new(q, p).expect("finite box draw")
    }

    fn is_regular(&self, spec: &HamiltonianSpec, functions: &[ConservedQuantity], x: &PhasePoint) -> bool {
        let guard_ok = matches!(spec.guard_distance(x), Ok(d) if d > self.margin);
        let finite = |g: &crate::phase::PhaseGradient| g.dq.iter().chain(&g.dp).all(|v| v.is_finite());
        guard_ok
            && hamiltonian_value(spec, x).is_ok()
            && hamiltonian_gradient(spec, x).is_ok_and(|g| finite(&g))
            && functions.iter().all(|f| {
                f.value(x).is_ok_and(f64::is_finite) && f.gradient(x).is_ok_and(|g| finite(&g))
            })
    }

    /// One regular point, or `Sampling` after `max_draws` rejections.
    pub fn draw(&mut self, spec: &HamiltonianSpec, functions: &[ConservedQuantity]) -> Result<PhasePoint> {
        for _ in 0..self.max_draws {
            let x = self.raw(spec.dim());
            if self.is_regular(spec, functions, &x) {
                return Ok(x);
            }
        }
        Err(Error::Sampling(format!(
            "no regular point for {} in {} draws",
            spec.name(),
            self.max_draws
        )))
    }

    pub fn draw_many(
        &mut self,
        spec: &HamiltonianSpec,
        functions: &[ConservedQuantity],
        count: usize,
    ) -> Result<Vec<PhasePoint>> {
        (0..count).map(|_| self.draw(spec, functions)).collect()
    }
}
