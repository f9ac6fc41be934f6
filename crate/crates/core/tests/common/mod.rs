#![allow(dead_code)]

use std::sync::Arc;

use qms_core::catalog::{
    make_electromagnetic, make_evans, make_garnier, make_kepler_coulomb, make_nonlinear_oscillator, make_sw,
    make_variable_mass,
};
use qms_core::hamiltonian::{FnProfile, Polynomial};
use qms_core::sampling::{PointSampler, SamplerBox};
use qms_core::{ConservedQuantity, HamiltonianSpec, PhasePoint, Space, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub label: String,
    pub spec: HamiltonianSpec,
    pub space: Space,
    pub params: SystemParams,
}

impl Fixture {
    pub fn sampler(&self, seed: u64) -> PointSampler {
        PointSampler::new(seed).with_region(SamplerBox::adapted(self.space.kappa(), self.spec.dim()))
    }

    pub fn points(&self, seed: u64, count: usize, extra: &[ConservedQuantity]) -> Vec<PhasePoint> {
        self.sampler(seed).draw_many(&self.spec, extra, count).unwrap()
    }
}

pub fn random_b_tilde(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.05..1.0)).collect()
}

pub fn params(kappa: f64, b_tilde: Vec<f64>) -> SystemParams {
    SystemParams {
        mass: 1.3,
        omega: 0.9,
        kappa,
        delta: 0.4,
        deltas: vec![0.4, -0.05, 0.01],
        k: 1.1,
        charge: 0.7,
        b_tilde,
    }
}

/// Thirteen catalog instantiations over the three spaces with `N` in
/// `{2, 3, 4, 6}` and seeded random centrifugal constants.
pub fn catalog_fixtures(seed: u64) -> Vec<Fixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut push = |label: &str, space: Space, params: SystemParams, spec: HamiltonianSpec| {
        out.push(Fixture {
            label: format!("{label} N={}", params.b_tilde.len()),
            spec,
            space,
            params,
        });
    };
    let sine = || {
        Arc::new(FnProfile::new("0.3 sin(s) + s", |s: f64| 0.3 * s.sin() + s, |s: f64| 0.3 * s.cos() + 1.0))
    };

    let cases: Vec<(&str, Space, usize)> = vec![
        ("sw euclidean", Space::Euclidean, 2),
        ("sw poincare k=0.5", Space::Poincare { kappa: 0.5 }, 3),
        ("sw beltrami k=-0.5", Space::Beltrami { kappa: -0.5 }, 4),
        ("garnier euclidean", Space::Euclidean, 4),
        ("garnier beltrami k=1", Space::Beltrami { kappa: 1.0 }, 6),
        ("oscillator poincare k=-0.7", Space::Poincare { kappa: -0.7 }, 3),
        ("kepler euclidean", Space::Euclidean, 6),
        ("kepler poincare k=1", Space::Poincare { kappa: 1.0 }, 4),
        ("kepler beltrami k=-1", Space::Beltrami { kappa: -1.0 }, 2),
        ("evans euclidean", Space::Euclidean, 3),
        ("evans poincare k=0.3", Space::Poincare { kappa: 0.3 }, 6),
    ];
    for (label, space, n) in cases {
        let p = params(space.kappa(), random_b_tilde(&mut rng, n));
        let spec = match label.split(' ').next().unwrap() {
            "sw" => make_sw(space, &p),
            "garnier" => make_garnier(space, &p),
            "oscillator" => make_nonlinear_oscillator(space, &p, &p.deltas),
            "kepler" => make_kepler_coulomb(space, &p),
            "evans" => make_evans(space, &p, sine()),
            _ => unreachable!(),
        }
        .unwrap();
        push(label, space, p, spec);
    }

    let p = params(0.0, random_b_tilde(&mut rng, 3));
    let em = make_electromagnetic(&p, Arc::new(Polynomial(vec![0.0, 0.5, 0.1])), Arc::new(Polynomial(vec![0.8, -0.2])))
        .unwrap();
    push("electromagnetic euclidean", Space::Euclidean, p, em);

    let p = params(0.0, random_b_tilde(&mut rng, 4));
    let vm = make_variable_mass(&p, Arc::new(Polynomial(vec![1.0, 0.25])), Arc::new(Polynomial(vec![0.0, 0.6])))
        .unwrap();
    push("variable mass euclidean", Space::Euclidean, p, vm);
    out
}
