//! Long-run integrator behaviour.

mod common;

use common::params;
use qms_core::catalog::{make_kepler_coulomb, make_sw};
use qms_core::dynamics::{integrate, IntegratorConfig};
use qms_core::integrals::curved_kc_extra_integral;
use qms_core::{Chart, PhasePoint, Space, SystemParams};

fn sw_flat(b: Vec<f64>) -> qms_core::HamiltonianSpec {
    make_sw(
        Space::Euclidean,
        &SystemParams {
            omega: 1.0,
            b_tilde: b,
            ..SystemParams::default()
        },
    )
    .unwrap()
}

#[test]
fn energy_drift_with_centrifugal_barriers() {
    let h = sw_flat(vec![0.2, 0.4, 0.3]);
    let x0 = PhasePoint::new(vec![0.7, -0.6, 0.5], vec![0.3, 0.2, -0.4]).unwrap();
    let tr = integrate(&h, &x0, 100.0, &IntegratorConfig::gauss_legendre(1e-3), &[h.energy()]).unwrap();
    assert!(tr.drift[0] < 1e-10, "energy drift {}", tr.drift[0]);
}

#[test]
fn gauss_legendre_beats_rk4_over_long_runs() {
    let h = sw_flat(vec![0.2, 0.4]);
    let x0 = PhasePoint::new(vec![0.7, -0.6], vec![0.3, 0.2]).unwrap();
    let run = |cfg: IntegratorConfig| integrate(&h, &x0, 1000.0, &cfg, &[h.energy()]).unwrap().drift[0];
    let gl = run(IntegratorConfig::gauss_legendre(0.01));
    let rk = run(IntegratorConfig::rk4(0.01));
    println!("energy drift at t = 1000, h = 0.01: gauss-legendre {gl:.3e}, rk4 {rk:.3e}");
    assert!(gl < rk);
}

#[test]
fn rk4_drift_grows_secularly() {
    let h = sw_flat(vec![0.2, 0.4]);
    let x0 = PhasePoint::new(vec![0.7, -0.6], vec![0.3, 0.2]).unwrap();
    let tr = integrate(&h, &x0, 1000.0, &IntegratorConfig::rk4(0.01), &[h.energy()]).unwrap();
    let e0 = tr.monitor_values[0][0];
    let err = |k: usize| (tr.monitor_values[k][0] - e0).abs();
    let n = tr.len() - 1;
    assert!(err(n) > err(n / 10));
}

#[test]
fn time_reversal_returns_to_start() {
    let p = params(0.5, vec![0.3, 0.2, 0.4]);
    let h = make_sw(Space::Beltrami { kappa: 0.5 }, &p).unwrap();
    let x0 = PhasePoint::new(vec![0.6, -0.45, 0.5], vec![0.3, 0.25, -0.2]).unwrap();
    let cfg = IntegratorConfig::gauss_legendre(1e-3);
    let fwd = integrate(&h, &x0, 5.0, &cfg, &[]).unwrap();
    let back = integrate(&h, fwd.last().unwrap(), -5.0, &cfg, &[]).unwrap();
    let d = back.last().unwrap().distance(&x0);
    assert!(d < 1e-9, "returned within {d}");
    assert!(back.times.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn curved_lrl_components_are_conserved_with_a_single_barrier() {
    let p = params(1.0, vec![0.0, 0.0, 0.05]);
    let h = make_kepler_coulomb(Space::Poincare { kappa: 1.0 }, &p).unwrap();
    let monitors: Vec<_> = (1..=2).map(|i| curved_kc_extra_integral(i, &p, Chart::Poincare).unwrap()).collect();
    let x0 = PhasePoint::new(vec![0.25, -0.2, 0.3], vec![0.2, 0.15, -0.1]).unwrap();
    let tr = integrate(&h, &x0, 10.0, &IntegratorConfig::gauss_legendre(1e-3), &monitors).unwrap();
    for (name, d) in tr.monitor_names.iter().zip(&tr.drift) {
        assert!(*d < 1e-8, "{name} drift {d}");
    }
}

#[test]
fn record_every_thins_the_output() {
    let h = sw_flat(vec![0.0, 0.0]);
    let x0 = PhasePoint::new(vec![0.7, -0.6], vec![0.3, 0.2]).unwrap();
    let mut cfg = IntegratorConfig::gauss_legendre(0.01);
    cfg.record_every = 10;
    let tr = integrate(&h, &x0, 1.05, &cfg, &[h.energy()]).unwrap();
    // 105 steps: states 0, 10, ..., 100 and the final one
    assert_eq!(tr.len(), 12);
    assert!((tr.times.last().unwrap() - 1.05).abs() < 1e-14);
}
