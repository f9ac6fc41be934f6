//! Universal integrals of the coalgebra family and the extra integrals of
//! the Smorodinsky-Winternitz and Kepler-Coulomb systems.
//!
//! The left integral over sites `1..m` is
//!
//! ```text
//! C^(m) = sum_{i<j<=m} [ (q_i p_j - q_j p_i)^2 + b_i q_j^2/q_i^2 + b_j q_i^2/q_j^2 ] + sum_{i<=m} b_i
//! ```
//!
//! and the right integral `C_(m)` is the same sum over the last `m` sites.
//! Both commute with every `H = Hf(J-, J+, J3)`.

use crate::catalog::SystemParams;
use crate::error::{domain, Error, Result};
use crate::geometry::Chart;
use crate::observable::{ConservedQuantity, PhaseFunction};
use crate::phase::{PhaseGradient, PhasePoint};
use crate::realization::{Sl2Realization, CENTRIFUGAL_DOMAIN_RADIUS};

/// Pairwise Casimir over the half-open site range `[lo, hi)`.
#[derive(Clone, Debug)]
struct SiteCasimir {
    b: Vec<f64>,
    lo: usize,
    hi: usize,
}

impl SiteCasimir {
    fn check(&self, x: &PhasePoint) -> Result<()> {
        if x.dim() != self.b.len() {
            return Err(Error::DimensionMismatch {
                expected: self.b.len(),
                found: x.dim(),
            });
        }
        for i in self.lo..self.hi {
            if self.b[i] != 0.0 && x.q()[i].abs() < CENTRIFUGAL_DOMAIN_RADIUS {
                return Err(domain(format!("q_{} = 0 on a centrifugal site", i + 1)));
            }
        }
        Ok(())
    }
}

impl PhaseFunction for SiteCasimir {
    fn value(&self, x: &PhasePoint) -> Result<f64> {
        self.check(x)?;
        let (q, p, b) = (x.q(), x.p(), &self.b);
        let mut sum = 0.0;
        for i in self.lo..self.hi {
            for j in i + 1..self.hi {
                let l = q[i] * p[j] - q[j] * p[i];
                let (qi2, qj2) = (q[i] * q[i], q[j] * q[j]);
                let ci = if b[i] != 0.0 { b[i] * qj2 / qi2 } else { 0.0 };
                let cj = if b[j] != 0.0 { b[j] * qi2 / qj2 } else { 0.0 };
                sum += l * l + (ci + cj);
            }
        }
        Ok(sum + b[self.lo..self.hi].iter().sum::<f64>())
    }

    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        self.check(x)?;
        let (q, p, b) = (x.q(), x.p(), &self.b);
        let mut g = PhaseGradient::zeros(x.dim());
        for k in self.lo..self.hi {
            let (mut dq, mut dp) = (0.0, 0.0);
            for j in self.lo..self.hi {
                if j == k {
                    continue;
                }
                let l = q[k] * p[j] - q[j] * p[k];
                dq += 2.0 * l * p[j];
                dp -= 2.0 * l * q[j];
                if b[k] != 0.0 {
                    dq -= 2.0 * b[k] * q[j] * q[j] / (q[k] * q[k] * q[k]);
                }
                if b[j] != 0.0 {
                    dq += 2.0 * b[j] * q[k] / (q[j] * q[j]);
                }
            }
            g.dq[k] = dq;
            g.dp[k] = dp;
        }
        Ok(g)
    }
}

fn check_order(realization: &Sl2Realization, m: usize) -> Result<usize> {
    let n = realization.dim();
    if n < 2 || !(2..=n).contains(&m) {
        return Err(Error::Range {
            index: m,
            min: 2,
            max: n,
        });
    }
    Ok(n)
}

/// `C^(m)`, the Casimir of the first `m` sites.
pub fn left_integral(realization: &Sl2Realization, m: usize) -> Result<ConservedQuantity> {
    check_order(realization, m)?;
    Ok(ConservedQuantity::new(
        format!("C^({m})"),
        SiteCasimir {
            b: realization.b().to_vec(),
            lo: 0,
            hi: m,
        },
    ))
}

/// `C_(m)`, the Casimir of the last `m` sites.
pub fn right_integral(realization: &Sl2Realization, m: usize) -> Result<ConservedQuantity> {
    let n = check_order(realization, m)?;
    Ok(ConservedQuantity::new(
        format!("C_({m})"),
        SiteCasimir {
            b: realization.b().to_vec(),
            lo: n - m,
            hi: n,
        },
    ))
}

/// The `2N - 3` universal integrals: `C^(2)..C^(N)` and `C_(2)..C_(N-1)`.
/// `C_(N)` coincides with `C^(N)` and is stored once, in `left`.
#[derive(Clone, Debug)]
pub struct IntegralSet {
    pub left: Vec<ConservedQuantity>,
    pub right: Vec<ConservedQuantity>,
    pub realization: Sl2Realization,
}

impl IntegralSet {
    pub fn new(realization: &Sl2Realization) -> Result<Self> {
        let n = realization.dim();
        if n < 2 {
            return Err(Error::Range { index: n, min: 2, max: usize::MAX });
        }
        let left = (2..=n).map(|m| left_integral(realization, m)).collect::<Result<Vec<_>>>()?;
        let right = (2..n).map(|m| right_integral(realization, m)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            left,
            right,
            realization: realization.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.realization.dim()
    }

    /// All distinct universal integrals, left family first.
    pub fn all(&self) -> Vec<ConservedQuantity> {
        self.left.iter().chain(&self.right).cloned().collect()
    }

    /// `C^(2)..C^(N)`.
    pub fn left_family(&self) -> Vec<ConservedQuantity> {
        self.left.clone()
    }

    /// `C_(2)..C_(N-1)` followed by the shared `C_(N) = C^(N)`.
    pub fn right_family(&self) -> Vec<ConservedQuantity> {
        let mut v = self.right.clone();
        if let Some(top) = self.left.last() {
            v.push(top.clone());
        }
        v
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Curved "momentum" `P_l = p_l (1 - a q^2) + c (q.p) q_l` shared by the
/// extra integrals: `(a, c) = (0, 0)` flat, `(0, k)` Beltrami, `(k, 2k)` Poincare.
#[derive(Clone, Copy, Debug, PartialEq)]
struct MomentumFrame {
    a: f64,
    c: f64,
}

impl MomentumFrame {
    fn for_chart(chart: Option<Chart>, kappa: f64) -> Self {
        match chart {
            None => Self { a: 0.0, c: 0.0 },
            Some(Chart::Beltrami) => Self { a: 0.0, c: kappa },
            Some(Chart::Poincare) => Self { a: kappa, c: 2.0 * kappa },
        }
    }
}

fn check_site(i: usize, n: usize) -> Result<usize> {
    if !(1..=n).contains(&i) {
        return Err(Error::Range { index: i, min: 1, max: n });
    }
    Ok(i - 1)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug)]
struct SwExtra {
    site: usize,
    n: usize,
    mass: f64,
    omega: f64,
    b_tilde: f64,
    kappa: f64,
    chart: Option<Chart>,
}

impl SwExtra {
    fn check(&self, x: &PhasePoint) -> Result<()> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.dim(),
            });
        }
        if self.b_tilde != 0.0 && x.q()[self.site].abs() < CENTRIFUGAL_DOMAIN_RADIUS {
            return Err(domain(format!("q_{} = 0 on a centrifugal site", self.site + 1)));
        }
        if self.chart == Some(Chart::Poincare) {
            let d = 1.0 - self.kappa * dot(x.q(), x.q());
            if d.abs() < CENTRIFUGAL_DOMAIN_RADIUS {
                return Err(domain("1 - kappa q^2 = 0"));
            }
        }
        Ok(())
    }
}

impl PhaseFunction for SwExtra {
    fn value(&self, x: &PhasePoint) -> Result<f64> {
        self.check(x)?;
        let (q, p, i) = (x.q(), x.p(), self.site);
        let f = MomentumFrame::for_chart(self.chart, self.kappa);
        let s = dot(q, q);
        let qp = dot(q, p);
        let big_p = p[i] * (1.0 - f.a * s) + f.c * qp * q[i];
        let m = self.mass;
        let w2 = self.omega * self.omega;
        let qi2 = q[i] * q[i];
        let centrifugal = |scale: f64| if self.b_tilde != 0.0 { m * self.b_tilde * scale / qi2 } else { 0.0 };
        let potential = match self.chart {
            Some(Chart::Poincare) => {
                let d = 1.0 - self.kappa * s;
                8.0 * m * w2 * qi2 / (d * d) + centrifugal(d * d)
            }
            _ => 2.0 * m * w2 * qi2 + centrifugal(1.0),
        };
        Ok(big_p * big_p + potential)
    }

    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        self.check(x)?;
        let (q, p, i, n) = (x.q(), x.p(), self.site, x.dim());
        let f = MomentumFrame::for_chart(self.chart, self.kappa);
        let s = dot(q, q);
        let qp = dot(q, p);
        let alpha = 1.0 - f.a * s;
        let big_p = p[i] * alpha + f.c * qp * q[i];
        let m = self.mass;
        let w2 = self.omega * self.omega;
        let bt = self.b_tilde;
        let mut g = PhaseGradient::zeros(n);
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            let dpq = -2.0 * f.a * p[i] * q[j] + f.c * (p[j] * q[i] + qp * delta);
            let dpp = alpha * delta + f.c * q[j] * q[i];
            g.dq[j] = 2.0 * big_p * dpq;
            g.dp[j] = 2.0 * big_p * dpp;
        }
        match self.chart {
            Some(Chart::Poincare) => {
                let d = 1.0 - self.kappa * s;
                let qi2 = q[i] * q[i];
                for j in 0..n {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    g.dq[j] += 8.0 * m * w2 * (2.0 * q[i] * delta / (d * d) + 4.0 * self.kappa * qi2 * q[j] / (d * d * d));
                    if bt != 0.0 {
                        g.dq[j] += m * bt * (-4.0 * self.kappa * d * q[j] / qi2 - 2.0 * d * d * delta / (qi2 * q[i]));
                    }
                }
            }
            _ => {
                g.dq[i] += 4.0 * m * w2 * q[i];
                if bt != 0.0 {
                    g.dq[i] -= 2.0 * m * bt / (q[i] * q[i] * q[i]);
                }
            }
        }
        Ok(g)
    }
}

#[derive(Clone, Debug)]
struct KcExtra {
    site: usize,
    mass: f64,
    k: f64,
    b_tilde: Vec<f64>,
    kappa: f64,
    chart: Option<Chart>,
}

impl KcExtra {
    fn check(&self, x: &PhasePoint) -> Result<()> {
        if x.dim() != self.b_tilde.len() {
            return Err(Error::DimensionMismatch {
                expected: self.b_tilde.len(),
                found: x.dim(),
            });
        }
        if dot(x.q(), x.q()).sqrt() < CENTRIFUGAL_DOMAIN_RADIUS {
            return Err(domain("q = 0 is the Coulomb singularity"));
        }
        for (l, (&bt, &ql)) in self.b_tilde.iter().zip(x.q()).enumerate() {
            if l != self.site && bt != 0.0 && ql.abs() < CENTRIFUGAL_DOMAIN_RADIUS {
                return Err(domain(format!("q_{} = 0 on a centrifugal site", l + 1)));
            }
        }
        Ok(())
    }

    /// `(c, gamma, gamma')`: Coulomb prefactor and the centrifugal factor
    /// `gamma(q^2)` with its derivative.
    fn factors(&self, s: f64) -> (f64, f64, f64) {
        match self.chart {
            Some(Chart::Poincare) => (0.5, 1.0 - self.kappa * s, -self.kappa),
            _ => (1.0, 1.0, 0.0),
        }
    }

    fn centrifugal_sum(&self, q: &[f64]) -> f64 {
        self.b_tilde
            .iter()
            .zip(q)
            .enumerate()
            .filter(|&(l, (&bt, _))| l != self.site && bt != 0.0)
            .map(|(_, (bt, ql))| bt / (ql * ql))
            .sum()
    }
}

impl PhaseFunction for KcExtra {
    fn value(&self, x: &PhasePoint) -> Result<f64> {
        self.check(x)?;
        let (q, p, i) = (x.q(), x.p(), self.site);
        let f = MomentumFrame::for_chart(self.chart, self.kappa);
        let s = dot(q, q);
        let qp = dot(q, p);
        let alpha = 1.0 - f.a * s;
        let mut sum = 0.0;
        for l in 0..q.len() {
            let big_p = p[l] * alpha + f.c * qp * q[l];
            sum += big_p * (q[l] * p[i] - q[i] * p[l]);
        }
        let (c, gamma, _) = self.factors(s);
        let r = s.sqrt();
        Ok(sum + c * self.k * self.mass * q[i] / r - self.mass * gamma * q[i] * self.centrifugal_sum(q))
    }

    fn gradient(&self, x: &PhasePoint) -> Result<PhaseGradient> {
        self.check(x)?;
        let (q, p, i, n) = (x.q(), x.p(), self.site, x.dim());
        let f = MomentumFrame::for_chart(self.chart, self.kappa);
        let s = dot(q, q);
        let qp = dot(q, p);
        let p2 = dot(p, p);
        let alpha = 1.0 - f.a * s;
        let big_p: Vec<f64> = (0..n).map(|l| p[l] * alpha + f.c * qp * q[l]).collect();
        let w: Vec<f64> = (0..n).map(|l| q[l] * p[i] - q[i] * p[l]).collect();
        // sum_l p_l W_l, sum_l q_l W_l, sum_l P_l p_l, sum_l P_l q_l
        let sp = qp * p[i] - q[i] * p2;
        let sq = s * p[i] - q[i] * qp;
        let pp = dot(&big_p, p);
        let pq = dot(&big_p, q);
        let (c, gamma, dgamma) = self.factors(s);
        let r = s.sqrt();
        let t = self.centrifugal_sum(q);
        let (m, k) = (self.mass, self.k);
        let mut g = PhaseGradient::zeros(n);
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            let mut dq = -2.0 * f.a * q[j] * sp + f.c * p[j] * sq + f.c * qp * w[j];
            dq += big_p[j] * p[i] - delta * pp;
            dq += c * k * m * (delta / r - q[i] * q[j] / (r * r * r));
            let dt = if j != i && self.b_tilde[j] != 0.0 {
                -2.0 * self.b_tilde[j] / (q[j] * q[j] * q[j])
            } else {
                0.0
            };
            dq -= m * (dgamma * 2.0 * q[j] * q[i] * t + gamma * delta * t + gamma * q[i] * dt);
            let mut dp = alpha * w[j] + f.c * q[j] * sq;
            dp += delta * pq - big_p[j] * q[i];
            g.dq[j] = dq;
            g.dp[j] = dp;
        }
        Ok(g)
    }
}

fn extra_name(base: &str, chart: Option<Chart>, site: usize) -> String {
    match chart {
        None => format!("{base}_{site}"),
        Some(Chart::Poincare) => format!("{base}^P_{site}"),
        Some(Chart::Beltrami) => format!("{base}^B_{site}"),
    }
}

fn sw_extra(site: usize, params: &SystemParams, chart: Option<Chart>) -> Result<ConservedQuantity> {
    let n = params.b_tilde.len();
    let idx = check_site(site, n)?;
    params.check_mass()?;
    Ok(ConservedQuantity::new(
        extra_name("I", chart, site),
        SwExtra {
            site: idx,
            n,
            mass: params.mass,
            omega: params.omega,
            b_tilde: params.b_tilde[idx],
            kappa: if chart.is_some() { params.kappa } else { 0.0 },
            chart,
        },
    ))
}

/// Flat `I_i = p_i^2 + 2 m w^2 q_i^2 + m bt_i / q_i^2` (1-based `site`).
pub fn sw_extra_integral(site: usize, params: &SystemParams) -> Result<ConservedQuantity> {
    sw_extra(site, params, None)
}

/// Curved `I^P_i` or `I^B_i` at curvature `params.kappa`.
pub fn curved_sw_extra_integral(site: usize, params: &SystemParams, chart: Chart) -> Result<ConservedQuantity> {
    sw_extra(site, params, Some(chart))
}

fn kc_extra(site: usize, params: &SystemParams, chart: Option<Chart>, checked: bool) -> Result<ConservedQuantity> {
    let n = params.b_tilde.len();
    let idx = check_site(site, n)?;
    params.check_mass()?;
    if checked && params.b_tilde[idx] != 0.0 {
        return Err(Error::Config(format!(
            "L_{site} is an integral only when bt_{site} = 0 (got {})",
            params.b_tilde[idx]
        )));
    }
    Ok(ConservedQuantity::new(
        extra_name("L", chart, site),
        KcExtra {
            site: idx,
            mass: params.mass,
            k: params.k,
            b_tilde: params.b_tilde.clone(),
            kappa: if chart.is_some() { params.kappa } else { 0.0 },
            chart,
        },
    ))
}

/// Flat Laplace-Runge-Lenz-type `L_i`; requires `bt_i = 0`.
pub fn kc_extra_integral(site: usize, params: &SystemParams) -> Result<ConservedQuantity> {
    kc_extra(site, params, None, true)
}

/// Curved `L^P_i` or `L^B_i`; requires `bt_i = 0`.
pub fn curved_kc_extra_integral(site: usize, params: &SystemParams, chart: Chart) -> Result<ConservedQuantity> {
    kc_extra(site, params, Some(chart), true)
}

/// `L_i` (flat when `chart` is `None`) built without the `bt_i = 0` check.
/// Only meaningful as a mutation probe: with `bt_i != 0` it is not conserved.
pub fn kc_extra_integral_unchecked(site: usize, params: &SystemParams, chart: Option<Chart>) -> Result<ConservedQuantity> {
    kc_extra(site, params, chart, false)
}
