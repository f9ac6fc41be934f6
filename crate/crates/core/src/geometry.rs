//! Constant-curvature geometry.
//!
//! The sphere (`kappa > 0`), Euclidean space (`kappa = 0`) and hyperbolic
//! space (`kappa < 0`) are handled by one code path: ambient Weierstrass
//! coordinates `(x0, x)` on `x0^2 + kappa x^2 = 1`, the stereographic
//! (Poincare) chart `y` with pole `(-1, 0)` and the central (Beltrami) chart
//! `z` with pole `(0, 0)`.
//!
//! For `kappa > 0` everything lives on the `x0 > 0` hemisphere.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::phase::PhasePoint;
use crate::realization::{Generators, Sl2Realization};

/// Tolerance on the ambient constraint `x0^2 + kappa x^2 = 1`.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// Hard chart-boundary radius: closer than this to a chart singularity is a
/// domain error.
pub const CHART_DOMAIN_RADIUS: f64 = 1e-10;

/// Sectional curvature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curvature(pub f64);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Sphere,
    Euclidean,
    Hyperbolic,
}

impl Curvature {
    pub fn new(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(domain("curvature must be finite"));
        }
        Ok(Self(kappa))
    }

    pub fn kind(self) -> SpaceKind {
        if self.0 > 0.0 {
            SpaceKind::Sphere
        } else if self.0 < 0.0 {
            SpaceKind::Hyperbolic
        } else {
            SpaceKind::Euclidean
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Poincare,
    Beltrami,
}

/// The configuration space a Hamiltonian's kinetic term lives on, together
/// with the chart its canonical coordinates refer to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Space {
    Euclidean,
    Poincare { kappa: f64 },
    Beltrami { kappa: f64 },
}

impl Space {
    pub fn curved(chart: Chart, kappa: f64) -> Self {
        match chart {
            Chart::Poincare => Space::Poincare { kappa },
            Chart::Beltrami => Space::Beltrami { kappa },
        }
    }

    pub fn kappa(&self) -> f64 {
        match *self {
            Space::Euclidean => 0.0,
            Space::Poincare { kappa } | Space::Beltrami { kappa } => kappa,
        }
    }

    pub fn chart(&self) -> Option<Chart> {
        match self {
            Space::Euclidean => None,
            Space::Poincare { .. } => Some(Chart::Poincare),
            Space::Beltrami { .. } => Some(Chart::Beltrami),
        }
    }

    /// Rejects generator values outside the chart's domain.
    pub fn check_chart(&self, s: f64) -> Result<()> {
        let kappa = self.kappa();
        match self {
            Space::Poincare { .. } | Space::Beltrami { .. } if kappa < 0.0 => {
                if 1.0 + kappa * s <= CHART_DOMAIN_RADIUS {
                    return Err(domain(format!("1 + kappa q^2 = {} outside the chart", 1.0 + kappa * s)));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Signed distance (in `kappa q^2` units) to the chart boundary, or to
    /// the equator on the sphere: `1 - k y^2` for Poincare and
    /// `x0 = 1/sqrt(1 + k z^2)` for Beltrami. Negative once crossed.
    pub fn chart_clearance(&self, s: f64) -> f64 {
        match *self {
            Space::Euclidean => f64::INFINITY,
            Space::Poincare { kappa } if kappa > 0.0 => 1.0 - kappa * s,
            Space::Beltrami { kappa } if kappa > 0.0 => 1.0 / (1.0 + kappa * s).sqrt(),
            Space::Poincare { kappa } | Space::Beltrami { kappa } if kappa < 0.0 => 1.0 + kappa * s,
            _ => f64::INFINITY,
        }
    }

    /// Kinetic energy as a function of the generators and its partials.
    ///
    /// ```text
    /// Euclidean: J+ / 2m
    /// Poincare:  (1 + k J-)^2 J+ / 2m
    /// Beltrami:  (1 + k J-)(J+ + k J3^2) / 2m
    /// ```
    pub fn kinetic(&self, mass: f64, xi: &Generators) -> Result<(f64, [f64; 3])> {
        self.check_chart(xi.minus)?;
        let inv2m = 0.5 / mass;
        Ok(match *self {
            Space::Euclidean => (xi.plus * inv2m, [0.0, inv2m, 0.0]),
            Space::Poincare { kappa } => {
                let a = 1.0 + kappa * xi.minus;
                (
                    a * a * xi.plus * inv2m,
                    [2.0 * kappa * a * xi.plus * inv2m, a * a * inv2m, 0.0],
                )
            }
            Space::Beltrami { kappa } => {
                let a = 1.0 + kappa * xi.minus;
                let w = xi.plus + kappa * xi.three * xi.three;
                (
                    a * w * inv2m,
                    [kappa * w * inv2m, a * inv2m, 2.0 * a * kappa * xi.three * inv2m],
                )
            }
        })
    }
}

/// A point `(x0, x)` of the ambient space on the constraint surface.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientPoint {
    pub x0: f64,
    pub x: Vec<f64>,
}

impl AmbientPoint {
    /// `x0^2 + kappa x^2 - 1`.
    pub fn constraint_residual(&self, kappa: f64) -> f64 {
        self.x0 * self.x0 + kappa * dot(&self.x, &self.x) - 1.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    pub chart: Chart,
    pub coords: Vec<f64>,
}

impl ChartPoint {
    pub fn poincare(y: Vec<f64>) -> Self {
        Self {
            chart: Chart::Poincare,
            coords: y,
        }
    }

    pub fn beltrami(z: Vec<f64>) -> Self {
        Self {
            chart: Chart::Beltrami,
            coords: z,
        }
    }
}

/// Any of the three coordinate representations of a point.
#[derive(Clone, Debug, PartialEq)]
pub enum GeoPoint {
    Chart(ChartPoint),
    Ambient(AmbientPoint),
}

impl From<ChartPoint> for GeoPoint {
    fn from(p: ChartPoint) -> Self {
        GeoPoint::Chart(p)
    }
}

impl From<AmbientPoint> for GeoPoint {
    fn from(p: AmbientPoint) -> Self {
        GeoPoint::Ambient(p)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_same_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// Stereographic projection: `x0 = (1 - k y^2)/(1 + k y^2)`, `x = 2y/(1 + k y^2)`.
pub fn poincare_to_ambient(y: &[f64], kappa: f64) -> Result<AmbientPoint> {
    let den = 1.0 + kappa * dot(y, y);
    if den.abs() < CHART_DOMAIN_RADIUS {
        return Err(domain("1 + kappa y^2 = 0: Poincare chart boundary"));
    }
    let lambda = 2.0 / den;
    Ok(AmbientPoint {
        x0: lambda - 1.0,
        x: y.iter().map(|v| lambda * v).collect(),
    })
}

/// Central projection: `x0 = 1/sqrt(1 + k z^2)`, `x = z x0`.
pub fn beltrami_to_ambient(z: &[f64], kappa: f64) -> Result<AmbientPoint> {
    let s = 1.0 + kappa * dot(z, z);
    if s <= CHART_DOMAIN_RADIUS {
        return Err(domain("1 + kappa z^2 <= 0: outside the Beltrami chart"));
    }
    let mu = 1.0 / s.sqrt();
    Ok(AmbientPoint {
        x0: mu,
        x: z.iter().map(|v| mu * v).collect(),
    })
}

pub fn chart_to_ambient(p: &ChartPoint, kappa: f64) -> Result<AmbientPoint> {
    match p.chart {
        Chart::Poincare => poincare_to_ambient(&p.coords, kappa),
        Chart::Beltrami => beltrami_to_ambient(&p.coords, kappa),
    }
}

/// Inverse projections: `y = x/(1 + x0)`, `z = x/x0`.
pub fn ambient_to_chart(a: &AmbientPoint, chart: Chart, _kappa: f64) -> Result<ChartPoint> {
    match chart {
        Chart::Poincare => {
            let den = 1.0 + a.x0;
            if den.abs() < CHART_DOMAIN_RADIUS {
                return Err(domain("x0 = -1 is the stereographic pole"));
            }
            Ok(ChartPoint::poincare(a.x.iter().map(|v| v / den).collect()))
        }
        Chart::Beltrami => {
            if a.x0 <= CHART_DOMAIN_RADIUS {
                return Err(domain("x0 <= 0 is not covered by the Beltrami chart"));
            }
            Ok(ChartPoint::beltrami(a.x.iter().map(|v| v / a.x0).collect()))
        }
    }
}

/// `z = 2y / (1 - k y^2)`.
pub fn poincare_to_beltrami(y: &[f64], kappa: f64) -> Result<Vec<f64>> {
    let den = 1.0 - kappa * dot(y, y);
    if den <= CHART_DOMAIN_RADIUS {
        return Err(domain("1 - kappa y^2 <= 0: equator or beyond"));
    }
    Ok(y.iter().map(|v| 2.0 * v / den).collect())
}

/// Inverse of the "curvature-dependent tangent": solves
/// `tan(sqrt(k) r)/sqrt(k) = rho` for `r`, with `tanh` for `k < 0`.
fn radius_from_tangent(rho: f64, kappa: f64) -> Result<f64> {
    let u2 = kappa.abs() * rho * rho;
    if u2 < 1e-8 {
        // atan / atanh series in u^2 = |k| rho^2, signs folded into kappa
        let t = kappa * rho * rho;
        return Ok(rho * (1.0 - t / 3.0 + t * t / 5.0 - t * t * t / 7.0));
    }
    let sk = kappa.abs().sqrt();
    if kappa > 0.0 {
        Ok((sk * rho).atan() / sk)
    } else {
        let u = sk * rho;
        if u >= 1.0 {
            return Err(domain("point at or beyond the hyperbolic ideal boundary"));
        }
        Ok(u.atanh() / sk)
    }
}

/// Geodesic polar distance from the origin `(1, 0)`.
pub fn geodesic_distance(point: &GeoPoint, kappa: f64) -> Result<f64> {
    let rho = match point {
        GeoPoint::Ambient(a) => {
            if a.x0 <= CHART_DOMAIN_RADIUS {
                return Err(domain("x0 <= 0: distance formula needs the x0 > 0 hemisphere"));
            }
            dot(&a.x, &a.x).sqrt() / a.x0
        }
        GeoPoint::Chart(c) => match c.chart {
            Chart::Poincare => {
                let y2 = dot(&c.coords, &c.coords);
                let den = 1.0 - kappa * y2;
                if den <= CHART_DOMAIN_RADIUS {
                    return Err(domain("1 - kappa y^2 <= 0: equator or beyond"));
                }
                2.0 * y2.sqrt() / den
            }
            Chart::Beltrami => {
                if 1.0 + kappa * dot(&c.coords, &c.coords) <= CHART_DOMAIN_RADIUS {
                    return Err(domain("outside the Beltrami chart"));
                }
                dot(&c.coords, &c.coords).sqrt()
            }
        },
    };
    radius_from_tangent(rho, kappa)
}

/// Kinetic energy through the generators (curved centrifugal terms come from
/// the realization's `b`).
pub fn kinetic_energy(space: Space, mass: f64, realization: &Sl2Realization, x: &PhasePoint) -> Result<f64> {
    if mass <= 0.0 {
        return Err(Error::Config("mass must be positive".into()));
    }
    let xi = realization.generators(x)?;
    Ok(space.kinetic(mass, &xi)?.0)
}

/// Momenta conjugate to the chart coordinates for the free Lagrangian.
pub fn conjugate_momenta(chart: Chart, kappa: f64, mass: f64, pos: &[f64], vel: &[f64]) -> Result<Vec<f64>> {
    check_same_len(pos, vel)?;
    let s = 1.0 + kappa * dot(pos, pos);
    match chart {
        Chart::Poincare => {
            if s.abs() < CHART_DOMAIN_RADIUS {
                return Err(domain("1 + kappa y^2 = 0"));
            }
            let f = mass / (s * s);
            Ok(vel.iter().map(|v| f * v).collect())
        }
        Chart::Beltrami => {
            if s <= CHART_DOMAIN_RADIUS {
                return Err(domain("1 + kappa z^2 <= 0"));
            }
            let zv = dot(pos, vel);
            Ok(vel
                .iter()
                .zip(pos)
                .map(|(v, z)| mass * (s * v - kappa * zv * z) / (s * s))
                .collect())
        }
    }
}

/// Free Lagrangians written in chart velocities.
pub fn free_lagrangian(chart: Chart, kappa: f64, mass: f64, pos: &[f64], vel: &[f64]) -> Result<f64> {
    check_same_len(pos, vel)?;
    let s = 1.0 + kappa * dot(pos, pos);
    if s.abs() < CHART_DOMAIN_RADIUS || (chart == Chart::Beltrami && s <= 0.0) {
        return Err(domain("chart singularity"));
    }
    let v2 = dot(vel, vel);
    Ok(match chart {
        Chart::Poincare => mass * v2 / (2.0 * s * s),
        Chart::Beltrami => {
            let zv = dot(pos, vel);
            0.5 * mass * (s * v2 - kappa * zv * zv) / (s * s)
        }
    })
}

/// The metric quadratic form `ds^2(pos)[vel, vel]`.
pub fn metric_form(chart: Chart, kappa: f64, pos: &[f64], vel: &[f64]) -> Result<f64> {
    check_same_len(pos, vel)?;
    let s = 1.0 + kappa * dot(pos, pos);
    if s.abs() < CHART_DOMAIN_RADIUS || (chart == Chart::Beltrami && s <= 0.0) {
        return Err(domain("chart singularity"));
    }
    let v2 = dot(vel, vel);
    Ok(match chart {
        Chart::Poincare => 4.0 * v2 / (s * s),
        Chart::Beltrami => {
            let zv = dot(pos, vel);
            (s * v2 - kappa * zv * zv) / (s * s)
        }
    })
}

/// Curved centrifugal potential in ambient form:
/// `2 sum bt_i / x_i^2` (Poincare) or `sum bt_i / (2 x_i^2)` (Beltrami).
pub fn centrifugal_ambient(b_tilde: &[f64], a: &AmbientPoint, chart: Chart) -> Result<f64> {
    check_same_len(b_tilde, &a.x)?;
    let mut sum = 0.0;
    for (i, (&bt, &xi)) in b_tilde.iter().zip(&a.x).enumerate() {
        if bt == 0.0 {
            continue;
        }
        if xi.abs() < CHART_DOMAIN_RADIUS {
            return Err(domain(format!("x_{} = 0 on a centrifugal site", i + 1)));
        }
        sum += bt / (xi * xi);
    }
    Ok(match chart {
        Chart::Poincare => 2.0 * sum,
        Chart::Beltrami => 0.5 * sum,
    })
}

/// The same centrifugal potential written in chart coordinates:
/// `sum bt_i (1 + k y^2)^2 / (2 y_i^2)` or `sum bt_i (1 + k z^2) / (2 z_i^2)`.
pub fn centrifugal_chart(b_tilde: &[f64], chart: Chart, kappa: f64, pos: &[f64]) -> Result<f64> {
    check_same_len(b_tilde, pos)?;
    let s = 1.0 + kappa * dot(pos, pos);
    let factor = match chart {
        Chart::Poincare => s * s,
        Chart::Beltrami => s,
    };
    let mut sum = 0.0;
    for (i, (&bt, &qi)) in b_tilde.iter().zip(pos).enumerate() {
        if bt == 0.0 {
            continue;
        }
        if qi.abs() < CHART_DOMAIN_RADIUS {
            return Err(domain(format!("coordinate {} vanishes on a centrifugal site", i + 1)));
        }
        sum += bt / (2.0 * qi * qi);
    }
    Ok(factor * sum)
}
