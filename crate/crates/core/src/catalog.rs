//! Named members of the family: Evans, Smorodinsky-Winternitz, Garnier and
//! higher even-order oscillators, generalized Kepler-Coulomb,
//! electromagnetic and variable-mass Hamiltonians.
//!
//! Constructors take the physical centrifugal constants `bt_i` and store
//! `b_i = m bt_i` in the realization.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{Chart, Space};
use crate::hamiltonian::{HamiltonianForm, HamiltonianSpec, Polynomial, Power, ScalarProfile};
use crate::integrals::{curved_kc_extra_integral, curved_sw_extra_integral, kc_extra_integral, sw_extra_integral};
use crate::observable::ConservedQuantity;
use crate::realization::{Generators, Sl2Realization};

/// Physical parameters shared by the catalog constructors. Fields a family
/// does not use are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    pub mass: f64,
    pub omega: f64,
    pub kappa: f64,
    pub delta: f64,
    pub deltas: Vec<f64>,
    pub k: f64,
    pub charge: f64,
    pub b_tilde: Vec<f64>,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            omega: 0.0,
            kappa: 0.0,
            delta: 0.0,
            deltas: Vec::new(),
            k: 0.0,
            charge: 1.0,
            b_tilde: Vec::new(),
        }
    }
}

impl SystemParams {
    pub fn dim(&self) -> usize {
        self.b_tilde.len()
    }

    pub(crate) fn check_mass(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::Config(format!("mass must be positive, got {}", self.mass)));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        self.check_mass()?;
        if self.b_tilde.len() < 2 {
            return Err(Error::Config(format!(
                "need N >= 2 centrifugal constants, got {}",
                self.b_tilde.len()
            )));
        }
        let all = [self.omega, self.kappa, self.delta, self.k, self.charge];
        if all.iter().chain(&self.deltas).chain(&self.b_tilde).any(|v| !v.is_finite()) {
            return Err(Error::Config("parameters must be finite".into()));
        }
        Ok(())
    }

    fn realization(&self) -> Result<Sl2Realization> {
        Sl2Realization::new(self.b_tilde.iter().map(|bt| self.mass * bt).collect())
    }

    fn record(&self, space: Space) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        m.insert("m".to_string(), self.mass);
        m.insert("kappa".to_string(), space.kappa());
        for (i, bt) in self.b_tilde.iter().enumerate() {
            m.insert(format!("b_tilde_{}", i + 1), *bt);
        }
        m
    }
}

/// `F(4 s / (1 - k s)^2)`: a radial profile moved to the Poincare chart.
#[derive(Debug)]
pub struct PoincareLift {
    pub kappa: f64,
    pub inner: Arc<dyn ScalarProfile>,
}

impl ScalarProfile for PoincareLift {
    fn eval(&self, s: f64) -> Result<(f64, f64)> {
        let d = 1.0 - self.kappa * s;
        if d.abs() < 1e-10 {
            return Err(domain("1 - kappa q^2 = 0 in a Poincare potential"));
        }
        let arg = 4.0 * s / (d * d);
        let darg = 4.0 * (1.0 + self.kappa * s) / (d * d * d);
        let (v, dv) = self.inner.eval(arg)?;
        Ok((v, dv * darg))
    }

    fn singularity_distance(&self, s: f64) -> f64 {
        let d = 1.0 - self.kappa * s;
        let inner = if d != 0.0 {
            self.inner.singularity_distance(4.0 * s / (d * d))
        } else {
            0.0
        };
        d.abs().min(inner)
    }
}

/// `-k (1 - kappa s) / (2 sqrt(s))`, the Poincare-chart Coulomb potential.
#[derive(Clone, Debug)]
pub struct PoincareKepler {
    pub k: f64,
    pub kappa: f64,
}

impl ScalarProfile for PoincareKepler {
    fn eval(&self, s: f64) -> Result<(f64, f64)> {
        if s < 1e-20 {
            return Err(domain("q = 0 is the Coulomb singularity"));
        }
        let r = s.sqrt();
        let v = -self.k * (1.0 - self.kappa * s) / (2.0 * r);
        let d = self.k * (self.kappa / (2.0 * r) + (1.0 - self.kappa * s) / (4.0 * s * r));
        Ok((v, d))
    }

    fn singularity_distance(&self, s: f64) -> f64 {
        s.max(0.0).sqrt()
    }
}

/// Kinetic energy of a space plus a potential depending on `J-` only.
#[derive(Debug)]
pub struct NaturalForm {
    pub space: Space,
    pub mass: f64,
    pub potential: Arc<dyn ScalarProfile>,
}

impl HamiltonianForm for NaturalForm {
    fn value(&self, xi: &Generators) -> Result<f64> {
        let (t, _) = self.space.kinetic(self.mass, xi)?;
        Ok(t + self.potential.eval(xi.minus)?.0)
    }

    fn partials(&self, xi: &Generators) -> Result<[f64; 3]> {
        let (_, mut d) = self.space.kinetic(self.mass, xi)?;
        d[0] += self.potential.eval(xi.minus)?.1;
        Ok(d)
    }

    fn guard_distance(&self, xi: &Generators) -> f64 {
        self.space
            .chart_clearance(xi.minus)
            .min(self.potential.singularity_distance(xi.minus))
    }
}

/// `J+/2m - (e/m) J3 G(J-) + e F(J-)`.
#[derive(Debug)]
pub struct ElectromagneticForm {
    pub mass: f64,
    pub charge: f64,
    pub scalar: Arc<dyn ScalarProfile>,
    pub vector: Arc<dyn ScalarProfile>,
}

impl HamiltonianForm for ElectromagneticForm {
    fn value(&self, xi: &Generators) -> Result<f64> {
        let (f, _) = self.scalar.eval(xi.minus)?;
        let (g, _) = self.vector.eval(xi.minus)?;
        let (m, e) = (self.mass, self.charge);
        Ok(xi.plus / (2.0 * m) - e / m * xi.three * g + e * f)
    }

    fn partials(&self, xi: &Generators) -> Result<[f64; 3]> {
        let (_, df) = self.scalar.eval(xi.minus)?;
        let (g, dg) = self.vector.eval(xi.minus)?;
        let (m, e) = (self.mass, self.charge);
        Ok([-e / m * xi.three * dg + e * df, 0.5 / m, -e / m * g])
    }

    fn guard_distance(&self, xi: &Generators) -> f64 {
        self.scalar
            .singularity_distance(xi.minus)
            .min(self.vector.singularity_distance(xi.minus))
    }
}

/// `J+ / (2 M(J-)) + F(J-)`.
#[derive(Debug)]
pub struct VariableMassForm {
    pub mass_fn: Arc<dyn ScalarProfile>,
    pub potential: Arc<dyn ScalarProfile>,
}

impl VariableMassForm {
    fn mass_at(&self, s: f64) -> Result<(f64, f64)> {
        let (mv, dm) = self.mass_fn.eval(s)?;
        if mv <= 0.0 {
            return Err(domain(format!("position-dependent mass M({s}) = {mv} is not positive")));
        }
        Ok((mv, dm))
    }
}

impl HamiltonianForm for VariableMassForm {
    fn value(&self, xi: &Generators) -> Result<f64> {
        let (mv, _) = self.mass_at(xi.minus)?;
        Ok(xi.plus / (2.0 * mv) + self.potential.eval(xi.minus)?.0)
    }

    fn partials(&self, xi: &Generators) -> Result<[f64; 3]> {
        let (mv, dm) = self.mass_at(xi.minus)?;
        let (_, df) = self.potential.eval(xi.minus)?;
        Ok([-xi.plus * dm / (2.0 * mv * mv) + df, 0.5 / mv, 0.0])
    }

    fn guard_distance(&self, xi: &Generators) -> f64 {
        let m = self.mass_fn.eval(xi.minus).map(|(v, _)| v).unwrap_or(0.0);
        m.min(self.potential.singularity_distance(xi.minus))
    }
}

fn space_label(space: Space) -> &'static str {
    match space {
        Space::Euclidean => "euclidean",
        Space::Poincare { .. } => "poincare",
        Space::Beltrami { .. } => "beltrami",
    }
}

fn natural(
    family: &str,
    space: Space,
    params: &SystemParams,
    radial: Arc<dyn ScalarProfile>,
    mut record: BTreeMap<String, f64>,
) -> Result<HamiltonianSpec> {
    params.validate()?;
    let potential: Arc<dyn ScalarProfile> = match space {
        Space::Poincare { kappa } => Arc::new(PoincareLift { kappa, inner: radial }),
        _ => radial,
    };
    record.extend(params.record(space));
    Ok(HamiltonianSpec::new(
        format!("{family}/{}", space_label(space)),
        record,
        params.realization()?,
        Arc::new(NaturalForm {
            space,
            mass: params.mass,
            potential,
        }),
    ))
}

/// Evans system: kinetic energy of `space` plus the caller's radial
/// profile `F` (lifted to `F(4 J-/(1 - k J-)^2)` on the Poincare chart).
pub fn make_evans(space: Space, params: &SystemParams, radial: Arc<dyn ScalarProfile>) -> Result<HamiltonianSpec> {
    natural("evans", space, params, radial, BTreeMap::new())
}

/// Smorodinsky-Winternitz: oscillator `w^2 J-` (Higgs oscillator when curved)
/// plus `N` centrifugal barriers.
pub fn make_sw(space: Space, params: &SystemParams) -> Result<HamiltonianSpec> {
    let w2 = params.omega * params.omega;
    let rec = BTreeMap::from([("omega".to_string(), params.omega)]);
    natural("smorodinsky_winternitz", space, params, Arc::new(Polynomial(vec![0.0, w2])), rec)
}

/// Degenerate Garnier system: `w^2 J- + delta J-^2`.
pub fn make_garnier(space: Space, params: &SystemParams) -> Result<HamiltonianSpec> {
    let w2 = params.omega * params.omega;
    let rec = BTreeMap::from([("omega".to_string(), params.omega), ("delta".to_string(), params.delta)]);
    natural("garnier", space, params, Arc::new(Polynomial(vec![0.0, w2, params.delta])), rec)
}

/// Even-order oscillator `w^2 J- + sum_k delta_k J-^{k+1}`, truncated at
/// `deltas.len()` terms.
pub fn make_nonlinear_oscillator(space: Space, params: &SystemParams, deltas: &[f64]) -> Result<HamiltonianSpec> {
    let mut coeffs = vec![0.0, params.omega * params.omega];
    coeffs.extend_from_slice(deltas);
    let mut rec = BTreeMap::from([("omega".to_string(), params.omega)]);
    for (k, d) in deltas.iter().enumerate() {
        rec.insert(format!("delta_{}", k + 1), *d);
    }
    natural("nonlinear_oscillator", space, params, Arc::new(Polynomial(coeffs)), rec)
}

/// Generalized Kepler-Coulomb: `-k J-^{-1/2}` (`-k (1 - k J-)/(2 sqrt J-)` on
/// the Poincare chart) plus `N` centrifugal barriers.
pub fn make_kepler_coulomb(space: Space, params: &SystemParams) -> Result<HamiltonianSpec> {
    params.validate()?;
    let potential: Arc<dyn ScalarProfile> = match space {
        Space::Poincare { kappa } => Arc::new(PoincareKepler { k: params.k, kappa }),
        _ => Arc::new(Power {
            coefficient: -params.k,
            exponent: -0.5,
        }),
    };
    let mut record = params.record(space);
    record.insert("k".to_string(), params.k);
    Ok(HamiltonianSpec::new(
        format!("kepler_coulomb/{}", space_label(space)),
        record,
        params.realization()?,
        Arc::new(NaturalForm {
            space,
            mass: params.mass,
            potential,
        }),
    ))
}

/// Charge in stationary fields: `J+/2m - (e/m) J3 G(J-) + e F(J-)` (Euclidean).
pub fn make_electromagnetic(
    params: &SystemParams,
    scalar: Arc<dyn ScalarProfile>,
    vector: Arc<dyn ScalarProfile>,
) -> Result<HamiltonianSpec> {
    params.validate()?;
    let mut record = params.record(Space::Euclidean);
    record.insert("e".to_string(), params.charge);
    Ok(HamiltonianSpec::new(
        "electromagnetic/euclidean",
        record,
        params.realization()?,
        Arc::new(ElectromagneticForm {
            mass: params.mass,
            charge: params.charge,
            scalar,
            vector,
        }),
    ))
}

/// Potentials and fields of the electromagnetic system for `N = 3`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmFields {
    /// `E = -grad psi`.
    pub electric: [f64; 3],
    /// `curl A`, identically zero for `A = q G(q^2)`.
    pub magnetic: [f64; 3],
    pub psi: f64,
    pub vector_potential: [f64; 3],
}

pub fn em_fields(
    params: &SystemParams,
    scalar: &dyn ScalarProfile,
    vector: &dyn ScalarProfile,
    q: &[f64],
) -> Result<EmFields> {
    if q.len() != 3 || params.b_tilde.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: q.len(),
        });
    }
    params.check_mass()?;
    let (m, e) = (params.mass, params.charge);
    let s: f64 = q.iter().map(|v| v * v).sum();
    let (f, df) = scalar.eval(s)?;
    let (g, dg) = vector.eval(s)?;
    let has_centrifugal = params.b_tilde.iter().any(|&b| b != 0.0);
    if has_centrifugal && e == 0.0 {
        return Err(domain("centrifugal part of psi needs a non-zero charge"));
    }
    let mut psi = f - e / (2.0 * m) * s * g * g;
    let radial = e / m * g * g + 2.0 * e / m * s * g * dg - 2.0 * df;
    let mut electric = [0.0; 3];
    for i in 0..3 {
        electric[i] = radial * q[i];
        let bt = params.b_tilde[i];
        if bt != 0.0 {
            if q[i].abs() < 1e-10 {
                return Err(domain(format!("q_{} = 0 on a centrifugal site", i + 1)));
            }
            psi += bt / (2.0 * e * q[i] * q[i]);
            electric[i] += bt / (e * q[i] * q[i] * q[i]);
        }
    }
    // curl(q G) = 2 G' (q x q) = 0
    Ok(EmFields {
        electric,
        magnetic: [0.0; 3],
        psi,
        vector_potential: [q[0] * g, q[1] * g, q[2] * g],
    })
}

/// Position-dependent mass: `J+ / (2 M(J-)) + F(J-)`. `params.mass` only
/// converts `bt_i` into `b_i`.
pub fn make_variable_mass(
    params: &SystemParams,
    mass_fn: Arc<dyn ScalarProfile>,
    potential: Arc<dyn ScalarProfile>,
) -> Result<HamiltonianSpec> {
    params.validate()?;
    Ok(HamiltonianSpec::new(
        "variable_mass/euclidean",
        params.record(Space::Euclidean),
        params.realization()?,
        Arc::new(VariableMassForm { mass_fn, potential }),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Evans,
    #[serde(alias = "sw")]
    SmorodinskyWinternitz,
    Garnier,
    NonlinearOscillator,
    #[serde(alias = "kc")]
    KeplerCoulomb,
    Electromagnetic,
    VariableMass,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Evans,
        Family::SmorodinskyWinternitz,
        Family::Garnier,
        Family::NonlinearOscillator,
        Family::KeplerCoulomb,
        Family::Electromagnetic,
        Family::VariableMass,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Family::Evans => "evans",
            Family::SmorodinskyWinternitz => "smorodinsky_winternitz",
            Family::Garnier => "garnier",
            Family::NonlinearOscillator => "nonlinear_oscillator",
            Family::KeplerCoulomb => "kepler_coulomb",
            Family::Electromagnetic => "electromagnetic",
            Family::VariableMass => "variable_mass",
        }
    }

    pub fn supports(self, space: SpaceChoice) -> bool {
        match self {
            Family::Electromagnetic | Family::VariableMass => space == SpaceChoice::Euclidean,
            _ => true,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceChoice {
    Euclidean,
    #[serde(alias = "curved_poincare")]
    Poincare,
    #[serde(alias = "curved_beltrami")]
    Beltrami,
}

impl SpaceChoice {
    pub fn key(self) -> &'static str {
        match self {
            SpaceChoice::Euclidean => "euclidean",
            SpaceChoice::Poincare => "poincare",
            SpaceChoice::Beltrami => "beltrami",
        }
    }

    pub fn with_kappa(self, kappa: f64) -> Space {
        match self {
            SpaceChoice::Euclidean => Space::Euclidean,
            SpaceChoice::Poincare => Space::Poincare { kappa },
            SpaceChoice::Beltrami => Space::Beltrami { kappa },
        }
    }
}

/// Polynomial coefficients (`c_0 + c_1 s + ...`) of the caller profiles
/// used by the Evans, electromagnetic and variable-mass families.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileCoefficients {
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub mass_fn: Vec<f64>,
}

/// A fully specified catalog system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemDescriptor {
    pub family: Family,
    pub space: SpaceChoice,
    pub params: SystemParams,
    pub profiles: ProfileCoefficients,
    /// 1-based sites whose extra integral should be checked.
    pub ms_flags: Vec<usize>,
}

/// Dimension-based naming of the coalgebra family.
pub fn terminology(n: usize, maximal: bool) -> &'static str {
    if maximal {
        return "maximally superintegrable";
    }
    match n {
        0..=2 => "integrable",
        3 => "minimally (weak) superintegrable",
        _ => "quasi-maximally superintegrable",
    }
}

impl SystemDescriptor {
    pub fn dim(&self) -> usize {
        self.params.b_tilde.len()
    }

    pub fn b_tilde(&self) -> &[f64] {
        &self.params.b_tilde
    }

    pub fn space(&self) -> Space {
        self.space.with_kappa(self.params.kappa)
    }

    /// Sites whose extra integral is a genuine constant of the motion.
    pub fn valid_extra_sites(&self) -> Vec<usize> {
        match self.family {
            Family::SmorodinskyWinternitz => (1..=self.dim()).collect(),
            Family::KeplerCoulomb => (1..=self.dim()).filter(|&i| self.params.b_tilde[i - 1] == 0.0).collect(),
            _ => Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !self.family.supports(self.space) {
            return Err(Error::Config(format!(
                "{} systems are only defined on Euclidean space",
                self.family
            )));
        }
        if self.space == SpaceChoice::Euclidean && self.params.kappa != 0.0 {
            return Err(Error::Config("kappa must be 0 for the euclidean space".into()));
        }
        let valid = self.valid_extra_sites();
        for &i in &self.ms_flags {
            if !(1..=self.dim()).contains(&i) {
                return Err(Error::Config(format!("extra integral index {i} outside 1..={}", self.dim())));
            }
            if !valid.contains(&i) {
                return Err(Error::Config(match self.family {
                    Family::KeplerCoulomb => format!(
                        "extra integral L_{i} requires b_tilde_{i} = 0 (got {})",
                        self.params.b_tilde[i - 1]
                    ),
                    f => format!("{f} systems have no extra integrals"),
                }));
            }
        }
        Ok(())
    }

    fn profile(coeffs: &[f64]) -> Arc<dyn ScalarProfile> {
        Arc::new(Polynomial(coeffs.to_vec()))
    }

    pub fn build(&self) -> Result<HamiltonianSpec> {
        self.validate()?;
        let space = self.space();
        let p = &self.params;
        match self.family {
            Family::Evans => make_evans(space, p, Self::profile(&self.profiles.f)),
            Family::SmorodinskyWinternitz => make_sw(space, p),
            Family::Garnier => make_garnier(space, p),
            Family::NonlinearOscillator => make_nonlinear_oscillator(space, p, &p.deltas),
            Family::KeplerCoulomb => make_kepler_coulomb(space, p),
            Family::Electromagnetic => {
                make_electromagnetic(p, Self::profile(&self.profiles.f), Self::profile(&self.profiles.g))
            }
            Family::VariableMass => {
                let mass = if self.profiles.mass_fn.is_empty() {
                    vec![p.mass]
                } else {
                    self.profiles.mass_fn.clone()
                };
                make_variable_mass(p, Self::profile(&mass), Self::profile(&self.profiles.f))
            }
        }
    }

    /// The extra integrals named by `ms_flags`.
    pub fn extra_integrals(&self) -> Result<Vec<ConservedQuantity>> {
        self.validate()?;
        let chart = self.space().chart();
        self.ms_flags
            .iter()
            .map(|&i| match (self.family, chart) {
                (Family::SmorodinskyWinternitz, None) => sw_extra_integral(i, &self.params),
                (Family::SmorodinskyWinternitz, Some(c)) => curved_sw_extra_integral(i, &self.params, c),
                (Family::KeplerCoulomb, None) => kc_extra_integral(i, &self.params),
                (Family::KeplerCoulomb, Some(c)) => curved_kc_extra_integral(i, &self.params, c),
                (f, _) => Err(Error::Config(format!("{f} systems have no extra integrals"))),
            })
            .collect()
    }
}

impl fmt::Display for SystemDescriptor {
    /// Canonical `key = value` rendering, one parameter per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(v: &[f64]) -> String {
            let items: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
            format!("[{}]", items.join(", "))
        }
        let p = &self.params;
        writeln!(f, "family = \"{}\"", self.family.key())?;
        writeln!(f, "space = \"{}\"", self.space.key())?;
        writeln!(f, "mass = {:?}", p.mass)?;
        writeln!(f, "omega = {:?}", p.omega)?;
        writeln!(f, "kappa = {:?}", p.kappa)?;
        writeln!(f, "delta = {:?}", p.delta)?;
        writeln!(f, "deltas = {}", list(&p.deltas))?;
        writeln!(f, "k = {:?}", p.k)?;
        writeln!(f, "charge = {:?}", p.charge)?;
        writeln!(f, "b_tilde = {}", list(&p.b_tilde))?;
        writeln!(f, "profile_f = {}", list(&self.profiles.f))?;
        writeln!(f, "profile_g = {}", list(&self.profiles.g))?;
        writeln!(f, "profile_mass = {}", list(&self.profiles.mass_fn))?;
        let flags: Vec<String> = self.ms_flags.iter().map(|i| i.to_string()).collect();
        writeln!(f, "extra_integrals = [{}]", flags.join(", "))
    }
}

/// One line of the catalog listing.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub family: Family,
    pub hamiltonian: &'static str,
    pub parameters: &'static str,
    pub spaces: &'static str,
    pub superintegrability: &'static str,
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            family: Family::Evans,
            hamiltonian: "J+/2m + F(J-)   (Poincare: T^P + F(4J-/(1-kJ-)^2), Beltrami: T^B + F(J-))",
            parameters: "mass, kappa, b_tilde, profile_f",
            spaces: "euclidean, poincare, beltrami",
            superintegrability: "quasi-maximally superintegrable for any radial profile F",
        },
        CatalogEntry {
            family: Family::SmorodinskyWinternitz,
            hamiltonian: "J+/2m + w^2 J-   (curved: Higgs oscillator plus centrifugal terms)",
            parameters: "mass, omega, kappa, b_tilde",
            spaces: "euclidean, poincare, beltrami",
            superintegrability: "maximally superintegrable for every b_tilde; N extra integrals I_1 .. I_N (I^P_i, I^B_i when curved)",
        },
        CatalogEntry {
            family: Family::Garnier,
            hamiltonian: "J+/2m + w^2 J- + delta J-^2",
            parameters: "mass, omega, delta, kappa, b_tilde",
            spaces: "euclidean, poincare, beltrami",
            superintegrability: "quasi-maximally superintegrable",
        },
        CatalogEntry {
            family: Family::NonlinearOscillator,
            hamiltonian: "J+/2m + w^2 J- + sum_k delta_k J-^(k+1)",
            parameters: "mass, omega, deltas, kappa, b_tilde",
            spaces: "euclidean, poincare, beltrami",
            superintegrability: "quasi-maximally superintegrable for any choice of the delta_k",
        },
        CatalogEntry {
            family: Family::KeplerCoulomb,
            hamiltonian: "J+/2m - k J-^(-1/2)   (Poincare: -k(1-kappa J-)/(2 sqrt J-))",
            parameters: "mass, k, kappa, b_tilde",
            spaces: "euclidean, poincare, beltrami",
            superintegrability: "maximally superintegrable when at least one b̃ᵢ = 0; extra integral L_i for each i with b̃ᵢ = 0",
        },
        CatalogEntry {
            family: Family::Electromagnetic,
            hamiltonian: "J+/2m - (e/m) J3 G(J-) + e F(J-)",
            parameters: "mass, charge, b_tilde, profile_f, profile_g",
            spaces: "euclidean",
            superintegrability: "quasi-maximally superintegrable; momentum-dependent potential",
        },
        CatalogEntry {
            family: Family::VariableMass,
            hamiltonian: "J+/(2 M(J-)) + F(J-)",
            parameters: "mass (b_tilde scale), b_tilde, profile_mass, profile_f",
            spaces: "euclidean",
            superintegrability: "quasi-maximally superintegrable; curved kinetic energies are special cases",
        },
    ]
}

/// Chart of a space, for callers that need the extra-integral variant.
pub fn chart_of(space: Space) -> Option<Chart> {
    space.chart()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::hamiltonian_value;
    use crate::phase::PhasePoint;
    use approx::assert_relative_eq;

    fn pt(q: &[f64], p: &[f64]) -> PhasePoint {
        PhasePoint::new(q.to_vec(), p.to_vec()).unwrap()
    }

    fn prm(b_tilde: &[f64]) -> SystemParams {
        SystemParams {
            mass: 1.0,
            omega: 1.0,
            k: 1.0,
            delta: 1.0,
            b_tilde: b_tilde.to_vec(),
            ..SystemParams::default()
        }
    }

    #[test]
    fn sw_euclidean_examples() {
        let h = make_sw(Space::Euclidean, &prm(&[1.0, 1.0])).unwrap();
        assert_eq!(hamiltonian_value(&h, &pt(&[1.0, 2.0], &[0.0, 0.0])).unwrap(), 5.625);
        let h0 = make_sw(Space::Euclidean, &prm(&[0.0, 0.0])).unwrap();
        assert_eq!(hamiltonian_value(&h0, &pt(&[1.0, 0.0], &[0.0, 0.0])).unwrap(), 1.0);
    }

    #[test]
    fn sw_curved_examples() {
        let mut p = prm(&[0.0, 0.0]);
        p.kappa = 1.0;
        let hb = make_sw(Space::Beltrami { kappa: 1.0 }, &p).unwrap();
        assert_eq!(hamiltonian_value(&hb, &pt(&[1.0, 0.0], &[0.0, 0.0])).unwrap(), 1.0);
        let hp = make_sw(Space::Poincare { kappa: 1.0 }, &p).unwrap();
        assert_relative_eq!(
            hamiltonian_value(&hp, &pt(&[0.5, 0.0], &[0.0, 0.0])).unwrap(),
            16.0 / 9.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn garnier_examples() {
        let mut p = prm(&[0.0, 0.0]);
        p.omega = 0.0;
        let h = make_garnier(Space::Euclidean, &p).unwrap();
        assert_eq!(hamiltonian_value(&h, &pt(&[1.0, 1.0], &[0.0, 0.0])).unwrap(), 4.0);

        // Poincare quartic term alone: 16 q^4 / (1 - q^2)^4 at q = (0.5, 0)
        let hp = make_garnier(Space::Poincare { kappa: 1.0 }, &p).unwrap();
        let v = hamiltonian_value(&hp, &pt(&[0.5, 0.0], &[0.0, 0.0])).unwrap();
        assert_relative_eq!(v, 16.0 * 0.0625 / 0.31640625, max_relative = 1e-14);
        assert_relative_eq!(v, 1.0 / 0.31640625, max_relative = 1e-14);
    }

    #[test]
    fn kepler_coulomb_examples() {
        let p = prm(&[0.0, 0.0]);
        let x = pt(&[1.0, 0.0], &[0.0, 0.0]);
        for space in [Space::Euclidean, Space::Beltrami { kappa: 1.0 }] {
            let h = make_kepler_coulomb(space, &p).unwrap();
            assert_eq!(hamiltonian_value(&h, &x).unwrap(), -1.0);
        }
        let hp = make_kepler_coulomb(Space::Poincare { kappa: 1.0 }, &p).unwrap();
        assert_eq!(hamiltonian_value(&hp, &pt(&[0.5, 0.0], &[0.0, 0.0])).unwrap(), -0.75);
        let h = make_kepler_coulomb(Space::Euclidean, &p).unwrap();
        assert!(matches!(hamiltonian_value(&h, &pt(&[0.0, 0.0], &[1.0, 0.0])), Err(Error::Domain(_))));
    }

    #[test]
    fn evans_with_zero_profile_is_free() {
        let h = make_evans(Space::Euclidean, &prm(&[0.0, 0.0]), Arc::new(Polynomial(vec![]))).unwrap();
        assert_eq!(hamiltonian_value(&h, &pt(&[0.3, 0.2], &[3.0, 4.0])).unwrap(), 12.5);
    }

    #[test]
    fn variable_mass_rejects_non_positive_mass() {
        let h = make_variable_mass(
            &prm(&[0.0, 0.0]),
            Arc::new(Polynomial(vec![1.0, -1.0])),
            Arc::new(Polynomial(vec![])),
        )
        .unwrap();
        assert!(hamiltonian_value(&h, &pt(&[0.5, 0.5], &[1.0, 0.0])).is_ok());
        assert!(matches!(hamiltonian_value(&h, &pt(&[1.0, 1.0], &[1.0, 0.0])), Err(Error::Domain(_))));
    }

    #[test]
    fn em_fields_pure_scalar() {
        let p = prm(&[0.0, 0.0, 0.0]);
        let q = [0.3, -0.5, 0.9];
        let fields = em_fields(&p, &Polynomial(vec![0.0, 1.0]), &Polynomial(vec![]), &q).unwrap();
        for i in 0..3 {
            assert_eq!(fields.electric[i], -2.0 * q[i]);
            assert_eq!(fields.magnetic[i], 0.0);
        }
        assert!(matches!(
            em_fields(&prm(&[0.0, 0.0]), &Polynomial(vec![]), &Polynomial(vec![]), &[1.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn descriptor_validation() {
        let mut d = SystemDescriptor {
            family: Family::KeplerCoulomb,
            space: SpaceChoice::Euclidean,
            params: prm(&[0.5, 0.0, 0.2]),
            profiles: ProfileCoefficients::default(),
            ms_flags: vec![2],
        };
        assert!(d.validate().is_ok());
        assert_eq!(d.valid_extra_sites(), vec![2]);
        d.ms_flags = vec![1];
        assert!(matches!(d.validate(), Err(Error::Config(_))));
        d.family = Family::Garnier;
        d.ms_flags = vec![2];
        assert!(matches!(d.validate(), Err(Error::Config(_))));
        d.family = Family::Electromagnetic;
        d.ms_flags.clear();
        d.space = SpaceChoice::Beltrami;
        assert!(matches!(d.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn terminology_by_dimension() {
        assert_eq!(terminology(2, false), "integrable");
        assert_eq!(terminology(3, false), "minimally (weak) superintegrable");
        assert_eq!(terminology(5, false), "quasi-maximally superintegrable");
        assert_eq!(terminology(5, true), "maximally superintegrable");
    }

    #[test]
    fn catalog_lists_seven_families() {
        let entries = catalog_entries();
        assert_eq!(entries.len(), 7);
        let fams: Vec<Family> = entries.iter().map(|e| e.family).collect();
        assert_eq!(fams, Family::ALL.to_vec());
    }
}
