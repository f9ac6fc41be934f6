//! Experiment configuration files (TOML).

use std::fmt;
use std::path::Path;

use qms_core::catalog::ProfileCoefficients;
use qms_core::dynamics::Method;
use qms_core::{Family, SpaceChoice, SystemDescriptor, SystemParams};
use serde::Deserialize;

use crate::CliError;

fn one() -> f64 {
    1.0
}

fn euclidean() -> SpaceChoice {
    SpaceChoice::Euclidean
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSection {
    family: Family,
    #[serde(default = "euclidean")]
    space: SpaceChoice,
    #[serde(default = "one")]
    mass: f64,
    #[serde(default)]
    omega: f64,
    #[serde(default)]
    kappa: f64,
    #[serde(default)]
    delta: f64,
    #[serde(default)]
    deltas: Vec<f64>,
    #[serde(default)]
    k: f64,
    #[serde(default = "one")]
    charge: f64,
    b_tilde: Vec<f64>,
    #[serde(default)]
    profile_f: Vec<f64>,
    #[serde(default)]
    profile_g: Vec<f64>,
    #[serde(default)]
    profile_mass: Vec<f64>,
    #[serde(default)]
    extra_integrals: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerificationSettings {
    pub sample_points: usize,
    pub bracket_tol: f64,
    pub rank_tol: f64,
}

impl Default for VerificationSettings {
    fn default() -> Self {
        Self {
            sample_points: 20,
            bracket_tol: qms_core::poisson::DEFAULT_BRACKET_TOL,
            rank_tol: qms_core::poisson::DEFAULT_RANK_TOL,
        }
    }
}

fn default_monitors() -> Vec<String> {
    vec!["H".into(), "universal".into(), "extra".into()]
}

fn default_method() -> Method {
    Method::GaussLegendre2
}

fn default_record_every() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSettings {
    pub q0: Vec<f64>,
    pub p0: Vec<f64>,
    pub t_final: f64,
    pub step: f64,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default = "default_monitors")]
    pub monitors: Vec<String>,
    #[serde(default)]
    pub closure_tol: Option<f64>,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(alias = "N")]
    n: Option<usize>,
    #[serde(default)]
    seed: u64,
    system: SystemSection,
    #[serde(default)]
    verification: VerificationSettings,
    simulation: Option<SimulationSettings>,
}

/// A validated experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub system: SystemDescriptor,
    pub n: usize,
    pub seed: u64,
    pub verification: VerificationSettings,
    pub simulation: Option<SimulationSettings>,
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {v}")))
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let s = raw.system;
        let n = s.b_tilde.len();
        if let Some(declared) = raw.n {
            if declared != n {
                return Err(CliError::Config(format!("n = {declared} but b_tilde has {n} entries")));
            }
        }
        if n < 2 {
            return Err(CliError::Config(format!("N must be at least 2, got {n}")));
        }
        let system = SystemDescriptor {
            family: s.family,
            space: s.space,
            params: SystemParams {
                mass: s.mass,
                omega: s.omega,
                kappa: s.kappa,
                delta: s.delta,
                deltas: s.deltas,
                k: s.k,
                charge: s.charge,
                b_tilde: s.b_tilde,
            },
            profiles: ProfileCoefficients {
                f: s.profile_f,
                g: s.profile_g,
                mass_fn: s.profile_mass,
            },
            ms_flags: s.extra_integrals,
        };
        system.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let v = &raw.verification;
        if v.sample_points == 0 {
            return Err(CliError::Config("sample_points must be at least 1".into()));
        }
        positive("bracket_tol", v.bracket_tol)?;
        positive("rank_tol", v.rank_tol)?;
        if let Some(sim) = &raw.simulation {
            if sim.q0.len() != n || sim.p0.len() != n {
                return Err(CliError::Config(format!("q0 and p0 need {n} entries")));
            }
            positive("step", sim.step)?;
            if !(sim.t_final >= 0.0 && sim.t_final.is_finite()) {
                return Err(CliError::Config(format!("t_final must be >= 0, got {}", sim.t_final)));
            }
            if let Some(tol) = sim.closure_tol {
                positive("closure_tol", tol)?;
            }
            if sim.record_every == 0 {
                return Err(CliError::Config("record_every must be at least 1".into()));
            }
        }
        Ok(Self {
            system,
            n,
            seed: raw.seed,
            verification: raw.verification,
            simulation: raw.simulation,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
    format!("[{}]", items.join(", "))
}

impl fmt::Display for ExperimentConfig {
    /// Canonical form; parses back to an equal config.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "\n[system]")?;
        write!(f, "{}", self.system)?;
        let v = &self.verification;
        writeln!(f, "\n[verification]")?;
        writeln!(f, "sample_points = {}", v.sample_points)?;
        writeln!(f, "bracket_tol = {:?}", v.bracket_tol)?;
        writeln!(f, "rank_tol = {:?}", v.rank_tol)?;
        if let Some(s) = &self.simulation {
            writeln!(f, "\n[simulation]")?;
            writeln!(f, "q0 = {}", list(&s.q0))?;
            writeln!(f, "p0 = {}", list(&s.p0))?;
            writeln!(f, "t_final = {:?}", s.t_final)?;
            writeln!(f, "step = {:?}", s.step)?;
            writeln!(f, "method = \"{}\"", s.method.key())?;
            let m: Vec<String> = s.monitors.iter().map(|m| format!("{m:?}")).collect();
            writeln!(f, "monitors = [{}]", m.join(", "))?;
            if let Some(tol) = s.closure_tol {
                writeln!(f, "closure_tol = {tol:?}")?;
            }
            writeln!(f, "record_every = {}", s.record_every)?;
        }
        Ok(())
    }
}
