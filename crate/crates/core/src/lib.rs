//! Superintegrable Hamiltonians built on the `sl(2, R)` Poisson coalgebra.
//!
//! A phase-space point `(q, p)` in `R^{2N}` is mapped to the three generators
//!
//! ```text
//! J- = q^2,   J+ = p^2 + sum_i b_i / q_i^2,   J3 = q . p
//! ```
//!
//! and every Hamiltonian here is a function `H = Hf(J-, J+, J3)`. Such an `H`
//! Poisson-commutes with the left and right partial Casimirs `C^(m)`, `C_(m)`
//! for any `Hf`; the crate evaluates all of these with analytic gradients and
//! certifies brackets, ranks and conservation numerically.
//!
//! Modules:
//! - [`realization`], [`hamiltonian`], [`observable`]: the generator model.
//! - [`integrals`]: universal and extra constants of the motion.
//! - [`poisson`], [`sampling`], [`svd`]: bracket tables and rank certificates.
//! - [`geometry`]: constant-curvature spaces in ambient, Poincare and Beltrami
//!   coordinates.
//! - [`catalog`]: named systems.
//! - [`dynamics`]: integration, drift and closure.

pub mod catalog;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod hamiltonian;
pub mod integrals;
pub mod observable;
pub mod phase;
pub mod poisson;
pub mod realization;
pub mod sampling;
pub mod svd;

pub use catalog::{Family, SpaceChoice, SystemDescriptor, SystemParams};
pub use dynamics::{detect_closure, integrate, ClosureReport, IntegratorConfig, Method, Trajectory};
pub use error::{Error, Result};
pub use geometry::{Chart, Space};
pub use hamiltonian::{hamiltonian_gradient, hamiltonian_value, HamiltonianSpec};
pub use integrals::IntegralSet;
pub use observable::ConservedQuantity;
pub use phase::{PhaseGradient, PhasePoint};
pub use poisson::{independence_rank, involution_table, poisson_bracket, BracketResidualTable, IndependenceCertificate};
pub use sampling::PointSampler;
