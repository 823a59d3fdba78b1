//! Bound-state energies of one-dimensional and radial Schrödinger problems.
//!
//! The wavefunction is written in polar form `ψ = ρ cos α`, `ψ' = ρ sin α`.
//! The angle obeys a first-order equation without singularities, and the
//! eigenvalues are the energies at which the angle carried across the
//! working interval from the left decaying direction lands on the right
//! decaying direction modulo π. The mismatch (the defect angle) increases
//! strictly with the energy, so every level can be bracketed and bisected.

// `!(x < y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angular;
pub mod cues;
mod error;
mod ode;
pub mod oracle;
pub mod potentials;
pub mod problem;
pub mod spectrum;

pub use angular::{AngularState, IntegratorConfig};
pub use cues::{BoundaryAngles, CueSeries};
pub use error::{Error, Result};
pub use potentials::PotentialSpec;
pub use problem::{Domain, Interval, ProblemSpec, TailClass};
pub use spectrum::{DefectSample, EigenfunctionSamples, Eigenvalue, SpectrumConfig, SpectrumResult};
