//! Bound-state spectra and canonical thermodynamics for the non-central
//! potential
//!
//! ```text
//! V(r, θ) = a₁² r² + (a₂² / sin²θ + a₃² cot²θ) / r²
//! ```
//!
//! The crate is organised bottom-up:
//!
//! | module | contents |
//! |--------|----------|
//! | [`specfun`] | Jacobi polynomials, terminating ₁F₁, Γ-ratio prefactors, Bernoulli numbers |
//! | [`nu`] | parametric Nikiforov-Uvarov coefficients, quantization rules, root finding |
//! | [`spectrum`] | physical parameters, angular constants, energies, degeneracies, wavefunctions |
//! | [`partition`] | direct and Euler-Maclaurin partition functions, convergence integral |
//! | [`thermo`] | free energy, mean energy, entropy, specific heat; sweeps and continuity scans |
//! | [`quad`] | half-line quadrature used for norms and integral checks |
//!
//! All energies in the thermal part are measured in units of
//! ξ = √(ħ²a₁²/2M), and temperature enters through ᾱ = 1/(βξ).

pub mod nu;
pub mod partition;
pub mod quad;
pub mod specfun;
pub mod spectrum;
pub mod thermo;

mod error;

pub use error::{Error, Result};

pub use nu::{Branch, NuDerived, NuProblem};
pub use partition::{FormulaVariant, Method, Mode, PartitionSpec, PartitionValue};
pub use spectrum::{AngularSolution, EnergyLevel, PotentialParams};
pub use thermo::{DerivativeScheme, PartitionModel, SweepSpec, ThermoPoint};
