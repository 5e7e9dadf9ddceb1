//! Surrogate-enabled zero-noise extrapolation.
//!
//! The crate is organised bottom-up:
//!
//! - [`circuits`]: Clifford + RZ circuit IR, task builders and structural folding.
//! - [`observable`]: weighted Pauli-string observables.
//! - [`sim`]: statevector, density-matrix, light-cone and analytic backends.
//! - [`noise`]: channel construction, PTM diagonals and noise amplification.
//! - [`estimation`]: finite-shot estimators and Pauli classical shadows.
//! - [`surrogates`]: trigonometric feature dictionaries, kernel and ridge surrogates.
//! - [`extrapolation`]: linear, quadratic and Richardson zero-noise extrapolation.
//! - [`mitigation`]: conventional ZNE, S-ZNE and hybrid pipelines with a shot ledger.
//! - [`experiments`]: Hamiltonians, exact solvers, VQA, metrology and hybrid studies.

pub mod circuits;
pub mod error;
pub mod estimation;
pub mod experiments;
pub mod extrapolation;
pub mod mitigation;
pub mod noise;
pub mod observable;
pub mod rng;
pub mod sim;
pub mod surrogates;

pub use error::{Result, SzneError};
