//! Expected densities of complex zeros and critical points of Gaussian
//! random polynomial ensembles.
//!
//! The SO(m+1) ensemble has iid real Gaussian coefficients, the SU(m+1)
//! ensemble iid complex ones, both on the weighted monomial basis
//! `binom(N,J)^{1/2} z^J`. The pipeline evaluates the expected density of
//! zeros or critical points at any point of ℂ^m by conditioning the
//! derivative jet on the constraint functions vanishing and taking the
//! Gaussian expectation of the Jacobian determinant; closed forms and a
//! Monte Carlo sampler cross-check it in one variable.

pub mod cli;
pub mod closedform;
pub mod ensemble;
pub mod error;
pub mod kacrice;
pub mod kernel;
pub mod montecarlo;
pub mod realcov;
pub mod selftest;
pub mod wick;

pub use ensemble::{EnsembleSpec, Field, Mode, MultiIndex};
pub use error::{KrError, Result};
pub use kacrice::{decay_rate_fit, density, density_ratio, lambda_z, DecayFit, DensityResult};
