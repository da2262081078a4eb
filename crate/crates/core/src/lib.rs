//! Simulation and statistical verification toolkit for the stochastic
//! Schrödinger-Lohe synchronization model.
//!
//! Two wave functions coupled on the L² unit sphere and driven by independent
//! Stratonovich multiplicative noises have a pairwise correlation
//! `h(t) = <psi_1, psi_2>` that solves the degenerate complex SDE
//!
//! ```text
//! dh = K (1 - h^2) dt + sqrt(2) i eps h ∘ dW
//! ```
//!
//! on the closed unit ball. The crate integrates this SDE (interior and
//! boundary charts), solves the underlying coupled Schrödinger system on a
//! periodic grid via a split-step spectral method, implements the explicit
//! invariant law of the boundary diffusion, and provides the estimators used
//! to check synchronization, invariant-measure and large-deviation behaviour
//! empirically.

pub mod correlation;
pub mod measure;
pub mod noise;
pub mod params;
pub mod quad;
pub mod runner;
pub mod spde;
pub mod stats;

pub use correlation::{BoundaryState, CorrelationState, SdeError};

pub use measure::StationaryDensity;
pub use noise::{derive_seed, NoiseStream};
pub use params::ModelParams;


/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
