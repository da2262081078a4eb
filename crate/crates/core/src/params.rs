//! Physical configuration of the coupled-oscillator model.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance deciding whether an initial value counts as a boundary point.
///
/// Initial conditions with `|h0|` within this distance of 1 are integrated in
/// the angular boundary chart, everything closer to the origin in the interior
/// chart.
pub const TOL_BALL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("coupling strength must be positive, got {0}")]
    NonPositiveCoupling(f64),
    #[error("noise strength must be positive, got {0}")]
    NonPositiveNoise(f64),
    #[error("oscillator count must be at least 2, got {0}")]
    TooFewOscillators(usize),
}

/// Coupling strength `K`, noise strength `eps` and oscillator count `N`.
///
/// `K` has dimension 1/time and `eps` dimension 1/sqrt(time); the product
/// `2K/eps^2` is the dimensionless concentration of the stationary law on the
/// boundary circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Coupling strength K > 0.
    pub coupling: f64,
    /// Noise strength eps. Strictly positive in the stochastic model; zero is
    /// permitted only through [`ModelParams::noiseless`] for checking the
    /// integrator against the deterministic closed form.
    pub noise: f64,
    /// Number of oscillators, at least 2. Correlation analysis fixes N = 2.
    pub n_osc: usize,
}

impl ModelParams {
    pub fn new(coupling: f64, noise: f64, n_osc: usize) -> Result<Self, ParamError> {
        if !(coupling > 0.0) {
            return Err(ParamError::NonPositiveCoupling(coupling));
        }
        if !(noise > 0.0) {
            return Err(ParamError::NonPositiveNoise(noise));
        }
        if n_osc < 2 {
            return Err(ParamError::TooFewOscillators(n_osc));
        }
        Ok(ModelParams {
            coupling,
            noise,
            n_osc,
        })
    }

    /// Noise-free configuration, accepted only for the deterministic oracle
    /// path (the closed-form solution of `dh/dt = K(1 - h^2)`).
    pub fn noiseless(coupling: f64, n_osc: usize) -> Result<Self, ParamError> {
        if !(coupling > 0.0) {
            return Err(ParamError::NonPositiveCoupling(coupling));
        }
        if n_osc < 2 {
            return Err(ParamError::TooFewOscillators(n_osc));
        }
        Ok(ModelParams {
            coupling,
            noise: 0.0,
            n_osc,
        })
    }

    /// Concentration `kappa = 2K/eps^2` of the invariant law on the boundary.
    pub fn kappa(&self) -> f64 {
        2.0 * self.coupling / (self.noise * self.noise)
    }

    /// Largest admissible step size: keeps both the drift and the diffusion
    /// substep small relative to their characteristic times.
    pub fn dt_max(&self) -> f64 {
        let drift_limit = 0.1 / self.coupling;
        let noise_limit = if self.noise > 0.0 {
            0.1 / (self.noise * self.noise)
        } else {
            f64::INFINITY
        };
        1e-2_f64.min(drift_limit).min(noise_limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            ModelParams::new(0.0, 1.0, 2),
            Err(ParamError::NonPositiveCoupling(0.0))
        );
        assert_eq!(
            ModelParams::new(1.0, 0.0, 2),
            Err(ParamError::NonPositiveNoise(0.0))
        );
        assert_eq!(
            ModelParams::new(1.0, 1.0, 1),
            Err(ParamError::TooFewOscillators(1))
        );
        assert!(ModelParams::new(1.0, -1.0, 2).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 2).is_err());
    }

    #[test]
    fn noiseless_is_the_only_eps_zero_path() {
        let p = ModelParams::noiseless(2.0, 2).unwrap();
        assert_eq!(p.noise, 0.0);
        assert!(ModelParams::new(2.0, 0.0, 2).is_err());
    }

    #[test]
    fn kappa_depends_only_on_the_ratio() {
        let a = ModelParams::new(1.0, 0.5, 2).unwrap();
        let b = ModelParams::new(4.0, 1.0, 2).unwrap();
        assert_eq!(a.kappa(), 8.0);
        assert_eq!(b.kappa(), 8.0);
    }

    #[test]
    fn dt_max_scales_with_stiffness() {
        let p = ModelParams::new(1.0, 1.0, 2).unwrap();
        assert_eq!(p.dt_max(), 1e-2);
        let stiff = ModelParams::new(100.0, 1.0, 2).unwrap();
        assert_eq!(stiff.dt_max(), 1e-3);
        let noisy = ModelParams::new(1.0, 10.0, 2).unwrap();
        assert_eq!(noisy.dt_max(), 1e-3);
    }
}
