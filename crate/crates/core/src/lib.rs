//! Stochastic differential equation models whose stationary law is a
//! prescribed density and whose autocorrelation decays exactly as `e^{-ατ}`.
//!
//! The drift is always linear and mean-reverting, `a(x) = -α (x - μ)`, and
//! the diffusion is chosen so that the stationary Fokker–Planck equation
//! holds for the target density `p`:
//!
//! ```text
//! b²(x) = (2 / p(x)) ∫_{lower}^{x} -α (z - μ) p(z) dz
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: error function, gamma and incomplete gamma families.
//! * [`quadrature`]: adaptive Gauss–Kronrod integration.
//! * [`distributions`]: the density catalog ([`DistributionSpec`]).
//! * [`builder`]: [`SdeModel`] construction, closed-form or quadrature backed.
//! * [`simulator`]: Euler–Maruyama path ensembles with per-path RNG streams.
//! * [`analysis`]: ACF, KS distance, decay-rate fits and moment calibration.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the accuracy
//! contracts are stated for.

pub mod analysis;
pub mod builder;
pub mod distributions;
mod error;
pub mod provenance;
pub mod quadrature;
mod roots;
mod scalar;
pub mod simulator;
pub mod specfun;

pub use analysis::{CalibrationResult, ValidationReport};
pub use builder::{Diffusion, SdeModel};
pub use distributions::{DistributionSpec, Family, Support};
pub use error::{Error, Result};
pub use scalar::Real;
pub use simulator::{PathEnsemble, SimulationConfig};

/// Distribution spec over `f64`.
pub type Spec64 = DistributionSpec<f64>;
/// Model over `f64`.
pub type Model64 = SdeModel<f64>;
/// Simulation config over `f64`.
pub type Config64 = SimulationConfig<f64>;
/// Path ensemble over `f64`.
pub type Ensemble64 = PathEnsemble<f64>;
/// Validation report over `f64`.
pub type Report64 = ValidationReport<f64>;

/// Distribution spec over `f32`.
pub type Spec32 = DistributionSpec<f32>;
/// Model over `f32`.
pub type Model32 = SdeModel<f32>;
/// Path ensemble over `f32`.
pub type Ensemble32 = PathEnsemble<f32>;
