//! Special functions used by the closed-form densities and diffusions.
//!
//! | function | method | range | target rel. error (f64) |
//! |---|---|---|---|
//! | [`erf`], [`erfc`] | fdlibm rational fits | all reals | 1e-12 (≈1 ulp) |
//! | [`erfcx`] | fdlibm tail fit, asymptotic series ≥ 28 | all reals | 1e-12 |
//! | [`gamma`], [`ln_gamma`] | Lanczos g=7 / Stirling ≥ 15 | `a > 0` | 1e-12 |
//! | [`upper_gamma`], [`scaled_upper_gamma`] | series / continued fraction | `a > 0, u ≥ 0` | 1e-10 |
//! | [`scaled_lower_gamma`], [`regularized_gamma_p`], [`regularized_gamma_q`] | same | same | 1e-10 |
//! | [`beta_fn`], [`ln_beta`] | log-gamma | `a, b > 0` | 1e-12 |
//! | [`regularized_beta`] | continued fraction | `x ∈ [0,1]` | 1e-10 |
//!
//! All functions are pure. Golden values come from an mpmath script kept
//! with the tests.

mod beta;
pub(crate) mod erf;
mod gamma;
mod incgamma;

pub use beta::{beta_fn, ln_beta, regularized_beta};
pub use erf::{erf, erfc, erfcx};
pub use gamma::{gamma, ln_gamma};
pub use incgamma::{
    regularized_gamma_p, regularized_gamma_q, scaled_lower_gamma, scaled_upper_gamma, upper_gamma,
};

pub(crate) use beta::{ln_beta_unchecked, regularized_beta_unchecked};
pub(crate) use gamma::ln_gamma_unchecked;
pub(crate) use incgamma::{
    regularized_p_unchecked, regularized_q_unchecked, scaled_lower_unchecked,
    scaled_upper_unchecked,
};
