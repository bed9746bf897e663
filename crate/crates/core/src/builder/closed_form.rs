//! Closed-form squared diffusions `b²(x)` per family.
//!
//! The textbook expressions multiply huge exponentials by tiny
//! complementary functions. Here those products are folded into `erfcx`
//! and the scaled incomplete gammas so nothing overflows in the tails.

use crate::distributions::DistributionSpec;
use crate::specfun::{
    erf, erfcx, ln_gamma_unchecked, scaled_lower_unchecked, scaled_upper_unchecked,
};
use crate::{Error, Real, Result};

/// `b²(x)` for a catalog family, zero outside the open support.
pub(crate) fn squared<T: Real>(spec: &DistributionSpec<T>, alpha: T, x: T) -> Result<T> {
    if !spec.support().interior(x) {
        return Ok(T::zero());
    }
    let two = T::lit(2.0);
    let b2 = match *spec {
        DistributionSpec::Normal { std, .. } => two * alpha * std * std,
        DistributionSpec::GramCharlier3 { skew, .. } => {
            let six = T::lit(6.0);
            let x3 = x * x * x;
            let num = six + skew * x3;
            let den = six + skew * (x3 - T::lit(3.0) * x);
            if num <= T::zero() || den <= T::zero() {
                T::zero()
            } else {
                two * alpha * num / den
            }
        }
        DistributionSpec::Beta3 { shape1, shape2, upper } => {
            two * alpha * (upper - x) * x / (shape1 + shape2)
        }
        DistributionSpec::Gamma2 { scale, .. } => two * alpha * scale * x,
        DistributionSpec::GenGamma3 { shape, scale, power } => {
            gen_gamma(alpha, shape, scale, power, spec.mean(), x)
        }
        DistributionSpec::Weibull2 { shape, scale } => {
            gen_gamma(alpha, T::one(), scale, shape, spec.mean(), x)
        }
        DistributionSpec::InvGaussian2 { mean, scale } => {
            let z = (scale / (two * x)).sqrt() * (x + mean) / mean;
            two * (T::TAU()).sqrt() * alpha * mean * erfcx(z) * (x * x * x / scale).sqrt()
        }
        DistributionSpec::Lognormal2 { log_mean, log_std } => {
            lognormal(alpha, log_mean, log_std, x)
        }
        DistributionSpec::Rayleigh1 { scale } => {
            let z = x * T::FRAC_1_SQRT_2() / scale;
            alpha * scale * scale / x * (T::TAU()).sqrt() * scale * rayleigh_g(z)
        }
        DistributionSpec::TruncNormal2 { mean, std } => {
            let k = mean / std;
            let hazard = (two / T::PI()).sqrt() / erfcx(-k * T::FRAC_1_SQRT_2());
            let w = (x - mean) * T::FRAC_1_SQRT_2() / std;
            two * alpha * std * std * (T::one() - hazard * T::FRAC_PI_2().sqrt() * erfcx(w))
        }
        DistributionSpec::Tabulated(_) => {
            return Err(Error::UnsupportedFamily("tabulated"));
        }
    };
    Ok(b2.max(T::zero()))
}

/// Generalized gamma with `y = x/scale`, `u = y^power`, `a' = shape + 1/power`.
///
/// Above the mean the upper incomplete gammas are used (scaled by `e^u`);
/// below it the lower ones (scaled by `e^u u^{-a}`), so each branch
/// subtracts quantities of different magnitude only.
fn gen_gamma<T: Real>(alpha: T, shape: T, scale: T, power: T, mean: T, x: T) -> T {
    let y = x / scale;
    let u = y.powf(power);
    let a1 = shape + power.recip();
    let ratio = (ln_gamma_unchecked(a1) - ln_gamma_unchecked(shape)).exp();
    let front = T::lit(2.0) * alpha * scale * x / power;
    if x >= mean {
        let bracket = scaled_upper_unchecked(a1, u) - ratio * scaled_upper_unchecked(shape, u);
        front * u.powf(-shape) * bracket
    } else {
        let bracket = ratio * scaled_lower_unchecked(shape, u) - y * scaled_lower_unchecked(a1, u);
        front * bracket
    }
}

/// Lognormal: `√(2π) α σ x e^{μ+σ²/2} e^{B²}(erf A - erf B)` with
/// `A = (μ+σ²-ln x)/(√2σ)`, `B = (μ-ln x)/(√2σ)`.
fn lognormal<T: Real>(alpha: T, mu: T, sigma: T, x: T) -> T {
    let r = T::FRAC_1_SQRT_2() / sigma;
    let lx = x.ln();
    let a = (mu + sigma * sigma - lx) * r;
    let b = (mu - lx) * r;
    let bracket = if b >= T::zero() {
        erfcx(b) - (b * b - a * a).exp() * erfcx(a)
    } else if a <= T::zero() {
        (b * b - a * a).exp() * erfcx(-a) - erfcx(-b)
    } else {
        (b * b).exp() * (erf(a) - erf(b))
    };
    (T::TAU()).sqrt() * alpha * sigma * x * (mu + T::lit(0.5) * sigma * sigma).exp() * bracket
}

/// `erfcx(z) - 1 + 2z/√π`; the power series avoids the cancellation at small `z`.
fn rayleigh_g<T: Real>(z: T) -> T {
    if z >= T::lit(0.5) {
        return erfcx(z) - T::one() + T::lit(2.0) * z / T::PI().sqrt();
    }
    // Σ_{n≥2} (-z)^n / Γ(n/2 + 1), even and odd terms advanced separately.
    let z2 = z * z;
    let mut even = z2;
    let mut odd = -z2 * z * T::lit(4.0) / (T::lit(3.0) * T::PI().sqrt());
    let mut sum = even + odd;
    let mut n = T::lit(2.0);
    for _ in 0..60 {
        even *= z2 / (n * T::lit(0.5) + T::one());
        odd *= z2 / ((n + T::one()) * T::lit(0.5) + T::one());
        sum += even + odd;
        if even.abs() < T::epsilon() * sum.abs() {
            break;
        }
        n += T::lit(2.0);
    }
    sum
}
