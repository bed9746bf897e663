//! The density catalog.
//!
//! Each [`DistributionSpec`] variant is one parametric family (plus a
//! tabulated density for arbitrary inputs). Specs are built through the
//! validating constructors and are immutable afterwards.

mod document;
mod tabulated;

use std::fmt;
use std::str::FromStr;

use crate::roots::brent;
use crate::specfun::{
    erf, erfc, erfcx, ln_beta_unchecked, ln_gamma_unchecked, regularized_beta_unchecked,
    regularized_p_unchecked, regularized_q_unchecked,
};
use crate::{Error, Real, Result};

pub use document::SpecDocument;
pub use tabulated::TabulatedDensity;

/// Default half-width of the Gram–Charlier validity domain.
pub const GRAM_CHARLIER_DOMAIN: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Normal,
    GramCharlier3,
    Beta3,
    Gamma2,
    GenGamma3,
    InvGaussian2,
    Lognormal2,
    Rayleigh1,
    TruncNormal2,
    Weibull2,
    Tabulated,
}

impl Family {
    /// The ten parametric families.
    pub const CATALOG: [Family; 10] = [
        Family::Normal,
        Family::GramCharlier3,
        Family::Beta3,
        Family::Gamma2,
        Family::GenGamma3,
        Family::InvGaussian2,
        Family::Lognormal2,
        Family::Rayleigh1,
        Family::TruncNormal2,
        Family::Weibull2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Normal => "normal",
            Family::GramCharlier3 => "gram_charlier3",
            Family::Beta3 => "beta3",
            Family::Gamma2 => "gamma2",
            Family::GenGamma3 => "gen_gamma3",
            Family::InvGaussian2 => "inv_gaussian2",
            Family::Lognormal2 => "lognormal2",
            Family::Rayleigh1 => "rayleigh1",
            Family::TruncNormal2 => "trunc_normal2",
            Family::Weibull2 => "weibull2",
            Family::Tabulated => "tabulated",
        }
    }

    /// Parameter names in constructor order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Normal => &["mean", "std"],
            Family::GramCharlier3 => &["skew"],
            Family::Beta3 => &["shape1", "shape2", "upper"],
            Family::Gamma2 => &["shape", "scale"],
            Family::GenGamma3 => &["shape", "scale", "power"],
            Family::InvGaussian2 => &["mean", "scale"],
            Family::Lognormal2 => &["log_mean", "log_std"],
            Family::Rayleigh1 => &["scale"],
            Family::TruncNormal2 => &["mean", "std"],
            Family::Weibull2 => &["shape", "scale"],
            Family::Tabulated => &[],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::CATALOG
            .iter()
            .chain(std::iter::once(&Family::Tabulated))
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// Support of a density: an interval with optionally infinite ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support<T> {
    pub lower: T,
    pub upper: T,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl<T: Real> Support<T> {
    fn open(lower: T, upper: T) -> Self {
        Support {
            lower,
            upper,
            lower_closed: false,
            upper_closed: false,
        }
    }

    /// Strictly inside the interval.
    pub fn interior(&self, x: T) -> bool {
        x > self.lower && x < self.upper
    }

    /// Inside the closure (finite ends included).
    pub fn closure(&self, x: T) -> bool {
        x >= self.lower && x <= self.upper
    }
}

impl<T: Real> fmt::Display for Support<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lower_closed { '[' } else { '(' };
        let r = if self.upper_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lower, self.upper)
    }
}

/// A validated stationary density.
///
/// Variants can be matched and read but only created through the
/// constructors ([`DistributionSpec::weibull2`] and friends).
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec<T> {
    #[non_exhaustive]
    Normal { mean: T, std: T },
    /// Third-order Gram–Charlier expansion of N(0, 1); `domain` is the
    /// half-width on which nonnegativity is enforced.
    #[non_exhaustive]
    GramCharlier3 { skew: T, domain: T },
    /// Beta density stretched onto `(0, upper)`.
    #[non_exhaustive]
    Beta3 { shape1: T, shape2: T, upper: T },
    #[non_exhaustive]
    Gamma2 { shape: T, scale: T },
    /// `p(x) ∝ y^{shape·power - 1} exp(-y^power)`, `y = x / scale`.
    #[non_exhaustive]
    GenGamma3 { shape: T, scale: T, power: T },
    #[non_exhaustive]
    InvGaussian2 { mean: T, scale: T },
    #[non_exhaustive]
    Lognormal2 { log_mean: T, log_std: T },
    #[non_exhaustive]
    Rayleigh1 { scale: T },
    /// Normal(mean, std) truncated to `x > 0`.
    #[non_exhaustive]
    TruncNormal2 { mean: T, std: T },
    #[non_exhaustive]
    Weibull2 { shape: T, scale: T },
    Tabulated(TabulatedDensity<T>),
}

fn positive<T: Real>(family: Family, name: &'static str, v: T) -> Result<T> {
    if v.is_finite() && v > T::zero() {
        Ok(v)
    } else {
        Err(Error::param(family.name(), name, format!("must be finite and > 0, got {v}")))
    }
}

fn finite<T: Real>(family: Family, name: &'static str, v: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::param(family.name(), name, format!("must be finite, got {v}")))
    }
}

/// Largest `|S|` for which both `1 + S(x³-3x)/6` and `1 + S x³/6` stay
/// nonnegative on `[-domain, domain]`.
///
/// The first factor is the density itself; the second is the diffusion
/// radicand, which is the binding one for `domain > 1`.
pub fn gram_charlier_max_skew<T: Real>(domain: T) -> T {
    let six = T::lit(6.0);
    let d3 = domain * domain * domain;
    let mut s_max = six / d3;
    let cubic = d3 - T::lit(3.0) * domain;
    if cubic > T::zero() {
        s_max = s_max.min(six / cubic);
    }
    if domain >= T::one() {
        s_max = s_max.min(T::lit(3.0));
    } else {
        // Inside (-1, 1) the density factor is extremal at the ends.
        let c = T::lit(3.0) * domain - d3;
        if c > T::zero() {
            s_max = s_max.min(six / c);
        }
    }
    s_max
}

fn gram_charlier_min_factor<T: Real>(skew: T, domain: T) -> (T, T) {
    let sixth = skew / T::lit(6.0);
    let mut candidates = vec![-domain, domain];
    if domain >= T::one() {
        candidates.push(-T::one());
        candidates.push(T::one());
    }
    let density = candidates
        .iter()
        .map(|&x| T::one() + sixth * (x * x * x - T::lit(3.0) * x))
        .fold(T::infinity(), T::min);
    let d3 = domain * domain * domain;
    let radicand = (T::one() + sixth * d3).min(T::one() - sixth * d3);
    (density, radicand)
}

#[inline]
fn std_normal_pdf<T: Real>(z: T) -> T {
    (-T::lit(0.5) * z * z).exp() / (T::TAU()).sqrt()
}

/// `Φ(z)`.
#[inline]
fn std_normal_cdf<T: Real>(z: T) -> T {
    T::lit(0.5) * erfc(-z * T::FRAC_1_SQRT_2())
}

impl<T: Real> DistributionSpec<T> {
    pub fn normal(mean: T, std: T) -> Result<Self> {
        let f = Family::Normal;
        Ok(DistributionSpec::Normal {
            mean: finite(f, "mean", mean)?,
            std: positive(f, "std", std)?,
        })
    }

    /// Gram–Charlier on the default domain `[-6, 6]`.
    pub fn gram_charlier3(skew: T) -> Result<Self> {
        Self::gram_charlier3_with_domain(skew, T::lit(GRAM_CHARLIER_DOMAIN))
    }

    pub fn gram_charlier3_with_domain(skew: T, domain: T) -> Result<Self> {
        let f = Family::GramCharlier3;
        let skew = finite(f, "skew", skew)?;
        let domain = positive(f, "domain", domain)?;
        let (density, radicand) = gram_charlier_min_factor(skew, domain);
        if density < T::zero() || radicand < T::zero() {
            return Err(Error::param(
                f.name(),
                "skew",
                format!(
                    "|S| = {} exceeds S_max = {} on [-{domain}, {domain}] \
                     (min density factor {density}, min radicand factor {radicand})",
                    skew.abs(),
                    gram_charlier_max_skew(domain)
                ),
            ));
        }
        Ok(DistributionSpec::GramCharlier3 { skew, domain })
    }

    pub fn beta3(shape1: T, shape2: T, upper: T) -> Result<Self> {
        let f = Family::Beta3;
        Ok(DistributionSpec::Beta3 {
            shape1: positive(f, "shape1", shape1)?,
            shape2: positive(f, "shape2", shape2)?,
            upper: positive(f, "upper", upper)?,
        })
    }

    pub fn gamma2(shape: T, scale: T) -> Result<Self> {
        let f = Family::Gamma2;
        Ok(DistributionSpec::Gamma2 {
            shape: positive(f, "shape", shape)?,
            scale: positive(f, "scale", scale)?,
        })
    }

    pub fn gen_gamma3(shape: T, scale: T, power: T) -> Result<Self> {
        let f = Family::GenGamma3;
        Ok(DistributionSpec::GenGamma3 {
            shape: positive(f, "shape", shape)?,
            scale: positive(f, "scale", scale)?,
            power: positive(f, "power", power)?,
        })
    }

    pub fn inv_gaussian2(mean: T, scale: T) -> Result<Self> {
        let f = Family::InvGaussian2;
        Ok(DistributionSpec::InvGaussian2 {
            mean: positive(f, "mean", mean)?,
            scale: positive(f, "scale", scale)?,
        })
    }

    pub fn lognormal2(log_mean: T, log_std: T) -> Result<Self> {
        let f = Family::Lognormal2;
        Ok(DistributionSpec::Lognormal2 {
            log_mean: finite(f, "log_mean", log_mean)?,
            log_std: positive(f, "log_std", log_std)?,
        })
    }

    pub fn rayleigh1(scale: T) -> Result<Self> {
        Ok(DistributionSpec::Rayleigh1 {
            scale: positive(Family::Rayleigh1, "scale", scale)?,
        })
    }

    pub fn trunc_normal2(mean: T, std: T) -> Result<Self> {
        let f = Family::TruncNormal2;
        let mean = finite(f, "mean", mean)?;
        let std = positive(f, "std", std)?;
        // Φ(mean/std) must stay a normal number for the density to be usable.
        if mean / std < T::lit(-30.0) {
            return Err(Error::param(
                f.name(),
                "mean",
                format!("mean/std = {} leaves no mass above zero", mean / std),
            ));
        }
        Ok(DistributionSpec::TruncNormal2 { mean, std })
    }

    pub fn weibull2(shape: T, scale: T) -> Result<Self> {
        let f = Family::Weibull2;
        Ok(DistributionSpec::Weibull2 {
            shape: positive(f, "shape", shape)?,
            scale: positive(f, "scale", scale)?,
        })
    }

    pub fn tabulated(grid: &[(T, T)]) -> Result<Self> {
        TabulatedDensity::new(grid).map(DistributionSpec::Tabulated)
    }

    /// Builds a parametric family from values given in
    /// [`Family::param_names`] order.
    pub fn from_params(family: Family, params: &[T]) -> Result<Self> {
        let names = family.param_names();
        if family == Family::Tabulated {
            return Err(Error::UnsupportedFamily("tabulated densities need a grid"));
        }
        if params.len() != names.len() {
            return Err(Error::Format(format!(
                "{family} takes {} parameters, got {}",
                names.len(),
                params.len()
            )));
        }
        let p = params;
        match family {
            Family::Normal => Self::normal(p[0], p[1]),
            Family::GramCharlier3 => Self::gram_charlier3(p[0]),
            Family::Beta3 => Self::beta3(p[0], p[1], p[2]),
            Family::Gamma2 => Self::gamma2(p[0], p[1]),
            Family::GenGamma3 => Self::gen_gamma3(p[0], p[1], p[2]),
            Family::InvGaussian2 => Self::inv_gaussian2(p[0], p[1]),
            Family::Lognormal2 => Self::lognormal2(p[0], p[1]),
            Family::Rayleigh1 => Self::rayleigh1(p[0]),
            Family::TruncNormal2 => Self::trunc_normal2(p[0], p[1]),
            Family::Weibull2 => Self::weibull2(p[0], p[1]),
            Family::Tabulated => unreachable!(),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            DistributionSpec::Normal { .. } => Family::Normal,
            DistributionSpec::GramCharlier3 { .. } => Family::GramCharlier3,
            DistributionSpec::Beta3 { .. } => Family::Beta3,
            DistributionSpec::Gamma2 { .. } => Family::Gamma2,
            DistributionSpec::GenGamma3 { .. } => Family::GenGamma3,
            DistributionSpec::InvGaussian2 { .. } => Family::InvGaussian2,
            DistributionSpec::Lognormal2 { .. } => Family::Lognormal2,
            DistributionSpec::Rayleigh1 { .. } => Family::Rayleigh1,
            DistributionSpec::TruncNormal2 { .. } => Family::TruncNormal2,
            DistributionSpec::Weibull2 { .. } => Family::Weibull2,
            DistributionSpec::Tabulated(_) => Family::Tabulated,
        }
    }

    /// Parameter values in [`Family::param_names`] order (empty for tabulated).
    pub fn params(&self) -> Vec<T> {
        match *self {
            DistributionSpec::Normal { mean, std } => vec![mean, std],
            DistributionSpec::GramCharlier3 { skew, .. } => vec![skew],
            DistributionSpec::Beta3 { shape1, shape2, upper } => vec![shape1, shape2, upper],
            DistributionSpec::Gamma2 { shape, scale } => vec![shape, scale],
            DistributionSpec::GenGamma3 { shape, scale, power } => vec![shape, scale, power],
            DistributionSpec::InvGaussian2 { mean, scale } => vec![mean, scale],
            DistributionSpec::Lognormal2 { log_mean, log_std } => vec![log_mean, log_std],
            DistributionSpec::Rayleigh1 { scale } => vec![scale],
            DistributionSpec::TruncNormal2 { mean, std } => vec![mean, std],
            DistributionSpec::Weibull2 { shape, scale } => vec![shape, scale],
            DistributionSpec::Tabulated(_) => Vec::new(),
        }
    }

    pub fn support(&self) -> Support<T> {
        let inf = T::infinity();
        let zero = T::zero();
        match self {
            DistributionSpec::Normal { .. } | DistributionSpec::GramCharlier3 { .. } => {
                Support::open(-inf, inf)
            }
            DistributionSpec::Beta3 { upper, .. } => Support::open(zero, *upper),
            DistributionSpec::Weibull2 { .. } => Support {
                lower_closed: true,
                ..Support::open(zero, inf)
            },
            DistributionSpec::Tabulated(t) => Support {
                lower: t.lower(),
                upper: t.upper(),
                lower_closed: true,
                upper_closed: true,
            },
            _ => Support::open(zero, inf),
        }
    }

    /// Density. Zero outside the support.
    ///
    /// Gram–Charlier returns the raw expansion, which is nonnegative on
    /// its validated domain but can dip below zero far outside it.
    pub fn pdf(&self, x: T) -> T {
        let zero = T::zero();
        let one = T::one();
        let half = T::lit(0.5);
        if x.is_nan() {
            return x;
        }
        match *self {
            DistributionSpec::Normal { mean, std } => std_normal_pdf((x - mean) / std) / std,
            DistributionSpec::GramCharlier3 { skew, .. } => {
                (one + skew / T::lit(6.0) * (x * x * x - T::lit(3.0) * x)) * std_normal_pdf(x)
            }
            DistributionSpec::Beta3 { shape1, shape2, upper } => {
                if x <= zero || x >= upper {
                    return zero;
                }
                let y = x / upper;
                ((shape1 - one) * y.ln() + (shape2 - one) * (-y).ln_1p()
                    - ln_beta_unchecked(shape1, shape2))
                .exp()
                    / upper
            }
            DistributionSpec::Gamma2 { shape, scale } => {
                if x <= zero {
                    return zero;
                }
                let y = x / scale;
                ((shape - one) * y.ln() - y - ln_gamma_unchecked(shape)).exp() / scale
            }
            DistributionSpec::GenGamma3 { shape, scale, power } => {
                if x <= zero {
                    return zero;
                }
                let y = x / scale;
                let ly = y.ln();
                power / scale
                    * ((shape * power - one) * ly - (power * ly).exp() - ln_gamma_unchecked(shape))
                        .exp()
            }
            DistributionSpec::InvGaussian2 { mean, scale } => {
                if x <= zero {
                    return zero;
                }
                let d = x - mean;
                (scale / (T::TAU() * x * x * x)).sqrt()
                    * (-scale * d * d / (T::lit(2.0) * mean * mean * x)).exp()
            }
            DistributionSpec::Lognormal2 { log_mean, log_std } => {
                if x <= zero {
                    return zero;
                }
                std_normal_pdf((x.ln() - log_mean) / log_std) / (log_std * x)
            }
            DistributionSpec::Rayleigh1 { scale } => {
                if x <= zero {
                    return zero;
                }
                let y = x / scale;
                y / scale * (-half * y * y).exp()
            }
            DistributionSpec::TruncNormal2 { mean, std } => {
                if x <= zero {
                    return zero;
                }
                std_normal_pdf((x - mean) / std) / (std * std_normal_cdf(mean / std))
            }
            DistributionSpec::Weibull2 { shape, scale } => {
                if x < zero {
                    return zero;
                }
                let y = x / scale;
                shape / scale * y.powf(shape - one) * (-y.powf(shape)).exp()
            }
            DistributionSpec::Tabulated(ref t) => t.pdf(x),
        }
    }

    /// Cumulative distribution function.
    pub fn cdf(&self, x: T) -> T {
        let zero = T::zero();
        let one = T::one();
        if x.is_nan() {
            return x;
        }
        let s = self.support();
        if x <= s.lower {
            return zero;
        }
        if x >= s.upper {
            return one;
        }
        match *self {
            DistributionSpec::Normal { mean, std } => std_normal_cdf((x - mean) / std),
            DistributionSpec::GramCharlier3 { skew, .. } => {
                let v = std_normal_cdf(x) - skew / T::lit(6.0) * (x * x - one) * std_normal_pdf(x);
                v.max(zero).min(one)
            }
            DistributionSpec::Beta3 { shape1, shape2, upper } => {
                regularized_beta_unchecked(x / upper, shape1, shape2)
            }
            DistributionSpec::Gamma2 { shape, scale } => regularized_p_unchecked(shape, x / scale),
            DistributionSpec::GenGamma3 { shape, scale, power } => {
                regularized_p_unchecked(shape, (x / scale).powf(power))
            }
            DistributionSpec::InvGaussian2 { mean, scale } => {
                let (first, second) = inv_gaussian_terms(mean, scale, x);
                (T::lit(0.5) * erfc(-first) + second).min(one)
            }
            DistributionSpec::Lognormal2 { log_mean, log_std } => {
                std_normal_cdf((x.ln() - log_mean) / log_std)
            }
            DistributionSpec::Rayleigh1 { scale } => {
                let y = x / scale;
                -(-T::lit(0.5) * y * y).exp_m1()
            }
            DistributionSpec::TruncNormal2 { mean, std } => {
                let sf = self.sf(x);
                if sf < T::lit(0.5) {
                    one - sf
                } else {
                    let r = T::FRAC_1_SQRT_2() / std;
                    let num = erf((x - mean) * r) + erf(mean * r);
                    (num / erfc(-mean * r)).max(zero)
                }
            }
            DistributionSpec::Weibull2 { shape, scale } => -(-(x / scale).powf(shape)).exp_m1(),
            DistributionSpec::Tabulated(ref t) => t.cdf(x),
        }
    }

    /// Survival function `1 - cdf`, accurate in the upper tail.
    pub fn sf(&self, x: T) -> T {
        let zero = T::zero();
        let one = T::one();
        if x.is_nan() {
            return x;
        }
        let s = self.support();
        if x <= s.lower {
            return one;
        }
        if x >= s.upper {
            return zero;
        }
        match *self {
            DistributionSpec::Normal { mean, std } => std_normal_cdf(-(x - mean) / std),
            DistributionSpec::GramCharlier3 { skew, .. } => {
                let v = std_normal_cdf(-x) + skew / T::lit(6.0) * (x * x - one) * std_normal_pdf(x);
                v.max(zero).min(one)
            }
            DistributionSpec::Beta3 { shape1, shape2, upper } => {
                regularized_beta_unchecked(one - x / upper, shape2, shape1)
            }
            DistributionSpec::Gamma2 { shape, scale } => regularized_q_unchecked(shape, x / scale),
            DistributionSpec::GenGamma3 { shape, scale, power } => {
                regularized_q_unchecked(shape, (x / scale).powf(power))
            }
            DistributionSpec::InvGaussian2 { mean, scale } => {
                let (first, second) = inv_gaussian_terms(mean, scale, x);
                (T::lit(0.5) * erfc(first) - second).max(zero)
            }
            DistributionSpec::Lognormal2 { log_mean, log_std } => {
                std_normal_cdf(-(x.ln() - log_mean) / log_std)
            }
            DistributionSpec::Rayleigh1 { scale } => {
                let y = x / scale;
                (-T::lit(0.5) * y * y).exp()
            }
            DistributionSpec::TruncNormal2 { mean, std } => {
                let r = T::FRAC_1_SQRT_2() / std;
                erfc((x - mean) * r) / erfc(-mean * r)
            }
            DistributionSpec::Weibull2 { shape, scale } => (-(x / scale).powf(shape)).exp(),
            DistributionSpec::Tabulated(ref t) => one - t.cdf(x),
        }
    }

    /// Stationary mean, the `μ` of the drift.
    pub fn mean(&self) -> T {
        let one = T::one();
        match *self {
            DistributionSpec::Normal { mean, .. } => mean,
            DistributionSpec::GramCharlier3 { .. } => T::zero(),
            DistributionSpec::Beta3 { shape1, shape2, upper } => upper * shape1 / (shape1 + shape2),
            DistributionSpec::Gamma2 { shape, scale } => shape * scale,
            DistributionSpec::GenGamma3 { shape, scale, power } => {
                scale * (ln_gamma_unchecked(shape + one / power) - ln_gamma_unchecked(shape)).exp()
            }
            DistributionSpec::InvGaussian2 { mean, .. } => mean,
            DistributionSpec::Lognormal2 { log_mean, log_std } => {
                (log_mean + T::lit(0.5) * log_std * log_std).exp()
            }
            DistributionSpec::Rayleigh1 { scale } => scale * (T::FRAC_PI_2()).sqrt(),
            DistributionSpec::TruncNormal2 { mean, std } => {
                mean + std * trunc_normal_hazard(mean / std)
            }
            DistributionSpec::Weibull2 { shape, scale } => {
                scale * ln_gamma_unchecked(one + one / shape).exp()
            }
            DistributionSpec::Tabulated(ref t) => t.mean(),
        }
    }

    pub fn variance(&self) -> T {
        let one = T::one();
        let two = T::lit(2.0);
        match *self {
            DistributionSpec::Normal { std, .. } => std * std,
            DistributionSpec::GramCharlier3 { .. } => one,
            DistributionSpec::Beta3 { shape1, shape2, upper } => {
                let s = shape1 + shape2;
                upper * upper * shape1 * shape2 / (s * s * (s + one))
            }
            DistributionSpec::Gamma2 { shape, scale } => shape * scale * scale,
            DistributionSpec::GenGamma3 { shape, scale, power } => {
                let lg = ln_gamma_unchecked(shape);
                let m1 = (ln_gamma_unchecked(shape + one / power) - lg).exp();
                let m2 = (ln_gamma_unchecked(shape + two / power) - lg).exp();
                scale * scale * (m2 - m1 * m1)
            }
            DistributionSpec::InvGaussian2 { mean, scale } => mean * mean * mean / scale,
            DistributionSpec::Lognormal2 { log_mean, log_std } => {
                let s2 = log_std * log_std;
                s2.exp_m1() * (two * log_mean + s2).exp()
            }
            DistributionSpec::Rayleigh1 { scale } => {
                (T::lit(4.0) - T::PI()) / two * scale * scale
            }
            DistributionSpec::TruncNormal2 { mean, std } => {
                let k = mean / std;
                let h = trunc_normal_hazard(k);
                std * std * (one - k * h - h * h)
            }
            DistributionSpec::Weibull2 { shape, scale } => {
                let m1 = ln_gamma_unchecked(one + one / shape).exp();
                let m2 = ln_gamma_unchecked(one + two / shape).exp();
                scale * scale * (m2 - m1 * m1)
            }
            DistributionSpec::Tabulated(ref t) => t.variance(),
        }
    }

    /// Inverse cdf by bracketed root finding; `p` is clamped to `[0, 1]`.
    pub fn quantile(&self, p: T) -> Result<T> {
        let s = self.support();
        if p.is_nan() {
            return Err(Error::domain("quantile", "probability is NaN"));
        }
        if p <= T::zero() {
            return Ok(s.lower);
        }
        if p >= T::one() {
            return Ok(s.upper);
        }
        let one = T::one();
        // Closed forms first.
        match *self {
            DistributionSpec::Weibull2 { shape, scale } => {
                return Ok(scale * (-(-p).ln_1p()).powf(one / shape));
            }
            DistributionSpec::Rayleigh1 { scale } => {
                return Ok(scale * (-T::lit(2.0) * (-p).ln_1p()).sqrt());
            }
            _ => {}
        }
        let lower_tail = p <= T::lit(0.5);
        let q = one - p;
        let g = |x: T| {
            if lower_tail {
                self.cdf(x) - p
            } else {
                q - self.sf(x)
            }
        };
        let (lo, hi) = self.bracket(&g)?;
        brent("quantile", g, lo, hi, T::min_positive_value())
    }

    fn bracket<F: Fn(T) -> T>(&self, g: &F) -> Result<(T, T)> {
        let s = self.support();
        let center = self.mean();
        let spread = self.variance().sqrt().max(T::epsilon() * center.abs().max(T::one()));
        let two = T::lit(2.0);
        let mut lo = if s.lower.is_finite() { s.lower } else { center - spread };
        let mut hi = if s.upper.is_finite() { s.upper } else { center + spread };
        let mut step = spread;
        let mut tries = 0;
        while g(lo) > T::zero() {
            step *= two;
            lo = center - step;
            tries += 1;
            if tries > 2000 || !lo.is_finite() {
                return Err(Error::domain("quantile", "could not bracket the lower tail"));
            }
        }
        step = spread;
        tries = 0;
        while g(hi) < T::zero() {
            step *= two;
            hi = center + step;
            tries += 1;
            if tries > 2000 || !hi.is_finite() {
                return Err(Error::domain("quantile", "could not bracket the upper tail"));
            }
        }
        Ok((lo, hi))
    }
}

/// `φ(k)/Φ(k)`, stable for very negative `k`.
pub(crate) fn trunc_normal_hazard<T: Real>(k: T) -> T {
    (T::lit(2.0) / T::PI()).sqrt() / erfcx(-k * T::FRAC_1_SQRT_2())
}

/// Pieces of the inverse Gaussian cdf: `cdf = ½erfc(-w) + t`, `sf = ½erfc(w) - t`.
fn inv_gaussian_terms<T: Real>(mean: T, scale: T, x: T) -> (T, T) {
    let root = (scale / (T::lit(2.0) * x)).sqrt();
    let w = root * (x - mean) / mean;
    let z = root * (x + mean) / mean;
    let d = x - mean;
    let t = T::lit(0.5) * (-scale * d * d / (T::lit(2.0) * mean * mean * x)).exp() * erfcx(z);
    (w, t)
}

impl<T: Real> fmt::Display for DistributionSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = self.family();
        write!(f, "{family}")?;
        if let DistributionSpec::Tabulated(t) = self {
            return write!(f, "({} nodes)", t.abscissae().len());
        }
        f.write_str("(")?;
        for (i, (name, v)) in family.param_names().iter().zip(self.params()).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={v}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests;
