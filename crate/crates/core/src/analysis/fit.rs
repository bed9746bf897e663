//! Method-of-moments calibration of `(spec, α)` from one observed series.

use serde::{Deserialize, Serialize};

use super::{empirical_acf, fit_alpha_auto, ks_distance, with_lags};
use crate::distributions::{trunc_normal_hazard, DistributionSpec, Family};
use crate::roots::brent;
use crate::specfun::ln_gamma_unchecked;
use crate::{Error, Real, Result};

pub const MIN_SERIES_LEN: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyScore<T> {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct CalibrationResult<T> {
    pub spec: DistributionSpec<T>,
    pub alpha_hat: T,
    pub ks: T,
    /// Every family tried, best first.
    pub goodness: Vec<FamilyScore<T>>,
}

struct Stats<T> {
    mean: T,
    var: T,
    skew: T,
    max: T,
}

fn stats<T: Real>(xs: &[T]) -> Result<Stats<T>> {
    let n = T::from_usize_lossy(xs.len());
    let mean = xs.iter().copied().sum::<T>() / n;
    let (mut m2, mut m3) = (T::zero(), T::zero());
    for &x in xs {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    if !(m2 > T::zero()) {
        return Err(Error::DegenerateSeries);
    }
    let skew = (m3 / n) / (m2 / n).powf(T::lit(1.5));
    let var = m2 / (n - T::one());
    let max = xs.iter().copied().fold(T::neg_infinity(), T::max);
    Ok(Stats { mean, var, skew, max })
}

fn require_positive<T: Real>(family: Family, s: &Stats<T>) -> Result<()> {
    if s.mean > T::zero() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{family} needs a positive sample mean, got {}",
            s.mean
        )))
    }
}

/// Brent on the first sign change of `f` along `grid`.
fn scan_root<T: Real>(what: &str, f: impl Fn(T) -> T, grid: &[T]) -> Result<T> {
    let mut prev: Option<(T, T)> = None;
    for &x in grid {
        let fx = f(x);
        if !fx.is_finite() {
            continue;
        }
        if let Some((xp, fp)) = prev {
            if fp.signum() != fx.signum() || fx == T::zero() {
                return brent(what, &f, xp, x, T::tolerance(1e-13) * x.abs().max(T::one()));
            }
        }
        prev = Some((x, fx));
    }
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    Err(Error::NonConvergence {
        what: what.to_string(),
        lower: lo.as_f64(),
        upper: hi.as_f64(),
        f_lower: f(lo).as_f64(),
        f_upper: f(hi).as_f64(),
        iterations: grid.len(),
    })
}

fn log_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1)).exp())
        .collect()
}

/// `E[Y^r]` for `Y^p ~ Gamma(k, 1)`.
fn gg_moment<T: Real>(k: T, p: T, r: T) -> T {
    (ln_gamma_unchecked(k + r / p) - ln_gamma_unchecked(k)).exp()
}

fn gg_cv2<T: Real>(k: T, p: T) -> T {
    let m1 = gg_moment(k, p, T::one());
    gg_moment(k, p, T::lit(2.0)) / (m1 * m1) - T::one()
}

fn gg_skew<T: Real>(k: T, p: T) -> T {
    let m1 = gg_moment(k, p, T::one());
    let m2 = gg_moment(k, p, T::lit(2.0));
    let m3 = gg_moment(k, p, T::lit(3.0));
    let var = m2 - m1 * m1;
    (m3 - T::lit(3.0) * m1 * var - m1 * m1 * m1) / var.powf(T::lit(1.5))
}

/// Shape `k` matching the squared coefficient of variation at power `p`.
fn gg_shape<T: Real>(cv2: T, p: T) -> Result<T> {
    let ln_k = scan_root(
        "generalized gamma shape",
        |lk: T| gg_cv2(lk.exp(), p).ln() - cv2.ln(),
        &(0..=40).map(|i| T::lit(-9.0 + 0.45 * i as f64)).collect::<Vec<_>>(),
    )?;
    Ok(ln_k.exp())
}

fn beta_skew<T: Real>(a: T, b: T) -> T {
    let two = T::lit(2.0);
    two * (b - a) * (a + b + T::one()).sqrt() / ((a + b + two) * (a * b).sqrt())
}

/// Beta shapes matching mean and variance on `(0, upper)`.
fn beta_shapes<T: Real>(s: &Stats<T>, upper: T) -> (T, T) {
    let m = s.mean / upper;
    let v = s.var / (upper * upper);
    let common = m * (T::one() - m) / v - T::one();
    (m * common, (T::one() - m) * common)
}

fn tn_ratio<T: Real>(k: T) -> T {
    let h = trunc_normal_hazard(k);
    (k + h) / (T::one() - k * h - h * h).sqrt()
}

fn weibull_cv2<T: Real>(k: T) -> T {
    gg_cv2(T::one(), k)
}

/// Method-of-moments estimate of one family's parameters.
pub fn fit_spec<T: Real>(series: &[T], family: Family) -> Result<DistributionSpec<T>> {
    let s = stats(series)?;
    let one = T::one();
    let two = T::lit(2.0);
    let sd = s.var.sqrt();
    match family {
        Family::Normal => DistributionSpec::normal(s.mean, sd),
        Family::GramCharlier3 => DistributionSpec::gram_charlier3(s.skew),
        Family::Beta3 => {
            require_positive(family, &s)?;
            let lo = s.max * T::lit(1.0 + 1e-9);
            let upper = scan_root(
                "beta3 upper bound",
                |u: T| {
                    let (a, b) = beta_shapes(&s, u);
                    if a > T::zero() && b > T::zero() {
                        beta_skew(a, b) - s.skew
                    } else {
                        T::nan()
                    }
                },
                &log_grid(lo, lo * T::lit(1e4), 120),
            )?;
            let (a, b) = beta_shapes(&s, upper);
            DistributionSpec::beta3(a, b, upper)
        }
        Family::Gamma2 => {
            require_positive(family, &s)?;
            DistributionSpec::gamma2(s.mean * s.mean / s.var, s.var / s.mean)
        }
        Family::GenGamma3 => {
            require_positive(family, &s)?;
            let cv2 = s.var / (s.mean * s.mean);
            let power = scan_root(
                "generalized gamma power",
                |p: T| match gg_shape(cv2, p) {
                    Ok(k) => gg_skew(k, p) - s.skew,
                    Err(_) => T::nan(),
                },
                &log_grid(T::lit(0.1), T::lit(20.0), 60),
            )?;
            let shape = gg_shape(cv2, power)?;
            let scale = s.mean / gg_moment(shape, power, one);
            DistributionSpec::gen_gamma3(shape, scale, power)
        }
        Family::InvGaussian2 => {
            require_positive(family, &s)?;
            DistributionSpec::inv_gaussian2(s.mean, s.mean * s.mean * s.mean / s.var)
        }
        Family::Lognormal2 => {
            require_positive(family, &s)?;
            let s2 = (s.var / (s.mean * s.mean)).ln_1p();
            DistributionSpec::lognormal2(s.mean.ln() - s2 / two, s2.sqrt())
        }
        Family::Rayleigh1 => {
            require_positive(family, &s)?;
            DistributionSpec::rayleigh1(s.mean / T::FRAC_PI_2().sqrt())
        }
        Family::TruncNormal2 => {
            require_positive(family, &s)?;
            let target = s.mean / sd;
            let hi = T::lit(50.0).max(two * target);
            let k = brent(
                "truncated normal location",
                |k: T| tn_ratio(k) - target,
                T::lit(-20.0),
                hi,
                T::tolerance(1e-13),
            )?;
            let std = s.mean / (k + trunc_normal_hazard(k));
            DistributionSpec::trunc_normal2(k * std, std)
        }
        Family::Weibull2 => {
            require_positive(family, &s)?;
            let cv2 = s.var / (s.mean * s.mean);
            let shape = scan_root(
                "weibull shape",
                |k: T| weibull_cv2(k).ln() - cv2.ln(),
                &log_grid(T::lit(0.05), T::lit(200.0), 80),
            )?;
            DistributionSpec::weibull2(shape, s.mean / gg_moment(one, shape, one))
        }
        Family::Tabulated => Err(Error::Precondition(
            "tabulated densities cannot be fitted by moments".into(),
        )),
    }
}

/// `α̂` from the sample autocorrelation of a series spaced `spacing` apart.
pub fn fit_series_alpha<T: Real>(series: &[T], spacing: T) -> Result<T> {
    let r1 = empirical_acf(series, 1)?[1];
    if !(r1 > T::zero()) {
        return Err(Error::NonPositiveAcf {
            lag: spacing.as_f64(),
            value: r1.as_f64(),
        });
    }
    let reach = (-r1.ln()).recip().ceil().to_usize().unwrap_or(usize::MAX);
    let lags = reach.max(3).min(series.len() / 10);
    let acf = empirical_acf(series, lags)?;
    fit_alpha_auto(&with_lags(&acf, spacing))
}

/// Fits `(spec, α)` to a series. With `family = None` every catalogue family
/// is tried and the one with the smallest KS distance wins.
pub fn fit_distribution<T: Real>(
    series: &[T],
    family: Option<Family>,
    spacing: T,
) -> Result<CalibrationResult<T>> {
    if series.len() < MIN_SERIES_LEN {
        return Err(Error::Precondition(format!(
            "need at least {MIN_SERIES_LEN} observations, got {}",
            series.len()
        )));
    }
    if series.iter().any(|x| !x.is_finite()) {
        return Err(Error::Precondition("series contains non-finite values".into()));
    }
    if !(spacing > T::zero()) {
        return Err(Error::Precondition(format!("sample spacing must be positive, got {spacing}")));
    }
    let alpha_hat = fit_series_alpha(series, spacing)?;
    let families: Vec<Family> = match family {
        Some(f) => vec![f],
        None => Family::CATALOG.to_vec(),
    };
    let mut best: Option<(DistributionSpec<T>, T)> = None;
    let mut goodness = Vec::new();
    let mut last_err = None;
    for f in families {
        match fit_spec(series, f).and_then(|spec| ks_distance(series, &spec).map(|d| (spec, d))) {
            Ok((spec, d)) => {
                goodness.push(FamilyScore {
                    family: f.name().to_string(),
                    ks: Some(d),
                    error: None,
                });
                if best.as_ref().is_none_or(|(_, b)| d < *b) {
                    best = Some((spec, d));
                }
            }
            Err(e) => {
                goodness.push(FamilyScore {
                    family: f.name().to_string(),
                    ks: None,
                    error: Some(e.to_string()),
                });
                last_err = Some(e);
            }
        }
    }
    goodness.sort_by(|a, b| match (a.ks, b.ks) {
        (Some(x), Some(y)) => x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    match best {
        Some((spec, ks)) => Ok(CalibrationResult {
            spec,
            alpha_hat,
            ks,
            goodness,
        }),
        None => Err(last_err.unwrap_or(Error::DegenerateSeries)),
    }
}
