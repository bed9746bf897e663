//! Checks that an ensemble has the target law and an `e^{-ατ}`
//! autocorrelation, and fits `(spec, α)` to a measured series.

mod fit;

use serde::{Deserialize, Serialize};

use crate::builder::{default_grid, fpe_residual, FpeResidual, SdeModel};
use crate::distributions::DistributionSpec;
use crate::quadrature::Integrator;
use crate::simulator::PathEnsemble;
use crate::{Error, Real, Result};

pub use fit::{fit_distribution, fit_series_alpha, fit_spec, CalibrationResult, FamilyScore, MIN_SERIES_LEN};

/// Upper 99% point of `√n_eff · D` for the exact OU process, measured by
/// Monte-Carlo at `αdt = 1e-3` with records `0.05/α` apart. Frozen.
pub const KS_SCALED_THRESHOLD: f64 = 1.10;
pub const MEAN_TOLERANCE: f64 = 0.01;
pub const VARIANCE_TOLERANCE: f64 = 0.03;
pub const ACF_TOLERANCE: f64 = 0.03;
/// ACF comparison window, in units of `1/α`.
pub const ACF_WINDOW: f64 = 2.0;

fn moments<T: Real>(xs: &[T]) -> (T, T) {
    let n = T::from_usize_lossy(xs.len());
    let mean = xs.iter().copied().sum::<T>() / n;
    let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / n;
    (mean, var)
}

/// Biased sample autocorrelation `r̂(0..=max_lag)`.
pub fn empirical_acf<T: Real>(series: &[T], max_lag: usize) -> Result<Vec<T>> {
    if series.len() < 10 * max_lag.max(1) {
        return Err(Error::Precondition(format!(
            "series of length {} is too short for {max_lag} lags (need >= {})",
            series.len(),
            10 * max_lag.max(1)
        )));
    }
    let (mean, _) = moments(series);
    let dev: Vec<T> = series.iter().map(|&x| x - mean).collect();
    let c0: T = dev.iter().map(|&d| d * d).sum();
    if !(c0 > T::zero()) {
        return Err(Error::DegenerateSeries);
    }
    Ok((0..=max_lag)
        .map(|k| {
            if k == 0 {
                return T::one();
            }
            dev.iter().zip(&dev[k..]).map(|(&a, &b)| a * b).sum::<T>() / c0
        })
        .collect())
}

/// Autocorrelation pooled over all paths, about the grand mean, using
/// time indices from `discard` on.
pub fn ensemble_acf<T: Real>(ens: &PathEnsemble<T>, max_lag: usize, discard: usize) -> Result<Vec<T>> {
    let len = ens.n_times().saturating_sub(discard);
    if len < 10 * max_lag.max(1) {
        return Err(Error::Precondition(format!(
            "paths have {len} usable samples, need >= {} for {max_lag} lags",
            10 * max_lag.max(1)
        )));
    }
    let all: Vec<T> = ens.paths().flat_map(|p| p[discard..].iter().copied()).collect();
    let (mean, _) = moments(&all);
    let mut num = vec![T::zero(); max_lag + 1];
    for p in ens.paths() {
        let dev: Vec<T> = p[discard..].iter().map(|&x| x - mean).collect();
        for (k, acc) in num.iter_mut().enumerate() {
            *acc += dev.iter().zip(&dev[k..]).map(|(&a, &b)| a * b).sum::<T>();
        }
    }
    if !(num[0] > T::zero()) {
        return Err(Error::DegenerateSeries);
    }
    let c0 = num[0];
    Ok(num.into_iter().map(|c| c / c0).collect())
}

/// Least-squares `α` from `-ln r̂(τ) = α τ` over `τ ∈ [window.0, window.1]`.
///
/// The line is forced through the origin because `r(0) = 1` exactly.
pub fn fit_alpha<T: Real>(acf: &[(T, T)], window: (T, T)) -> Result<T> {
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for &(tau, r) in acf {
        if tau < window.0 || tau > window.1 {
            continue;
        }
        if !(r > T::zero()) {
            return Err(Error::NonPositiveAcf {
                lag: tau.as_f64(),
                value: r.as_f64(),
            });
        }
        let y = -r.ln();
        sxy += tau * y;
        sxx += tau * tau;
    }
    if !(sxx > T::zero()) {
        return Err(Error::Precondition(format!(
            "no positive lags inside the fit window [{}, {}]",
            window.0, window.1
        )));
    }
    let alpha = sxy / sxx;
    if alpha > T::zero() {
        Ok(alpha)
    } else {
        Err(Error::Precondition(format!("fitted decay rate {alpha} is not positive")))
    }
}

/// [`fit_alpha`] over `[0, max(1/α̂₀, 3 lags)]` with `α̂₀` from the first lag.
pub fn fit_alpha_auto<T: Real>(acf: &[(T, T)]) -> Result<T> {
    let &(tau1, r1) = acf
        .iter()
        .find(|(tau, _)| *tau > T::zero())
        .ok_or_else(|| Error::Precondition("autocorrelation has no positive lag".into()))?;
    if !(r1 > T::zero()) {
        return Err(Error::NonPositiveAcf {
            lag: tau1.as_f64(),
            value: r1.as_f64(),
        });
    }
    let alpha0 = -r1.ln() / tau1;
    let reach = if alpha0 > T::zero() { alpha0.recip() } else { T::infinity() };
    fit_alpha(acf, (T::zero(), reach.max(T::lit(3.0) * tau1)))
}

/// Pairs lag index with lag time for a uniformly sampled series.
pub fn with_lags<T: Real>(acf: &[T], spacing: T) -> Vec<(T, T)> {
    acf.iter()
        .enumerate()
        .map(|(k, &r)| (spacing * T::from_usize_lossy(k), r))
        .collect()
}

/// Kolmogorov–Smirnov statistic `sup |F̂_n - F|`.
pub fn ks_distance<T: Real>(series: &[T], spec: &DistributionSpec<T>) -> Result<T> {
    if series.is_empty() {
        return Err(Error::Precondition("KS distance of an empty sample".into()));
    }
    let mut sorted = series.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = T::from_usize_lossy(sorted.len());
    let mut d = T::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let f = spec.cdf(x);
        let above = T::from_usize_lossy(i + 1) / n - f;
        let below = f - T::from_usize_lossy(i) / n;
        d = d.max(above).max(below);
    }
    Ok(d.min(T::one()))
}

/// Effective number of independent samples in `n_paths` AR(1)-like series
/// of `len` points spaced `spacing` apart with decay rate `alpha`.
pub fn effective_samples<T: Real>(n_paths: usize, len: usize, spacing: T, alpha: T) -> T {
    let rho_term = (alpha * spacing * T::lit(0.5)).tanh();
    T::from_usize_lossy(n_paths * len) * rho_term
}

/// KS pass threshold for a serially correlated ensemble:
/// [`KS_SCALED_THRESHOLD`]` / √n_eff`.
pub fn ks_threshold<T: Real>(n_eff: T) -> T {
    T::lit(KS_SCALED_THRESHOLD) / n_eff.sqrt()
}

/// `(mean, variance)` of a spec by adaptive quadrature.
pub fn quadrature_moments<T: Real>(spec: &DistributionSpec<T>) -> (T, T) {
    let s = spec.support();
    let integ = Integrator::new(T::min_positive_value(), T::tolerance(1e-12));
    let mass = integ.integrate(|x| spec.pdf(x), s.lower, s.upper).value;
    let mean = integ.integrate(|x| x * spec.pdf(x), s.lower, s.upper).value / mass;
    let var = integ
        .integrate(|x| (x - mean) * (x - mean) * spec.pdf(x), s.lower, s.upper)
        .value
        / mass;
    (mean, var)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    /// Leading time indices dropped from every path.
    pub discard: usize,
    /// Overrides the calibrated KS threshold.
    pub ks_threshold: Option<f64>,
    pub mean_tolerance: f64,
    pub variance_tolerance: f64,
    pub acf_tolerance: f64,
    /// Largest lag compared, in units of `1/α`.
    pub acf_window: f64,
    pub with_fpe: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            discard: 0,
            ks_threshold: None,
            mean_tolerance: MEAN_TOLERANCE,
            variance_tolerance: VARIANCE_TOLERANCE,
            acf_tolerance: ACF_TOLERANCE,
            acf_window: ACF_WINDOW,
            with_fpe: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassFlags {
    pub ks: bool,
    pub mean: bool,
    pub variance: bool,
    pub acf: bool,
    pub fpe: Option<bool>,
}

impl PassFlags {
    pub fn all(&self) -> bool {
        self.ks && self.mean && self.variance && self.acf && self.fpe.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport<T> {
    pub n_paths: usize,
    pub n_samples: usize,
    pub effective_samples: T,
    pub empirical_mean: T,
    pub empirical_var: T,
    pub target_mean: T,
    pub target_var: T,
    pub ks_distance: T,
    pub ks_threshold: T,
    /// `(τ, r̂(τ))` for `τ ∈ [0, acf_window/α]`.
    pub acf: Vec<(T, T)>,
    pub acf_max_gap: T,
    pub alpha: T,
    pub fitted_alpha: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fpe_residual_summary: Option<FpeResidual<T>>,
    pub pass_flags: PassFlags,
    pub model_hash: String,
}

impl<T: Real> ValidationReport<T> {
    pub fn passed(&self) -> bool {
        self.pass_flags.all()
    }

    /// `tau,acf,target` rows for plotting.
    pub fn acf_csv(&self) -> String {
        let mut out = String::from("tau,acf,target\n");
        for &(tau, r) in &self.acf {
            out.push_str(&format!("{tau},{r},{}\n", (-self.alpha * tau).exp()));
        }
        out
    }
}

/// Compares an ensemble with the model it was simulated from.
pub fn validate<T: Real>(
    ens: &PathEnsemble<T>,
    model: &SdeModel<T>,
    opts: &ValidationOptions,
) -> Result<ValidationReport<T>> {
    let spacing = ens
        .spacing()
        .filter(|s| *s > T::zero())
        .ok_or_else(|| Error::Precondition("ensemble needs at least two recorded times".into()))?;
    let alpha = model.alpha();
    let max_lag = (T::lit(opts.acf_window) / (alpha * spacing))
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX)
        .max(1);
    let acf = ensemble_acf(ens, max_lag, opts.discard)?;
    let acf = with_lags(&acf, spacing);
    let acf_max_gap = acf
        .iter()
        .map(|&(tau, r)| (r - (-alpha * tau).exp()).abs())
        .fold(T::zero(), T::max);
    let (fitted_alpha, fit_error) = match fit_alpha_auto(&acf) {
        Ok(a) => (Some(a), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let samples: Vec<T> = ens
        .paths()
        .flat_map(|p| p[opts.discard..].iter().copied())
        .collect();
    let (empirical_mean, empirical_var) = moments(&samples);
    let spec = model.spec();
    let (target_mean, target_var) = quadrature_moments(spec);
    let ks = ks_distance(&samples, spec)?;
    let len = ens.n_times() - opts.discard;
    let n_eff = effective_samples(ens.n_paths, len, spacing, alpha);
    let threshold = opts
        .ks_threshold
        .map(T::lit)
        .unwrap_or_else(|| ks_threshold(n_eff));
    let fpe = if opts.with_fpe {
        Some(fpe_residual(model, spec, &default_grid(spec, 601)?))
    } else {
        None
    };
    let mean_scale = target_mean.abs().max(target_var.sqrt());
    let pass_flags = PassFlags {
        ks: ks <= threshold,
        mean: (empirical_mean - target_mean).abs() <= T::lit(opts.mean_tolerance) * mean_scale,
        variance: (empirical_var - target_var).abs() <= T::lit(opts.variance_tolerance) * target_var,
        acf: acf_max_gap <= T::lit(opts.acf_tolerance),
        fpe: fpe.as_ref().map(|f| f.passed),
    };
    Ok(ValidationReport {
        n_paths: ens.n_paths,
        n_samples: samples.len(),
        effective_samples: n_eff,
        empirical_mean,
        empirical_var,
        target_mean,
        target_var,
        ks_distance: ks,
        ks_threshold: threshold,
        acf,
        acf_max_gap,
        alpha,
        fitted_alpha,
        fit_error,
        fpe_residual_summary: fpe,
        pass_flags,
        model_hash: model.hash(),
    })
}

/// `x,empirical,target` rows: a normalized histogram against the pdf.
pub fn density_csv<T: Real>(samples: &[T], spec: &DistributionSpec<T>, bins: usize) -> String {
    let mut out = String::from("x,empirical,target\n");
    if samples.is_empty() || bins == 0 {
        return out;
    }
    let lo = samples.iter().copied().fold(T::infinity(), T::min);
    let hi = samples.iter().copied().fold(T::neg_infinity(), T::max);
    let width = (hi - lo) / T::from_usize_lossy(bins);
    if !(width > T::zero()) {
        return out;
    }
    let mut counts = vec![0usize; bins];
    for &x in samples {
        let k = ((x - lo) / width).floor().to_usize().unwrap_or(0).min(bins - 1);
        counts[k] += 1;
    }
    let n = T::from_usize_lossy(samples.len());
    for (k, &c) in counts.iter().enumerate() {
        let x = lo + width * (T::from_usize_lossy(k) + T::lit(0.5));
        let dens = T::from_usize_lossy(c) / (n * width);
        out.push_str(&format!("{x},{dens},{}\n", spec.pdf(x)));
    }
    out
}

#[cfg(test)]
mod tests;
