//! Residual of the integrated stationary Fokker–Planck equation,
//! `R(x) = -a(x) p(x) + ½ d/dx [b²(x) p(x)]`, which vanishes for a
//! correctly built model.

use serde::{Deserialize, Serialize};

use super::SdeModel;
use crate::distributions::DistributionSpec;
use crate::{Real, Result};

/// Pass threshold for `max |R| / max |a p|`.
pub const FPE_TOLERANCE: f64 = 1e-4;
/// Pass threshold for `b² p` at the tail probes relative to its maximum.
pub const TAIL_TOLERANCE: f64 = 1e-8;
/// Probability mass beyond each tail probe.
const TAIL_PROBE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FpeResidual<T> {
    pub max_abs: T,
    pub rms: T,
    /// `max |a(x) p(x)|` over the grid.
    pub scale: T,
    pub scaled_max: T,
    pub points: usize,
    /// `b² p` at the lower and upper tail probes, relative to its grid maximum.
    pub tail_lower: T,
    pub tail_upper: T,
    pub tails_ok: bool,
    pub passed: bool,
}

impl<T: Real> FpeResidual<T> {
    pub fn to_f64(&self) -> FpeResidual<f64> {
        FpeResidual {
            max_abs: self.max_abs.as_f64(),
            rms: self.rms.as_f64(),
            scale: self.scale.as_f64(),
            scaled_max: self.scaled_max.as_f64(),
            points: self.points,
            tail_lower: self.tail_lower.as_f64(),
            tail_upper: self.tail_upper.as_f64(),
            tails_ok: self.tails_ok,
            passed: self.passed,
        }
    }
}

/// `n` points uniform in `x` between the `1e-6` and `1 - 1e-6` quantiles.
pub fn default_grid<T: Real>(spec: &DistributionSpec<T>, n: usize) -> Result<Vec<T>> {
    let tail = T::tolerance(1e-6);
    let lo = spec.quantile(tail)?;
    let hi = spec.quantile(T::one() - tail)?;
    let span = T::from_usize_lossy(n.max(2) - 1);
    Ok((0..n)
        .map(|i| lo + (hi - lo) * T::from_usize_lossy(i) / span)
        .collect())
}

/// Evaluates the residual on `grid` (which should lie inside the support)
/// with central differences of step `1e-5 · std`, shrunk near finite bounds.
pub fn fpe_residual<T: Real>(
    model: &SdeModel<T>,
    spec: &DistributionSpec<T>,
    grid: &[T],
) -> FpeResidual<T> {
    let support = spec.support();
    let base_h = T::lit(1e-5) * spec.variance().sqrt();
    let half = T::lit(0.5);
    // Near a bound the flux can behave like a fractional power of the
    // distance to it, so the step must be small relative to that distance.
    let near = T::lit(1e-3);
    let flux = |x: T| model.diffusion_squared(x) * spec.pdf(x);
    let (mut max_abs, mut sum_sq, mut scale, mut flux_max) =
        (T::zero(), T::zero(), T::zero(), T::zero());
    for &x in grid {
        let mut h = base_h;
        if support.lower.is_finite() {
            h = h.min(near * (x - support.lower));
        }
        if support.upper.is_finite() {
            h = h.min(near * (support.upper - x));
        }
        let p = spec.pdf(x);
        let ap = model.drift(x) * p;
        let r = if h > T::zero() {
            -ap + half * (flux(x + h) - flux(x - h)) / (h + h)
        } else {
            -ap
        };
        max_abs = max_abs.max(r.abs());
        sum_sq += r * r;
        scale = scale.max(ap.abs());
        flux_max = flux_max.max(flux(x));
    }
    let n = grid.len();
    let rms = if n > 0 {
        (sum_sq / T::from_usize_lossy(n)).sqrt()
    } else {
        T::zero()
    };
    let probe = T::tolerance(TAIL_PROBE);
    let tail_at = |p: T| {
        spec.quantile(p)
            .map(|x| flux(x) / flux_max)
            .unwrap_or(T::nan())
    };
    let tail_lower = tail_at(probe);
    let tail_upper = tail_at(T::one() - probe);
    let tail_tol = T::lit(TAIL_TOLERANCE);
    let tails_ok = tail_lower <= tail_tol && tail_upper <= tail_tol;
    let scaled_max = if scale > T::zero() { max_abs / scale } else { T::infinity() };
    FpeResidual {
        max_abs,
        rms,
        scale,
        scaled_max,
        points: n,
        tail_lower,
        tail_upper,
        tails_ok,
        passed: scaled_max <= T::lit(FPE_TOLERANCE),
    }
}
