//! Diffusion tabulated from the defining integral.
//!
//! `I(x) = ∫ α(μ - z) p(z) dz` is accumulated from the lower end for
//! `x < μ` and from the upper end (with the sign flipped) for `x ≥ μ`, so
//! every panel integrand is nonnegative and the relative accuracy of `I`
//! survives into the far tails. Between nodes `ln I` is interpolated by
//! cubic Hermite using the exact slope `α(μ - x) p(x) / I(x)`; nodes are
//! inserted at interval midpoints until the interpolant agrees with a
//! direct evaluation to [`REFINE_TOLERANCE`] relative.

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::quadrature::Integrator;
use crate::{Error, Real, Result};

/// Probability mass left outside the tabulated range on each side.
pub const TAIL_MASS: f64 = 1e-9;
/// Relative agreement required between interpolated and direct `I(x)`.
pub const REFINE_TOLERANCE: f64 = 1e-9;
pub const MIN_GRID_SIZE: usize = 64;
const MAX_NODES: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDiagnostics {
    pub nodes: usize,
    pub lower_node: f64,
    pub upper_node: f64,
    /// Relative mismatch at `μ` between the two one-sided accumulations.
    pub mean_imbalance: f64,
    /// Largest midpoint interpolation error over the accepted intervals.
    pub max_refinement_error: f64,
    pub integrals_converged: bool,
}

#[derive(Debug, Clone)]
pub struct DiffusionTable<T> {
    xs: Vec<T>,
    ln_i: Vec<T>,
    slope: Vec<T>,
    lower: T,
    upper: T,
    b2_first: T,
    b2_last: T,
    diagnostics: TableDiagnostics,
}

struct Accumulator<'a, T: Real> {
    spec: &'a DistributionSpec<T>,
    alpha: T,
    mu: T,
    integrator: Integrator<T>,
    converged: bool,
}

impl<T: Real> Accumulator<'_, T> {
    /// `∫_a^b α|z - μ| p(z) dz` for an interval on one side of `μ`.
    fn panel(&mut self, a: T, b: T) -> T {
        let (alpha, mu, spec) = (self.alpha, self.mu, self.spec);
        let est = self
            .integrator
            .integrate(|z| alpha * (z - mu).abs() * spec.pdf(z), a, b);
        self.converged &= est.converged;
        est.value
    }

    /// Signed version for the outer tails, where a bad density can make the
    /// integrand negative.
    fn signed_tail(&mut self, a: T, b: T, below_mean: bool) -> T {
        let (alpha, mu, spec) = (self.alpha, self.mu, self.spec);
        let sign = if below_mean { T::one() } else { -T::one() };
        let est = self
            .integrator
            .integrate(|z| sign * alpha * (mu - z) * spec.pdf(z), a, b);
        self.converged &= est.converged;
        est.value
    }
}

fn hermite<T: Real>(x0: T, x1: T, y0: T, y1: T, m0: T, m1: T, x: T) -> T {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let h00 = two * t3 - three * t2 + T::one();
    let h10 = t3 - two * t2 + t;
    let h01 = three * t2 - two * t3;
    let h11 = t3 - t2;
    h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1
}

impl<T: Real> DiffusionTable<T> {
    pub(crate) fn build(spec: &DistributionSpec<T>, alpha: T, grid_size: usize) -> Result<Self> {
        if grid_size < MIN_GRID_SIZE {
            return Err(Error::Precondition(format!(
                "grid_size must be >= {MIN_GRID_SIZE}, got {grid_size}"
            )));
        }
        let support = spec.support();
        let mu = spec.mean();
        let tail = T::tolerance(TAIL_MASS);
        let lo = spec.quantile(tail)?;
        let hi = spec.quantile(T::one() - tail)?;
        if !(lo < mu && mu < hi) {
            return Err(Error::Precondition(format!(
                "mean {mu} not inside the central range [{lo}, {hi}]"
            )));
        }

        let half = grid_size / 2;
        let mut xs = Vec::with_capacity(2 * half + 1);
        let span = T::from_usize_lossy(half - 1);
        for i in 0..half {
            let f = T::from_usize_lossy(i) / span;
            xs.push(lo + (hi - lo) * f);
            let p = tail + (T::one() - tail - tail) * f;
            xs.push(spec.quantile(p)?);
        }
        xs.push(mu);
        if let DistributionSpec::Tabulated(t) = spec {
            xs.extend(t.abscissae().iter().copied().filter(|&x| x > lo && x < hi));
        }
        xs.retain(|x| x.is_finite() && *x >= lo && *x <= hi);
        xs.sort_by(|a, b| a.partial_cmp(b).expect("finite nodes"));
        xs.dedup();

        let mut acc = Accumulator {
            spec,
            alpha,
            mu,
            integrator: Integrator::new(T::min_positive_value(), T::tolerance(1e-13)),
            converged: true,
        };
        let split = xs.partition_point(|&x| x < mu);
        let mut is = vec![T::zero(); xs.len()];
        // Lower side, accumulated upwards.
        let mut run = acc.signed_tail(support.lower, xs[0], true);
        for i in 0..split {
            if i > 0 {
                run += acc.panel(xs[i - 1], xs[i]);
            }
            is[i] = run;
        }
        let from_below = if split > 0 {
            run + acc.panel(xs[split - 1], mu)
        } else {
            run
        };
        // Upper side, accumulated downwards.
        let last = xs.len() - 1;
        let mut run = acc.signed_tail(xs[last], support.upper, false);
        for i in (split..xs.len()).rev() {
            if i < last {
                run += acc.panel(xs[i], xs[i + 1]);
            }
            is[i] = run;
        }
        let from_above = is[split];
        let i_max = is.iter().copied().fold(T::zero(), T::max);
        if let Some(i) = is
            .iter()
            .position(|&v| v < -T::tolerance(1e-9) * i_max || v.is_nan())
        {
            return Err(Error::NegativeRadicand {
                x: xs[i].as_f64(),
                value: is[i].as_f64(),
            });
        }
        let mean_imbalance = ((from_below - from_above) / from_above.max(from_below)).abs();

        let floor = T::min_positive_value();
        let mut nodes: Vec<(T, T, bool)> =
            xs.iter().zip(&is).map(|(&x, &i)| (x, i.max(floor), false)).collect();
        let slope_at = |x: T, i: T| alpha * (mu - x) * spec.pdf(x) / i;
        let tol = T::tolerance(REFINE_TOLERANCE);
        let mut max_err = T::zero();
        loop {
            let mut next = Vec::with_capacity(nodes.len() * 2);
            let mut inserted = false;
            for k in 0..nodes.len() {
                let (x0, i0, done) = nodes[k];
                if k + 1 == nodes.len() || done {
                    next.push((x0, i0, true));
                    continue;
                }
                let (x1, i1, _) = nodes[k + 1];
                let m = T::lit(0.5) * (x0 + x1);
                if m <= x0 || m >= x1 {
                    next.push((x0, i0, true));
                    continue;
                }
                let exact = if x1 <= mu {
                    i0 + acc.panel(x0, m)
                } else {
                    i1 + acc.panel(m, x1)
                };
                let approx = hermite(
                    x0,
                    x1,
                    i0.ln(),
                    i1.ln(),
                    slope_at(x0, i0),
                    slope_at(x1, i1),
                    m,
                )
                .exp();
                let err = ((approx - exact) / exact).abs();
                if err > tol && nodes.len() + next.len() < MAX_NODES {
                    // Both halves still need checking.
                    next.push((x0, i0, false));
                    next.push((m, exact.max(floor), false));
                    inserted = true;
                } else {
                    max_err = max_err.max(err);
                    next.push((x0, i0, true));
                }
            }
            nodes = next;
            if !inserted {
                break;
            }
        }

        let xs: Vec<T> = nodes.iter().map(|n| n.0).collect();
        let ln_i: Vec<T> = nodes.iter().map(|n| n.1.ln()).collect();
        let slope: Vec<T> = nodes.iter().map(|n| slope_at(n.0, n.1)).collect();
        let b2_at = |k: usize| {
            let p = spec.pdf(xs[k]);
            if p > T::zero() {
                T::lit(2.0) * nodes[k].1 / p
            } else {
                T::zero()
            }
        };
        let b2_first = b2_at(0);
        let b2_last = b2_at(xs.len() - 1);
        let diagnostics = TableDiagnostics {
            nodes: xs.len(),
            lower_node: xs[0].as_f64(),
            upper_node: xs[xs.len() - 1].as_f64(),
            mean_imbalance: mean_imbalance.as_f64(),
            max_refinement_error: max_err.as_f64(),
            integrals_converged: acc.converged,
        };
        Ok(DiffusionTable {
            xs,
            ln_i,
            slope,
            lower: support.lower,
            upper: support.upper,
            b2_first,
            b2_last,
            diagnostics,
        })
    }

    pub fn diagnostics(&self) -> &TableDiagnostics {
        &self.diagnostics
    }

    pub fn nodes(&self) -> &[T] {
        &self.xs
    }

    /// Interpolated `I(x)` inside the node range.
    pub fn integral(&self, x: T) -> Option<T> {
        let n = self.xs.len();
        if !(x >= self.xs[0] && x <= self.xs[n - 1]) {
            return None;
        }
        let k = self.xs.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
        Some(
            hermite(
                self.xs[k],
                self.xs[k + 1],
                self.ln_i[k],
                self.ln_i[k + 1],
                self.slope[k],
                self.slope[k + 1],
                x,
            )
            .exp(),
        )
    }

    /// `b²(x)`. Outside the node range `b²` is extrapolated linearly to
    /// zero at a finite support bound (so `b` vanishes like a square root),
    /// and held constant towards an infinite one.
    pub(crate) fn squared(&self, spec: &DistributionSpec<T>, x: T) -> T {
        if !(x > self.lower && x < self.upper) {
            return T::zero();
        }
        let n = self.xs.len();
        if x < self.xs[0] {
            return if self.lower.is_finite() {
                self.b2_first * (x - self.lower) / (self.xs[0] - self.lower)
            } else {
                self.b2_first
            };
        }
        if x > self.xs[n - 1] {
            return if self.upper.is_finite() {
                self.b2_last * (self.upper - x) / (self.upper - self.xs[n - 1])
            } else {
                self.b2_last
            };
        }
        let p = spec.pdf(x);
        match self.integral(x) {
            Some(i) if p > T::zero() => T::lit(2.0) * i / p,
            _ => T::zero(),
        }
    }
}
