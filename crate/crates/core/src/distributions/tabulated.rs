use crate::{Error, Real, Result};

/// Piecewise-linear density through user-supplied `(x, p)` nodes.
///
/// The ordinates are rescaled by their trapezoid integral so that the
/// interpolant integrates to one exactly; the cdf, mean and variance are
/// then exact for the interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity<T> {
    xs: Vec<T>,
    ps: Vec<T>,
    cum: Vec<T>,
    mean: T,
    variance: T,
}

impl<T: Real> TabulatedDensity<T> {
    pub fn new(grid: &[(T, T)]) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidTabulated(format!(
                "need at least 2 nodes, got {}",
                grid.len()
            )));
        }
        for (i, &(x, p)) in grid.iter().enumerate() {
            if !x.is_finite() || !p.is_finite() {
                return Err(Error::InvalidTabulated(format!("non-finite node {i}")));
            }
            if p < T::zero() {
                return Err(Error::InvalidTabulated(format!("negative density {p} at x = {x}")));
            }
            if i > 0 && x <= grid[i - 1].0 {
                return Err(Error::InvalidTabulated(format!(
                    "abscissae must be strictly increasing (node {i}: {x} after {})",
                    grid[i - 1].0
                )));
            }
        }
        let half = T::lit(0.5);
        let area: T = grid
            .windows(2)
            .map(|w| half * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum();
        let slack = T::lit(1e-3);
        if !(area >= T::one() - slack && area <= T::one() + slack) {
            return Err(Error::InvalidTabulated(format!(
                "trapezoid integral {area} outside [1 - 1e-3, 1 + 1e-3]"
            )));
        }
        let xs: Vec<T> = grid.iter().map(|g| g.0).collect();
        let ps: Vec<T> = grid.iter().map(|g| g.1 / area).collect();
        let mut cum = Vec::with_capacity(xs.len());
        cum.push(T::zero());
        let (mut m1, mut m2) = (T::zero(), T::zero());
        let sixth = T::lit(1.0 / 6.0);
        let four = T::lit(4.0);
        for i in 1..xs.len() {
            let (a, b) = (xs[i - 1], xs[i]);
            let (pa, pb) = (ps[i - 1], ps[i]);
            let h = b - a;
            let c = cum[i - 1] + half * h * (pa + pb);
            cum.push(c);
            // Simpson is exact for the quadratic and cubic integrands here.
            let m = half * (a + b);
            let pm = half * (pa + pb);
            m1 += sixth * h * (a * pa + four * m * pm + b * pb);
            m2 += sixth * h * (a * a * pa + four * m * m * pm + b * b * pb);
        }
        let last = *cum.last().unwrap_or(&T::one());
        for c in cum.iter_mut() {
            *c /= last;
        }
        Ok(TabulatedDensity {
            xs,
            ps,
            cum,
            mean: m1,
            variance: (m2 - m1 * m1).max(T::zero()),
        })
    }

    pub fn nodes(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.xs.iter().copied().zip(self.ps.iter().copied())
    }

    pub fn abscissae(&self) -> &[T] {
        &self.xs
    }

    pub fn lower(&self) -> T {
        self.xs[0]
    }

    pub fn upper(&self) -> T {
        self.xs[self.xs.len() - 1]
    }

    fn segment(&self, x: T) -> usize {
        let i = self.xs.partition_point(|&v| v <= x);
        i.clamp(1, self.xs.len() - 1) - 1
    }

    pub fn pdf(&self, x: T) -> T {
        if !(x >= self.lower() && x <= self.upper()) {
            return T::zero();
        }
        let i = self.segment(x);
        let (a, b) = (self.xs[i], self.xs[i + 1]);
        let t = (x - a) / (b - a);
        self.ps[i] + t * (self.ps[i + 1] - self.ps[i])
    }

    pub fn cdf(&self, x: T) -> T {
        if x <= self.lower() {
            return T::zero();
        }
        if x >= self.upper() {
            return T::one();
        }
        let i = self.segment(x);
        let (a, b) = (self.xs[i], self.xs[i + 1]);
        let (pa, pb) = (self.ps[i], self.ps[i + 1]);
        let d = x - a;
        (self.cum[i] + d * pa + (pb - pa) * d * d / (T::lit(2.0) * (b - a))).min(T::one())
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    pub fn variance(&self) -> T {
        self.variance
    }
}
