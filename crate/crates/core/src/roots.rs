//! Bracketed scalar root finding (Brent's method).

use crate::{Error, Real, Result};

/// Finds `x` in `[lower, upper]` with `f(x) = 0`, given a sign change.
pub(crate) fn brent<T: Real, F: Fn(T) -> T>(
    what: &str,
    f: F,
    lower: T,
    upper: T,
    x_tol: T,
) -> Result<T> {
    let mut a = lower;
    let mut b = upper;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    let fail = |iterations, fa: T, fb: T| Error::NonConvergence {
        what: what.to_string(),
        lower: lower.as_f64(),
        upper: upper.as_f64(),
        f_lower: fa.as_f64(),
        f_upper: fb.as_f64(),
        iterations,
    };
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(fail(0, fa, fb));
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::epsilon() * b.abs() + half * x_tol;
        let m = half * (c - b);
        if m.abs() <= tol || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (T::lit(3.0) * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol * m.signum() };
        fb = f(b);
        if fb.is_nan() {
            return Err(fail(200, fa, fb));
        }
    }
    Err(fail(200, fa, fb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let r = brent("cube", |x: f64| x * x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn rejects_missing_bracket() {
        let err = brent("none", |x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }
}
