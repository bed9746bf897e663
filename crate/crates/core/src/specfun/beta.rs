use super::gamma::ln_gamma_unchecked;
use crate::{Error, Real, Result};

fn check<T: Real>(function: &'static str, a: T, b: T) -> Result<()> {
    if a.is_nan() || b.is_nan() || a <= T::zero() || b <= T::zero() {
        return Err(Error::domain(function, format!("arguments must be > 0, got ({a}, {b})")));
    }
    Ok(())
}

pub(crate) fn ln_beta_unchecked<T: Real>(a: T, b: T) -> T {
    ln_gamma_unchecked(a) + ln_gamma_unchecked(b) - ln_gamma_unchecked(a + b)
}

/// Beta function `B(a,b) = Γ(a)Γ(b)/Γ(a+b)`, formed in log space.
pub fn beta_fn<T: Real>(a: T, b: T) -> Result<T> {
    check("beta_fn", a, b)?;
    Ok(ln_beta_unchecked(a, b).exp())
}

/// `ln B(a,b)`.
pub fn ln_beta<T: Real>(a: T, b: T) -> Result<T> {
    check("ln_beta", a, b)?;
    Ok(ln_beta_unchecked(a, b))
}

/// Continued fraction for `I_x(a,b)` (modified Lentz).
fn beta_fraction<T: Real>(a: T, b: T, x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let one = T::one();
    let two = T::lit(2.0);
    let qab = a + b;
    let qap = a + one;
    let qam = a - one;
    let mut c = one;
    let mut d = one - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = d.recip();
    let mut h = d;
    for m in 1..10_000 {
        let m = T::from_usize_lossy(m);
        let m2 = two * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = d * c;
        h *= delta;
        if (delta - one).abs() < T::epsilon() {
            break;
        }
    }
    h
}

pub(crate) fn regularized_beta_unchecked<T: Real>(x: T, a: T, b: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    if x >= T::one() {
        return T::one();
    }
    let front = (a * x.ln() + b * (-x).ln_1p() - ln_beta_unchecked(a, b)).exp();
    if x < (a + T::one()) / (a + b + T::lit(2.0)) {
        front * beta_fraction(a, b, x) / a
    } else {
        T::one() - front * beta_fraction(b, a, T::one() - x) / b
    }
}

/// Regularized incomplete beta `I_x(a,b)`; clamps to 0/1 outside `(0,1)`.
pub fn regularized_beta<T: Real>(x: T, a: T, b: T) -> Result<T> {
    check("regularized_beta", a, b)?;
    if x.is_nan() {
        return Err(Error::domain("regularized_beta", "x is NaN"));
    }
    Ok(regularized_beta_unchecked(x, a, b))
}
