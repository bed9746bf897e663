//! Error function family.
//!
//! `erf`/`erfc` follow the fdlibm rational approximations (Sun Microsystems,
//! 1993; freely redistributable with notice preserved), rewritten over
//! [`Real`]. Accuracy is about 1 ulp in `f64` on the whole real line.
//!
//! `erfcx(x) = e^{x²} erfc(x)` reuses the `[1.25, 28)` rational fits, where
//! fdlibm writes `erfc(x) = exp(-x² - 0.5625 + R/S) / x`: the `e^{-x²}`
//! factor cancels analytically, so no intermediate overflows. Beyond 28 the
//! asymptotic series is used; for negative arguments the reflection
//! `erfcx(x) = 2 e^{x²} - erfcx(-x)`.

use crate::Real;

const ERX: f64 = 8.45062911510467529297e-01;
const EFX8: f64 = 1.02703333676410069053e+00;
const PP: [f64; 5] = [
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
];
const QQ: [f64; 6] = [
    1.0,
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
];
const PA: [f64; 7] = [
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
];
const QA: [f64; 7] = [
    1.0,
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
];
const RA: [f64; 8] = [
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e+01,
    -6.23753324503260060396e+01,
    -1.62396669462573470355e+02,
    -1.84605092906711035994e+02,
    -8.12874355063065934246e+01,
    -9.81432934416914548592e+00,
];
const SA: [f64; 9] = [
    1.0,
    1.96512716674392571292e+01,
    1.37657754143519042600e+02,
    4.34565877475229228821e+02,
    6.45387271733267880336e+02,
    4.29008140027567833386e+02,
    1.08635005541779435134e+02,
    6.57024977031928170135e+00,
    -6.04244152148580987438e-02,
];
const RB: [f64; 7] = [
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e+01,
    -1.60636384855821916062e+02,
    -6.37566443368389627722e+02,
    -1.02509513161107724954e+03,
    -4.83519191608651397019e+02,
];
const SB: [f64; 8] = [
    1.0,
    3.03380607434824582924e+01,
    3.25792512996573918826e+02,
    1.53672958608443695994e+03,
    3.19985821950859553908e+03,
    2.55305040643316442583e+03,
    4.74528541206955367215e+02,
    -2.24409524465858183362e+01,
];

/// Horner evaluation with `f64` coefficients, lowest order first.
#[inline]
pub(crate) fn poly<T: Real>(coeffs: &[f64], x: T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * x + T::lit(c))
}

/// High part of a Veltkamp split: `hi * hi` is exact.
#[inline]
fn split_high<T: Real>(x: T) -> T {
    let s = (T::mantissa_bits() + 1) / 2;
    let c = T::lit(2f64.powi(s) + 1.0);
    let t = c * x;
    t - (t - x)
}

/// `exp(x²)` with the square formed exactly in two parts.
#[inline]
fn exp_square<T: Real>(x: T) -> T {
    let z = split_high(x);
    (z * z).exp() * ((x - z) * (x + z)).exp()
}

/// `erf(x) - x` scaled: returns `y` with `erf(x) = x + x*y` for `|x| < 0.84375`.
#[inline]
fn small_ratio<T: Real>(x: T) -> T {
    let z = x * x;
    poly(&PP, z) / poly(&QQ, z)
}

/// `erf(1 + s) - ERX` on `[0.84375, 1.25)`.
#[inline]
fn near_one<T: Real>(ax: T) -> T {
    let s = ax - T::one();
    poly(&PA, s) / poly(&QA, s)
}

/// `R/S` correction on `[1.25, 28)`: `erfc(x) = exp(-x² - 0.5625 + R/S) / x`.
#[inline]
fn tail_correction<T: Real>(ax: T) -> T {
    let s = (ax * ax).recip();
    if ax < T::lit(1.0 / 0.35) {
        poly(&RA, s) / poly(&SA, s)
    } else {
        poly(&RB, s) / poly(&SB, s)
    }
}

/// `erfc(|x|)` for `0.84375 <= |x| < 28`.
fn erfc_mid<T: Real>(ax: T) -> T {
    if ax < T::lit(1.25) {
        return T::one() - T::lit(ERX) - near_one(ax);
    }
    let z = split_high(ax);
    let r = tail_correction(ax);
    (-z * z - T::lit(0.5625)).exp() * ((z - ax) * (z + ax) + r).exp() / ax
}

/// Error function `erf(x) = 2/√π ∫_0^x e^{-t²} dt`.
pub fn erf<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let y = if ax < T::lit(0.84375) {
        if ax < T::lit(2f64.powi(-28)) {
            return T::lit(0.125) * (T::lit(8.0) * x + T::lit(EFX8) * x);
        }
        return x + x * small_ratio(x);
    } else if ax < T::lit(6.0) {
        T::one() - erfc_mid(ax)
    } else {
        T::one()
    };
    if x.is_sign_negative() {
        -y
    } else {
        y
    }
}

/// Complementary error function `erfc(x) = 1 - erf(x)`, computed without
/// the cancellation of the subtraction.
pub fn erfc<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    if ax < T::lit(0.84375) {
        if ax < T::lit(2f64.powi(-56)) {
            return T::one() - x;
        }
        let y = small_ratio(x);
        if x < T::lit(0.25) {
            return T::one() - (x + x * y);
        }
        return T::lit(0.5) - (x - T::lit(0.5) + x * y);
    }
    if ax < T::lit(28.0) {
        let tail = erfc_mid(ax);
        return if x > T::zero() { tail } else { T::lit(2.0) - tail };
    }
    if x > T::zero() {
        T::zero()
    } else {
        T::lit(2.0)
    }
}

/// Scaled complementary error function `erfcx(x) = e^{x²} erfc(x)`.
///
/// Valid on the whole real line. For `x >= 0` the result lies in `(0, 1]`
/// and behaves like `1 / (x √π)` for large `x`; for `x < -26.6` the true
/// value exceeds the `f64` range and `+inf` is returned.
pub fn erfcx<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        if x < T::lit(-26.7) {
            return T::infinity();
        }
        return T::lit(2.0) * exp_square(x) - erfcx(-x);
    }
    if x < T::lit(0.84375) {
        return exp_square(x) * erfc(x);
    }
    if x < T::lit(1.25) {
        return exp_square(x) * (T::one() - T::lit(ERX) - near_one(x));
    }
    if x < T::lit(28.0) {
        return (tail_correction(x) - T::lit(0.5625)).exp() / x;
    }
    erfcx_asymptotic(x)
}

/// `1/(x√π) Σ (-1)^n (2n-1)!! / (2x²)^n`, used for `x >= 28` where the
/// first omitted term is far below machine epsilon.
fn erfcx_asymptotic<T: Real>(x: T) -> T {
    let lead = (x * T::PI().sqrt()).recip();
    if x > T::lit(1e150) {
        return lead;
    }
    let inv = (T::lit(2.0) * x * x).recip();
    let mut term = T::one();
    let mut sum = T::one();
    for n in 1..40 {
        term = -term * T::from_usize_lossy(2 * n - 1) * inv;
        sum += term;
        if term.abs() < T::epsilon() * sum.abs() {
            break;
        }
    }
    lead * sum
}
