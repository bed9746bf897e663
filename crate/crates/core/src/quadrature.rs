//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the total
//! estimate meets `max(abs_tol, rel_tol · |I|)` or the interval budget runs
//! out. Infinite limits are mapped onto finite ones before integration:
//! `[a, ∞)` by `x = a + t/(1-t)`, `(-∞, b]` by `x = b - (1-t)/t`, and the
//! whole line by `x = t/(1-t²)`. Kronrod nodes never touch the interval
//! ends, so integrable endpoint singularities are tolerated.

use crate::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
    pub converged: bool,
    pub evaluations: usize,
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
pub fn gauss_kronrod15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center);
    let mut gauss = fc * T::lit(WG[3]);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = radius * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += T::lit(WGK[j]) * (f1 + f2);
        abs_sum += T::lit(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = kronrod * half;
    let mut asc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        asc += T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * radius;
    let abs_value = abs_sum * radius.abs();
    let asc = asc * radius.abs();
    let mut error = ((kronrod - gauss) * radius).abs();
    if asc != T::zero() && error != T::zero() {
        error = asc * T::one().min((T::lit(200.0) * error / asc).powf(T::lit(1.5)));
    }
    let floor = T::lit(50.0) * T::epsilon() * abs_value;
    if abs_value > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        error = error.max(floor);
    }
    (value, error)
}

#[derive(Debug, Clone, Copy)]
pub struct Integrator<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for Integrator<T> {
    fn default() -> Self {
        Integrator {
            abs_tol: T::tolerance(1e-12),
            rel_tol: T::tolerance(1e-12),
            max_intervals: 2000,
        }
    }
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> Integrator<T> {
    pub fn new(abs_tol: T, rel_tol: T) -> Self {
        Integrator {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    /// `∫_a^b f(x) dx`; either limit may be infinite.
    pub fn integrate<F: Fn(T) -> T>(&self, f: F, a: T, b: T) -> Estimate<T> {
        if a == b {
            return Estimate {
                value: T::zero(),
                error: T::zero(),
                converged: true,
                evaluations: 0,
            };
        }
        if a > b {
            let mut est = self.integrate(f, b, a);
            est.value = -est.value;
            return est;
        }
        let one = T::one();
        match (a.is_finite(), b.is_finite()) {
            (true, true) => self.finite(&f, a, b),
            (true, false) => self.finite(
                &|t: T| {
                    let s = one - t;
                    f(a + t / s) / (s * s)
                },
                T::zero(),
                one,
            ),
            (false, true) => self.finite(
                &|t: T| {
                    let s = one - t;
                    f(b - s / t) / (t * t)
                },
                T::zero(),
                one,
            ),
            (false, false) => self.finite(
                &|t: T| {
                    let s = one - t * t;
                    f(t / s) * (one + t * t) / (s * s)
                },
                -one,
                one,
            ),
        }
    }

    fn finite<F: Fn(T) -> T>(&self, f: &F, a: T, b: T) -> Estimate<T> {
        let (value, error) = gauss_kronrod15(f, a, b);
        let mut panels = vec![Panel { a, b, value, error }];
        let mut evaluations = 15;
        loop {
            let total: T = panels.iter().map(|p| p.value).sum();
            let total_err: T = panels.iter().map(|p| p.error).sum();
            let target = self.abs_tol.max(self.rel_tol * total.abs());
            if total_err <= target || !total_err.is_finite() && !total.is_finite() {
                return Estimate {
                    value: total,
                    error: total_err,
                    converged: total_err <= target,
                    evaluations,
                };
            }
            let worst = panels
                .iter()
                .enumerate()
                .filter(|(_, p)| p.error > T::zero())
                .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
                .map(|(i, _)| i);
            let Some(worst) = worst else {
                return Estimate {
                    value: total,
                    error: total_err,
                    converged: false,
                    evaluations,
                };
            };
            if panels.len() >= self.max_intervals {
                return Estimate {
                    value: total,
                    error: total_err,
                    converged: false,
                    evaluations,
                };
            }
            let p = panels.swap_remove(worst);
            let mid = T::lit(0.5) * (p.a + p.b);
            let width = p.b - p.a;
            if width <= T::lit(100.0) * T::epsilon() * p.a.abs().max(p.b.abs()).max(T::min_positive_value()) {
                // Cannot split further; keep the panel but stop refining it.
                panels.push(Panel { error: T::zero(), ..p });
                continue;
            }
            let (v1, e1) = gauss_kronrod15(f, p.a, mid);
            let (v2, e2) = gauss_kronrod15(f, mid, p.b);
            evaluations += 30;
            panels.push(Panel {
                a: p.a,
                b: mid,
                value: v1,
                error: e1,
            });
            panels.push(Panel {
                a: mid,
                b: p.b,
                value: v2,
                error: e2,
            });
        }
    }
}

/// Convenience wrapper with the default tolerances.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T) -> Estimate<T> {
    Integrator::default().integrate(f, a, b)
}
