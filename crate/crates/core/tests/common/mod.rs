//! Shared test helpers: parameter sets and an independent integrator.
#![allow(dead_code)]

pub mod golden;

use wsde_core::Spec64;

/// Three parameter sets per catalog family.
pub fn catalog() -> Vec<Spec64> {
    vec![
        Spec64::normal(0.0, 1.0).unwrap(),
        Spec64::normal(5.0, 2.0).unwrap(),
        Spec64::normal(-3.0, 0.5).unwrap(),
        Spec64::gram_charlier3(0.0).unwrap(),
        Spec64::gram_charlier3(0.02).unwrap(),
        Spec64::gram_charlier3(-0.025).unwrap(),
        Spec64::beta3(2.0, 2.0, 10.0).unwrap(),
        Spec64::beta3(0.8, 1.5, 12.0).unwrap(),
        Spec64::beta3(5.0, 2.0, 25.0).unwrap(),
        Spec64::gamma2(2.0, 3.0).unwrap(),
        Spec64::gamma2(0.7, 1.5).unwrap(),
        Spec64::gamma2(9.0, 0.5).unwrap(),
        Spec64::gen_gamma3(2.0, 3.0, 1.5).unwrap(),
        Spec64::gen_gamma3(0.8, 5.0, 2.5).unwrap(),
        Spec64::gen_gamma3(3.0, 1.0, 0.7).unwrap(),
        Spec64::inv_gaussian2(2.0, 3.0).unwrap(),
        Spec64::inv_gaussian2(8.0, 20.0).unwrap(),
        Spec64::inv_gaussian2(1.0, 0.5).unwrap(),
        Spec64::lognormal2(1.0, 0.5).unwrap(),
        Spec64::lognormal2(2.0, 0.25).unwrap(),
        Spec64::lognormal2(0.0, 1.0).unwrap(),
        Spec64::rayleigh1(1.0).unwrap(),
        Spec64::rayleigh1(4.0).unwrap(),
        Spec64::rayleigh1(8.5).unwrap(),
        Spec64::trunc_normal2(1.0, 2.0).unwrap(),
        Spec64::trunc_normal2(5.0, 1.5).unwrap(),
        Spec64::trunc_normal2(-1.0, 2.0).unwrap(),
        Spec64::weibull2(2.0, 8.0).unwrap(),
        Spec64::weibull2(1.3, 6.0).unwrap(),
        Spec64::weibull2(3.5, 10.0).unwrap(),
    ]
}

/// Adaptive Simpson on `[a, b]`, finite limits only.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫ f` over the whole support of `spec`, via `x = c + s·t/(1-t²)` on
/// `(-1, 1)` for the real line and `x = lo + s·t/(1-t)` on `[0, 1)` above a
/// finite lower bound. Endpoints where the transformed integrand is
/// undefined are treated as zero.
pub fn integrate_support<F: Fn(f64) -> f64>(spec: &Spec64, f: F, tol: f64) -> f64 {
    let s = spec.support();
    let scale = spec.variance().sqrt();
    let safe = |v: f64| if v.is_finite() { v } else { 0.0 };
    match (s.lower.is_finite(), s.upper.is_finite()) {
        (true, true) => {
            // Substitution x = lo + (hi-lo)(1-cos θ)/2 tames endpoint singularities.
            let (lo, hi) = (s.lower, s.upper);
            let g = |th: f64| {
                let x = lo + 0.5 * (hi - lo) * (1.0 - th.cos());
                safe(f(x) * 0.5 * (hi - lo) * th.sin())
            };
            simpson(&g, 0.0, std::f64::consts::PI, tol)
        }
        (true, false) => {
            let lo = s.lower;
            // x = lo + scale·(t/(1-t))², t ∈ [0,1): squares away x^{-1/2}-type singularities.
            let g = |t: f64| {
                let u = t / (1.0 - t);
                let x = lo + scale * u * u;
                let dx = scale * 2.0 * u / ((1.0 - t) * (1.0 - t));
                safe(f(x) * dx)
            };
            simpson(&g, 0.0, 1.0, tol)
        }
        _ => {
            let c = spec.mean();
            let g = |t: f64| {
                let d = 1.0 - t * t;
                let x = c + scale * t / d;
                safe(f(x) * scale * (1.0 + t * t) / (d * d))
            };
            simpson(&g, -1.0, 1.0, tol)
        }
    }
}
