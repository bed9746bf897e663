//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line per
//! criterion to stderr (uncaptured) before asserting.

mod common;

use std::io::Write;
use std::time::Instant;

use wsde_core::analysis::{fit_distribution, validate, ValidationOptions};
use wsde_core::builder::{self, fpe_residual, max_relative_gap, oracle_grid, FPE_TOLERANCE};
use wsde_core::simulator::{simulate, simulate_with_threads, write_binary, write_csv, InitPolicy};
use wsde_core::{specfun, Config64, Family, Spec64};

fn report(id: u32, ok: bool, what: &str) {
    let line = format!("{} criterion {id}: {what}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

#[test]
fn criterion_1_closed_form_matches_quadrature() {
    let start = Instant::now();
    let mut worst = (0.0_f64, String::new());
    for spec in common::catalog() {
        let cf = builder::build_closed_form(&spec, 0.7).unwrap();
        let qd = builder::build_quadrature(&spec, 0.7, 512).unwrap();
        let gap = max_relative_gap(&cf, &qd, &oracle_grid(&spec, 200).unwrap());
        if !(gap <= worst.0) {
            worst = (gap, spec.to_string());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = worst.0 <= 1e-6 && secs <= 60.0;
    report(
        1,
        ok,
        &format!("worst |Δb²|/(1+b²) = {:.2e} ({}), {secs:.1} s", worst.0, worst.1),
    );
    assert!(ok);
}

#[test]
fn criterion_2_stationary_fpe_residual() {
    let mut worst = (0.0_f64, String::new());
    let mut failures = Vec::new();
    let mut controls_caught = 0;
    let catalog = common::catalog();
    for spec in &catalog {
        let grid = builder::default_grid(spec, 801).unwrap();
        let model = builder::build_closed_form(spec, 0.4).unwrap();
        let r = fpe_residual(&model, spec, &grid);
        if !(r.scaled_max <= worst.0) {
            worst = (r.scaled_max, spec.to_string());
        }
        if !r.passed {
            failures.push(format!("{spec}: {r:?}"));
        }
        let corrupted = model.with_diffusion_factor(1.1);
        if !fpe_residual(&corrupted, spec, &grid).passed {
            controls_caught += 1;
        }
    }
    let ok = failures.is_empty() && controls_caught == catalog.len();
    report(
        2,
        ok,
        &format!(
            "worst scaled residual {:.2e} ({}) vs {FPE_TOLERANCE:e}; corrupted diffusion rejected {controls_caught}/{}",
            worst.0,
            worst.1,
            catalog.len()
        ),
    );
    assert!(ok, "{}", failures.join("\n"));
}

/// One parameter set per family, with skew for the Gram–Charlier case.
fn representatives() -> Vec<Spec64> {
    vec![
        Spec64::normal(0.0, 1.0).unwrap(),
        Spec64::gram_charlier3(0.02).unwrap(),
        Spec64::beta3(2.0, 2.0, 10.0).unwrap(),
        Spec64::gamma2(2.0, 3.0).unwrap(),
        Spec64::gen_gamma3(2.0, 3.0, 1.5).unwrap(),
        Spec64::inv_gaussian2(2.0, 3.0).unwrap(),
        Spec64::lognormal2(1.0, 0.5).unwrap(),
        Spec64::rayleigh1(1.0).unwrap(),
        Spec64::trunc_normal2(1.0, 2.0).unwrap(),
        Spec64::weibull2(2.0, 8.0).unwrap(),
    ]
}

/// Criteria 3 and 4 share the desk-scale ensembles: `αdt = 1e-3`,
/// `αT = 2·10⁵` in total, records every `0.05/α` (4·10⁶ samples).
#[test]
fn criteria_3_and_4_distribution_and_acf_reproduction() {
    let alpha = 0.5;
    let mut dist_fail = Vec::new();
    let mut acf_fail = Vec::new();
    for (i, spec) in representatives().into_iter().enumerate() {
        let start = Instant::now();
        let model = builder::build_closed_form(&spec, alpha).unwrap();
        let config = Config64::new(1e-3 / alpha, 5000.0 / alpha, 40, 900 + i as u64)
            .with_record_every(50);
        let ens = simulate(&model, &config).unwrap();
        let opts = ValidationOptions {
            with_fpe: false,
            ..Default::default()
        };
        let r = validate(&ens, &model, &opts).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let f = r.pass_flags;
        let dist_ok = f.ks && f.mean && f.variance && secs <= 300.0;
        println!(
            "  {spec}: {} samples, KS {:.4} (threshold {:.4}), mean {:.5} vs {:.5}, var {:.5} vs {:.5}, \
             ACF gap {:.4}, α̂ {:?}, {secs:.0} s",
            r.n_samples,
            r.ks_distance,
            r.ks_threshold,
            r.empirical_mean,
            r.target_mean,
            r.empirical_var,
            r.target_var,
            r.acf_max_gap,
            r.fitted_alpha,
        );
        if !dist_ok {
            dist_fail.push(spec.family().name());
        }
        if !f.acf {
            acf_fail.push(spec.family().name());
        }
    }
    report(
        3,
        dist_fail.is_empty(),
        &format!("KS/mean/variance for all ten families; failing: {dist_fail:?}"),
    );
    report(
        4,
        acf_fail.is_empty(),
        &format!("sup |r̂ - e^(-ατ)| ≤ 0.03 over [0, 2/α] for all ten families; failing: {acf_fail:?}"),
    );
    assert!(dist_fail.is_empty() && acf_fail.is_empty());
}

#[test]
fn criterion_5_mean_relaxation() {
    let (mu, sigma, alpha) = (5.0, 2.0, 0.5);
    let spec = Spec64::normal(mu, sigma).unwrap();
    let model = builder::build_closed_form(&spec, alpha).unwrap();
    let x0 = mu + 3.0 * sigma;
    let config = Config64::new(1e-3 / alpha, 4.0 / alpha, 4000, 55)
        .with_init(InitPolicy::Fixed { x0 })
        .with_record_every(10);
    let ens = simulate(&model, &config).unwrap();
    let spacing = ens.spacing().unwrap();
    let mut worst = 0.0_f64;
    for at in [0.1, 0.5, 1.0, 2.0, 4.0] {
        let t = at / alpha;
        let k = (t / spacing).round() as usize;
        let snap = ens.snapshot(k);
        let n = snap.len() as f64;
        let mean = snap.iter().sum::<f64>() / n;
        let sd = (snap.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let expected = mu + (x0 - mu) * (-alpha * ens.times[k]).exp();
        worst = worst.max((mean - expected).abs() / (sd / n.sqrt()));
    }
    let ok = worst <= 3.0;
    report(5, ok, &format!("largest deviation {worst:.2} standard errors at 5 checkpoints"));
    assert!(ok);
}

#[test]
fn criterion_6_special_function_golden_suite() {
    let records = common::golden::load();
    let out = common::golden::check(&records);
    let mut finite = true;
    for &a in &[0.3_f64, 1.0, 2.5, 20.0] {
        for &u in &[1.0_f64, 100.0, 700.0] {
            finite &= specfun::scaled_upper_gamma(a, u).unwrap().is_finite();
            finite &= specfun::scaled_lower_gamma(a, u).unwrap().is_finite();
        }
    }
    finite &= specfun::erfcx(700.0_f64).is_finite();
    let worst = out
        .worst
        .iter()
        .map(|(f, (e, _, _))| (common::golden::contract(f).0 / e.max(1e-300), f))
        .fold((f64::INFINITY, ""), |acc, (m, f)| if m < acc.0 { (m, f.as_str()) } else { acc });
    let ok = out.failures.is_empty() && finite;
    report(
        6,
        ok,
        &format!(
            "{} golden values, {} outside contract, tightest margin {:.0}x ({}); finite at u = 700: {finite}",
            records.len(),
            out.failures.len(),
            worst.0,
            worst.1
        ),
    );
    assert!(ok, "{}", out.failures.join("\n"));
}

#[test]
fn criterion_7_round_trip_calibration() {
    let alpha = 0.5;
    let specs = [
        Spec64::normal(5.0, 2.0).unwrap(),
        Spec64::gamma2(2.0, 3.0).unwrap(),
        Spec64::weibull2(2.0, 8.0).unwrap(),
        Spec64::rayleigh1(4.0).unwrap(),
    ];
    let mut failures = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let model = builder::build_closed_form(spec, alpha).unwrap();
        let config = Config64::new(1e-3 / alpha, 5.0e4 / alpha, 1, 70 + i as u64)
            .with_record_every(25);
        let ens = simulate(&model, &config).unwrap();
        let fit = fit_distribution(ens.path(0), Some(spec.family()), ens.spacing().unwrap()).unwrap();
        let rebuilt = builder::build_closed_form(&fit.spec, fit.alpha_hat).unwrap();
        let mut rel: Vec<f64> = spec
            .params()
            .iter()
            .zip(rebuilt.spec().params())
            .map(|(a, b)| (b - a).abs() / a.abs())
            .collect();
        rel.push((rebuilt.alpha() - alpha).abs() / alpha);
        let worst = rel.iter().copied().fold(0.0, f64::max);
        println!("  {spec} -> {} α̂ = {:.4}: worst relative error {worst:.4}", fit.spec, fit.alpha_hat);
        if !(worst <= 0.05) {
            failures.push(spec.family().name());
        }
    }
    report(
        7,
        failures.is_empty(),
        &format!("Normal/Gamma2/Weibull2/Rayleigh1 parameters and α within 5%; failing: {failures:?}"),
    );
    assert!(failures.is_empty());
}

#[test]
fn criterion_8_determinism_across_workers() {
    let spec = Spec64::weibull2(2.0, 8.0).unwrap();
    let model = builder::build_closed_form(&spec, 0.3).unwrap();
    let config = Config64::new(0.01, 50.0, 24, 2024);
    let bytes = |threads| {
        let ens = simulate_with_threads(&model, &config, threads).unwrap();
        let mut out = Vec::new();
        write_binary(&ens, &mut out).unwrap();
        out
    };
    let one = bytes(1);
    let eight = bytes(8);
    let mut csv = Vec::new();
    write_csv(&simulate(&model, &config).unwrap(), &mut csv).unwrap();
    let mut csv_again = Vec::new();
    write_csv(&simulate(&model, &config).unwrap(), &mut csv_again).unwrap();
    let ok = one == eight && csv == csv_again;
    report(8, ok, &format!("{} bytes identical with 1 and 8 workers", one.len()));
    assert!(ok);
    assert_eq!(Family::Weibull2, spec.family());
}
