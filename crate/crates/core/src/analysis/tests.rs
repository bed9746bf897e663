use super::*;
use crate::builder::build_closed_form;
use crate::simulator::{sample_stationary, simulate, InitPolicy, SimulationConfig};
use crate::Family;

#[test]
fn alternating_series_is_anticorrelated() {
    let xs: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let r = empirical_acf(&xs, 5).unwrap();
    assert_eq!(r[0], 1.0);
    assert!((r[1] + 1.0).abs() < 0.01);
    assert!((r[2] - 1.0).abs() < 0.01);
}

#[test]
fn acf_preconditions() {
    let xs = vec![1.0_f64; 100];
    assert!(matches!(empirical_acf(&xs, 5), Err(Error::DegenerateSeries)));
    assert!(matches!(empirical_acf(&xs, 11), Err(Error::Precondition(_))));
}

#[test]
fn iid_lag_one_is_small() {
    let spec = DistributionSpec::normal(0.0, 1.0).unwrap();
    let xs = sample_stationary::<f64>(&spec, 100_000, 3).unwrap();
    let r: Vec<f64> = empirical_acf(&xs, 10).unwrap();
    assert!(r[1].abs() <= 0.02, "r1 = {}", r[1]);
}

#[test]
fn noiseless_exponential_recovers_rate() {
    for alpha in [0.1, 1.0, 2.0, 10.0] {
        let spacing = 0.01 / alpha;
        let acf: Vec<(f64, f64)> = (0..200)
            .map(|k| {
                let tau = k as f64 * spacing;
                (tau, (-alpha * tau).exp())
            })
            .collect();
        let fitted = fit_alpha(&acf, (0.0, 1.0 / alpha)).unwrap();
        assert!((fitted - alpha).abs() <= 1e-12 * alpha, "{alpha}: {fitted}");
        let auto = fit_alpha_auto(&acf).unwrap();
        assert!((auto - alpha).abs() <= 1e-12 * alpha);
    }
}

#[test]
fn white_noise_has_no_decay_rate() {
    let spec = DistributionSpec::normal(0.0, 1.0).unwrap();
    let xs = sample_stationary(&spec, 100_000, 11).unwrap();
    let acf = with_lags(&empirical_acf(&xs, 10).unwrap(), 1.0);
    assert!(matches!(
        fit_alpha(&acf, (0.0, 10.0)),
        Err(Error::NonPositiveAcf { .. })
    ));
}

#[test]
fn ks_of_quantile_grid_is_at_most_one_over_n() {
    let spec = DistributionSpec::weibull2(2.0, 8.0).unwrap();
    let n = 2000;
    let xs: Vec<f64> = (0..n)
        .map(|i| spec.quantile((i as f64 + 0.5) / n as f64).unwrap())
        .collect();
    let d = ks_distance(&xs, &spec).unwrap();
    assert!(d <= 1.0 / n as f64 + 1e-12, "{d}");
    assert!(ks_distance(&[], &spec).is_err());
}

#[test]
fn effective_sample_limits() {
    let n: f64 = effective_samples(10, 1000, 1e-4, 1.0);
    assert!((n / (10.0 * 1000.0 * 1e-4 / 2.0) - 1.0).abs() < 1e-6);
    let n: f64 = effective_samples(1, 1000, 100.0, 1.0);
    assert!((n - 1000.0).abs() < 1e-6);
}

#[test]
fn normal_fit_is_sample_moments() {
    let spec = DistributionSpec::normal(5.0, 1.0).unwrap();
    let xs = sample_stationary(&spec, 5000, 1).unwrap();
    let fitted = fit_spec(&xs, Family::Normal).unwrap();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let p = fitted.params();
    assert!((p[0] - mean).abs() <= 1e-12 * mean.abs());
    assert!((p[1] - sd).abs() <= 1e-12 * sd);
}

#[test]
fn moment_fit_inverts_exact_moments() {
    // Quantile grids carry the target moments up to discretization error.
    let cases = [
        DistributionSpec::gamma2(2.0, 3.0).unwrap(),
        DistributionSpec::weibull2(1.3, 6.0).unwrap(),
        DistributionSpec::lognormal2(1.0, 0.5).unwrap(),
        DistributionSpec::inv_gaussian2(2.0, 3.0).unwrap(),
        DistributionSpec::trunc_normal2(1.0, 2.0).unwrap(),
        DistributionSpec::rayleigh1(4.0).unwrap(),
        DistributionSpec::beta3(2.0, 3.0, 10.0).unwrap(),
        DistributionSpec::gen_gamma3(2.0, 3.0, 1.5).unwrap(),
    ];
    for spec in cases {
        let n = 200_000;
        let xs: Vec<f64> = (0..n)
            .map(|i| spec.quantile((i as f64 + 0.5) / n as f64).unwrap())
            .collect();
        let fitted = fit_spec(&xs, spec.family()).unwrap();
        for (a, b) in spec.params().iter().zip(fitted.params()) {
            assert!((a - b).abs() <= 0.03 * a.abs(), "{:?} vs {:?}", spec, fitted);
        }
    }
}

#[test]
fn short_series_is_rejected() {
    let xs = vec![1.0_f64; 999];
    assert!(matches!(fit_distribution(&xs, None, 1.0), Err(Error::Precondition(_))));
}

#[test]
fn validation_flags_a_mismatched_model() {
    let spec = DistributionSpec::normal(0.0, 1.0).unwrap();
    let model = build_closed_form(&spec, 1.0).unwrap();
    let config = SimulationConfig::new(0.01, 200.0, 20, 5).with_record_every(10);
    let ens = simulate(&model, &config).unwrap();
    // Small ensemble: the mean's standard error is about 0.02σ.
    let opts = ValidationOptions {
        mean_tolerance: 0.1,
        variance_tolerance: 0.1,
        ..Default::default()
    };
    let report = validate(&ens, &model, &opts).unwrap();
    assert_eq!(report.acf[0].1, 1.0);
    assert!(report.ks_distance >= 0.0 && report.ks_distance <= 1.0);
    assert!(report.fitted_alpha.unwrap() > 0.0);
    assert!(report.passed(), "{report:?}");

    let wrong = build_closed_form(&DistributionSpec::normal(0.5, 1.0).unwrap(), 1.0).unwrap();
    let report = validate(&ens, &wrong, &opts).unwrap();
    assert!(!report.pass_flags.mean && !report.pass_flags.ks);

    let fixed = config.with_init(InitPolicy::Fixed { x0: 0.0 });
    let ens = simulate(&model, &fixed).unwrap();
    let short = ValidationOptions {
        discard: ens.n_times() - 5,
        ..Default::default()
    };
    assert!(matches!(validate(&ens, &model, &short), Err(Error::Precondition(_))));
}

#[test]
fn plot_csv_shapes() {
    let spec = DistributionSpec::gamma2(2.0, 1.0).unwrap();
    let xs = sample_stationary(&spec, 10_000, 2).unwrap();
    let csv = density_csv(&xs, &spec, 40);
    assert_eq!(csv.lines().count(), 41);
    assert!(csv.starts_with("x,empirical,target\n"));
}
