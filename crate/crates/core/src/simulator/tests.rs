use super::*;
use crate::builder::build_closed_form;

type S = DistributionSpec<f64>;

#[test]
fn zero_diffusion_reduces_to_the_linear_recursion() {
    let model = build_closed_form(&S::normal(0.0, 1.0).unwrap(), 1.0)
        .unwrap()
        .with_diffusion_factor(0.0);
    let cfg = SimulationConfig::new(1e-3, 10.0, 2, 7).with_init(InitPolicy::Fixed { x0: 2.5 });
    let ens = simulate(&model, &cfg).unwrap();
    assert_eq!(ens.n_times(), 10_001);
    for p in ens.paths() {
        for (k, &x) in p.iter().enumerate().step_by(500) {
            let exact = 2.5 * (1.0f64 - 1e-3).powi(k as i32);
            assert!((x - exact).abs() <= 1e-12 * exact.abs().max(1e-300), "k={k}");
        }
    }
}

#[test]
fn reflect_keeps_gamma_paths_positive() {
    let model = build_closed_form(&S::gamma2(0.6, 2.0).unwrap(), 1.0).unwrap();
    let cfg = SimulationConfig::new(0.05, 200.0, 4, 11);
    let ens = simulate(&model, &cfg).unwrap();
    let min = ens.values.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(min > 0.0, "min = {min}");
}

#[test]
fn absorb_and_reject_respect_support() {
    let model = build_closed_form(&S::beta3(0.7, 0.9, 5.0).unwrap(), 1.0).unwrap();
    for policy in [BoundaryPolicy::AbsorbAtEpsilon, BoundaryPolicy::RejectStep] {
        let cfg = SimulationConfig::new(0.05, 50.0, 4, 3).with_boundary(policy);
        let ens = simulate(&model, &cfg).unwrap();
        assert!(ens.values.iter().all(|&x| x > 0.0 && x < 5.0), "{policy:?}");
    }
}

#[test]
fn identical_across_thread_counts() {
    let model = build_closed_form(&S::weibull2(2.0, 8.0).unwrap(), 0.5).unwrap();
    let cfg = SimulationConfig::new(0.01, 5.0, 12, 42);
    let one = simulate_with_threads(&model, &cfg, 1).unwrap();
    let many = simulate_with_threads(&model, &cfg, 8).unwrap();
    assert_eq!(one, many);
    let other = simulate_with_threads(&model, &SimulationConfig::new(0.01, 5.0, 12, 43), 1).unwrap();
    assert_ne!(one.values, other.values);
}

#[test]
fn config_validation() {
    let cfg = SimulationConfig::new(0.5, 10.0, 1, 0);
    assert!(matches!(cfg.validate(2.0), Err(Error::Config(_))));
    let cfg = SimulationConfig::new(0.1, 10.0, 1, 0);
    assert_eq!(cfg.validate(2.0).unwrap().len(), 1);
    assert!(cfg.clone().with_strict_step(true).validate(2.0).is_err());
    assert!(SimulationConfig::new(0.01, 10.0, 0, 0).validate(1.0).is_err());
    assert!(SimulationConfig::new(-0.01, 10.0, 1, 0).validate(1.0).is_err());
    assert!(SimulationConfig::new(0.01, 10.0, 1, 0).validate(1.0).unwrap().is_empty());
}

#[test]
fn recording_stride() {
    let model = build_closed_form(&S::normal(0.0, 1.0).unwrap(), 1.0).unwrap();
    let cfg = SimulationConfig::new(0.01, 1.0, 2, 5);
    let full = simulate(&model, &cfg).unwrap();
    let thin = simulate(&model, &cfg.clone().with_record_every(10)).unwrap();
    assert_eq!(thin.n_times(), 11);
    for p in 0..2 {
        let f = full.path(p);
        let t = thin.path(p);
        for j in 0..11 {
            assert_eq!(t[j], f[10 * j]);
        }
    }
    assert!((thin.times[10] - 1.0).abs() < 1e-12);
}

#[test]
fn stationary_samples() {
    let n = 100_000;
    let normal = sample_stationary(&S::normal(0.0, 1.0).unwrap(), n, 1).unwrap();
    let mut sorted = normal.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    assert!(median.abs() <= 0.02, "median {median}");

    let w = S::weibull2(2.0, 8.0).unwrap();
    let draws = sample_stationary(&w, n, 2).unwrap();
    let frac = draws.iter().filter(|&&x| x <= 8.0).count() as f64 / n as f64;
    assert!((frac - 0.632_120_6).abs() <= 0.01, "{frac}");
    assert!(draws.iter().all(|&x| x >= 0.0));
    let mean = draws.iter().sum::<f64>() / n as f64;
    let se = (w.variance() / n as f64).sqrt();
    assert!((mean - w.mean()).abs() <= 4.0 * se);

    let b = S::beta3(0.8, 1.5, 12.0).unwrap();
    assert!(sample_stationary(&b, 10_000, 3)
        .unwrap()
        .iter()
        .all(|&x| x > 0.0 && x < 12.0));
}

#[test]
fn file_formats_round_trip() {
    let model = build_closed_form(&S::rayleigh1(3.0).unwrap(), 1.0).unwrap();
    let ens = simulate(&model, &SimulationConfig::new(0.01, 0.5, 3, 9)).unwrap();
    let mut csv = Vec::new();
    write_csv(&ens, &mut csv).unwrap();
    assert!(csv.starts_with(b"time,path_0,path_1,path_2\n"));
    let back = read_ensemble(&csv).unwrap();
    assert_eq!(back.values, ens.values);
    assert_eq!(back.times, ens.times);
    let mut bin = Vec::new();
    write_binary(&ens, &mut bin).unwrap();
    assert_eq!(&bin[..5], BINARY_MAGIC);
    let back = read_ensemble(&bin).unwrap();
    assert_eq!(back.values, ens.values);
    assert!(read_ensemble(&bin[..bin.len() - 3]).is_err());
    assert!(read_ensemble(b"time,foo\n1,2\n").is_err());
}
