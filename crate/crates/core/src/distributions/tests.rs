use super::*;

type S = DistributionSpec<f64>;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

#[test]
fn pdf_examples() {
    let n = S::normal(0.0, 1.0).unwrap();
    assert!(close(n.pdf(0.0), 0.398_942_280_401_432_7, 1e-15));
    let w = S::weibull2(2.0, 8.0).unwrap();
    assert_eq!(w.pdf(-1.0), 0.0);
    let g = S::gamma2(2.0, 3.0).unwrap();
    assert!(close(g.pdf(3.0), 3.0 * (-1.0f64).exp() / 9.0, 1e-14));
}

#[test]
fn mean_examples() {
    let w = S::weibull2(2.0, 8.0).unwrap();
    assert!(close(w.mean(), 7.089_815_403_622_064, 1e-14));
    assert_eq!(S::gram_charlier3(0.02).unwrap().mean(), 0.0);
    assert!(close(S::beta3(2.0, 2.0, 10.0).unwrap().mean(), 5.0, 1e-15));
}

#[test]
fn support_examples() {
    let b = S::beta3(2.0, 3.0, 12.0).unwrap().support();
    assert_eq!((b.lower, b.upper), (0.0, 12.0));
    assert!(!b.lower_closed && !b.upper_closed);
    let n = S::normal(1.0, 2.0).unwrap().support();
    assert_eq!((n.lower, n.upper), (f64::NEG_INFINITY, f64::INFINITY));
    let r = S::rayleigh1(2.0).unwrap().support();
    assert_eq!((r.lower, r.upper, r.lower_closed), (0.0, f64::INFINITY, false));
    assert!(S::weibull2(2.0, 8.0).unwrap().support().lower_closed);
}

#[test]
fn cdf_examples() {
    let w = S::weibull2(2.0, 8.0).unwrap();
    assert!(close(w.cdf(8.0), 1.0 - (-1.0f64).exp(), 1e-15));
    assert_eq!(w.cdf(0.0), 0.0);
    assert_eq!(S::normal(0.0, 1.0).unwrap().cdf(0.0), 0.5);
    assert_eq!(S::gamma2(2.0, 1.0).unwrap().cdf(0.0), 0.0);
}

#[test]
fn gram_charlier_limits() {
    let s_max = gram_charlier_max_skew(6.0);
    assert!(close(s_max, 6.0 / 216.0, 1e-15));
    assert!(S::gram_charlier3(s_max * 0.999).is_ok());
    assert!(S::gram_charlier3(-s_max * 0.999).is_ok());
    assert!(S::gram_charlier3(s_max * 1.001).is_err());
    assert!(S::gram_charlier3(9.0).is_err());
    // Narrow domain, density factor binding inside (-1, 1) only through the ends.
    assert!(S::gram_charlier3_with_domain(0.5, 1.0).is_ok());
}

#[test]
fn gram_charlier_zero_skew_is_standard_normal() {
    let gc = S::gram_charlier3(0.0).unwrap();
    let n = S::normal(0.0, 1.0).unwrap();
    for i in -80..=80 {
        let x = i as f64 * 0.1;
        assert!((gc.pdf(x) - n.pdf(x)).abs() <= 1e-14);
        assert!((gc.cdf(x) - n.cdf(x)).abs() <= 1e-14);
    }
}

#[test]
fn invalid_parameters_rejected() {
    assert!(S::normal(0.0, 0.0).is_err());
    assert!(S::gamma2(-1.0, 1.0).is_err());
    assert!(S::weibull2(2.0, f64::NAN).is_err());
    assert!(S::beta3(1.0, 1.0, 0.0).is_err());
    assert!(S::trunc_normal2(-100.0, 1.0).is_err());
    let err = S::inv_gaussian2(0.0, 1.0).unwrap_err();
    assert!(matches!(err, Error::InvalidParameter { name: "mean", .. }));
}

#[test]
fn tabulated_validation() {
    assert!(S::tabulated(&[(0.0, 1.0)]).is_err());
    assert!(S::tabulated(&[(0.0, 1.0), (0.0, 1.0)]).is_err());
    assert!(S::tabulated(&[(0.0, -1.0), (1.0, 1.0)]).is_err());
    assert!(S::tabulated(&[(0.0, 2.0), (1.0, 2.0)]).is_err());
    let t = S::tabulated(&[(0.0, 0.0), (1.0, 1.0), (2.0, 1.0), (3.0, 0.0)]);
    assert!(t.is_err());
    let t = S::tabulated(&[(0.0, 0.0), (1.0, 0.5), (2.0, 0.5), (3.0, 0.0)]).unwrap();
    assert!(close(t.mean(), 1.5, 1e-15));
    assert!(close(t.cdf(1.5), 0.5, 1e-15));
    assert_eq!(t.pdf(3.5), 0.0);
}

#[test]
fn quantile_inverts_cdf() {
    let specs = [
        S::normal(5.0, 2.0).unwrap(),
        S::gamma2(2.0, 3.0).unwrap(),
        S::lognormal2(1.0, 0.5).unwrap(),
        S::beta3(2.0, 5.0, 10.0).unwrap(),
        S::inv_gaussian2(2.0, 3.0).unwrap(),
        S::trunc_normal2(1.0, 2.0).unwrap(),
        S::weibull2(2.0, 8.0).unwrap(),
    ];
    for s in &specs {
        for &p in &[1e-9, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-9] {
            let x = s.quantile(p).unwrap();
            let back = if p <= 0.5 { s.cdf(x) } else { 1.0 - s.sf(x) };
            assert!((back - p).abs() < 1e-12 * p.max(1e-3), "{s} p={p} x={x} back={back}");
        }
    }
}

#[test]
fn document_round_trip() {
    let w = S::weibull2(2.0, 8.0).unwrap();
    let json = serde_json::to_string(&w).unwrap();
    assert_eq!(json, r#"{"family":"weibull2","params":{"scale":8.0,"shape":2.0}}"#);
    let back: S = serde_json::from_str(&json).unwrap();
    assert_eq!(back, w);
    let t: S = serde_json::from_str(r#"{"family":"tabulated","grid":[[0,0],[1,1],[2,0]]}"#).unwrap();
    assert_eq!(t.family(), Family::Tabulated);
    assert!(serde_json::from_str::<S>(r#"{"family":"weibull2","params":{"shape":2}}"#).is_err());
    assert!(serde_json::from_str::<S>(r#"{"family":"cauchy","params":{}}"#).is_err());
    let gc: S =
        serde_json::from_str(r#"{"family":"gram_charlier3","params":{"skew":0.5,"domain":1}}"#)
            .unwrap();
    assert_eq!(serde_json::from_str::<S>(&serde_json::to_string(&gc).unwrap()).unwrap(), gc);
}

#[test]
fn works_in_single_precision() {
    let w = DistributionSpec::<f32>::weibull2(2.0, 8.0).unwrap();
    assert!((w.mean() - 7.089_815).abs() < 1e-5);
    assert!((w.cdf(8.0) - 0.632_120_6).abs() < 1e-6);
}
