//! Golden special-function values generated offline with mpmath.
//!
//! The golden directory defaults to `tests/data` and can be redirected with
//! `WSDE_GOLDEN_DIR`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use wsde_core::specfun;

pub fn golden_dir() -> PathBuf {
    std::env::var_os("WSDE_GOLDEN_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data"))
}

pub struct Record {
    pub function: String,
    pub args: Vec<f64>,
    pub expected: f64,
}

pub fn load() -> Vec<Record> {
    let path = golden_dir().join("specfun_golden.csv");
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut fields = l.split(',');
            let function = fields.next().unwrap().to_string();
            let mut nums: Vec<f64> = fields.map(|f| f.trim().parse().unwrap()).collect();
            let expected = nums.pop().unwrap();
            Record {
                function,
                args: nums,
                expected,
            }
        })
        .collect()
}

pub fn evaluate(r: &Record) -> f64 {
    let a = &r.args;
    match r.function.as_str() {
        "erf" => specfun::erf(a[0]),
        "erfc" => specfun::erfc(a[0]),
        "erfcx" => specfun::erfcx(a[0]),
        "gamma" => specfun::gamma(a[0]).unwrap(),
        "ln_gamma" => specfun::ln_gamma(a[0]).unwrap(),
        "upper_gamma" => specfun::upper_gamma(a[0], a[1]).unwrap(),
        "scaled_upper_gamma" => specfun::scaled_upper_gamma(a[0], a[1]).unwrap(),
        "scaled_lower_gamma" => specfun::scaled_lower_gamma(a[0], a[1]).unwrap(),
        "regularized_gamma_p" => specfun::regularized_gamma_p(a[0], a[1]).unwrap(),
        "beta_fn" => specfun::beta_fn(a[0], a[1]).unwrap(),
        "regularized_beta" => specfun::regularized_beta(a[0], a[1], a[2]).unwrap(),
        other => panic!("unknown golden function {other}"),
    }
}

/// Relative contract per function. `ln_gamma` crosses zero at 1 and 2,
/// so its error is measured against `max(|expected|, 1)`.
pub fn contract(function: &str) -> (f64, f64) {
    match function {
        "erf" | "erfc" | "erfcx" | "gamma" | "beta_fn" => (1e-12, 0.0),
        "ln_gamma" => (1e-12, 1.0),
        _ => (1e-10, 0.0),
    }
}

/// Worst error per function, and every point outside its contract.
pub struct Outcome {
    pub worst: BTreeMap<String, (f64, usize, String)>,
    pub failures: Vec<String>,
}

pub fn check(records: &[Record]) -> Outcome {
    let mut worst: BTreeMap<String, (f64, usize, String)> = BTreeMap::new();
    let mut failures = Vec::new();
    for r in records {
        let got = evaluate(r);
        let (tol, floor) = contract(&r.function);
        let scale = r.expected.abs().max(floor);
        let err = if scale == 0.0 {
            got.abs()
        } else {
            (got - r.expected).abs() / scale
        };
        let entry = worst
            .entry(r.function.clone())
            .or_insert((0.0, 0, String::new()));
        entry.1 += 1;
        if err > entry.0 {
            entry.0 = err;
            entry.2 = format!("{:?}", r.args);
        }
        if !(err <= tol) {
            failures.push(format!(
                "{}{:?}: got {got:e}, expected {:e}, rel err {err:e}",
                r.function, r.args, r.expected
            ));
        }
    }
    Outcome { worst, failures }
}
