use std::path::PathBuf;

use clap::Args;
use wsde_core::analysis::{density_csv, validate, ValidationOptions};
use wsde_core::simulator::read_ensemble;

use super::{load_model, pretty, read, CliError, Status};
use crate::manifest::Recorder;

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Ensemble file (CSV or binary) from `wsde simulate`.
    #[arg(long)]
    pub ensemble: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Leading recorded times dropped from every path.
    #[arg(long, default_value_t = 0)]
    pub discard: usize,
    /// Fixed KS threshold instead of the calibrated one.
    #[arg(long)]
    pub ks_threshold: Option<f64>,
    /// Skip the FPE residual.
    #[arg(long)]
    pub no_fpe: bool,
    /// Writes `<prefix>_acf.csv` and `<prefix>_density.csv`.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

pub fn run(args: &ValidateArgs, argv: &[String]) -> Result<Status, CliError> {
    let mut rec = Recorder::start("validate", argv);
    let (_, model) = load_model(&args.model)?;
    let ens = read_ensemble(&read(&args.ensemble)?)?;
    if args.discard >= ens.n_times() {
        return Err(CliError::Input(format!(
            "--discard {} leaves no samples out of {}",
            args.discard,
            ens.n_times()
        )));
    }
    let opts = ValidationOptions {
        discard: args.discard,
        ks_threshold: args.ks_threshold,
        with_fpe: !args.no_fpe,
        ..Default::default()
    };
    let report = validate(&ens, &model, &opts)?;
    let f = &report.pass_flags;
    let line = |name: &str, ok: bool, detail: String| {
        eprintln!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    };
    line("ks", f.ks, format!("{:.4} <= {:.4}", report.ks_distance, report.ks_threshold));
    line("mean", f.mean, format!("{:.6} vs {:.6}", report.empirical_mean, report.target_mean));
    line("variance", f.variance, format!("{:.6} vs {:.6}", report.empirical_var, report.target_var));
    line("acf", f.acf, format!("max gap {:.4}", report.acf_max_gap));
    if let (Some(ok), Some(r)) = (f.fpe, &report.fpe_residual_summary) {
        line("fpe", ok, format!("scaled residual {:.2e}", r.scaled_max));
    }
    let bytes = pretty(&report);
    if let Some(prefix) = &args.plot_data {
        let with_suffix = |s: &str| {
            let mut p = prefix.as_os_str().to_owned();
            p.push(s);
            PathBuf::from(p)
        };
        rec.write(&with_suffix("_acf.csv"), report.acf_csv().as_bytes())?;
        let samples: Vec<f64> = ens.paths().flat_map(|p| p[args.discard..].iter().copied()).collect();
        rec.write(&with_suffix("_density.csv"), density_csv(&samples, model.spec(), 100).as_bytes())?;
    }
    match &args.report {
        Some(path) => rec.write(path, &bytes)?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    let config = serde_json::json!({
        "ensemble": args.ensemble.display().to_string(),
        "model": args.model.display().to_string(),
        "options": opts,
    });
    rec.finish(config, Some(model.hash()), None)?;
    Ok(if report.passed() { Status::Pass } else { Status::Fail })
}
