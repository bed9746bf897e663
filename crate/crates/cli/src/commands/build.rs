use std::path::PathBuf;

use clap::Args;
use serde_json::json;
use wsde_core::builder::{Method, DEFAULT_GRID_SIZE};
use wsde_core::{Family, Model64, Spec64};

use super::{pretty, read_json, CliError, Status};
use crate::manifest::Recorder;
use crate::ParamArgs;

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// Catalog family, e.g. `weibull2`; parameters follow as flags.
    #[arg(long, conflicts_with = "spec")]
    pub family: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
    /// JSON spec document (`{"family": ..., "params": {...}}` or a tabulated grid).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Mean-reversion rate, 1/time.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// closed-form, quadrature or auto.
    #[arg(long, default_value = "auto")]
    pub method: String,
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    pub grid_size: usize,
    /// Skip the oracle and FPE diagnostics.
    #[arg(long)]
    pub no_diagnostics: bool,
    /// Model card path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn spec_from_args(family: &str, params: &ParamArgs) -> Result<Spec64, CliError> {
    let family: Family = family.parse()?;
    if family == Family::Tabulated {
        return Err(CliError::Input("tabulated densities are given with --spec".into()));
    }
    let names = family.param_names();
    for extra in params.given() {
        if !names.contains(&extra) && !(family == Family::GramCharlier3 && extra == "domain") {
            return Err(CliError::Input(format!("--{} is not a {family} parameter", extra.replace('_', "-"))));
        }
    }
    let values = names
        .iter()
        .map(|n| {
            params
                .get(n)
                .ok_or_else(|| CliError::Input(format!("{family} needs --{}", n.replace('_', "-"))))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    match (family, params.domain) {
        (Family::GramCharlier3, Some(d)) => Ok(Spec64::gram_charlier3_with_domain(values[0], d)?),
        _ => Ok(Spec64::from_params(family, &values)?),
    }
}

pub fn run(args: &BuildArgs, argv: &[String]) -> Result<Status, CliError> {
    let mut rec = Recorder::start("build", argv);
    let spec = match (&args.family, &args.spec) {
        (Some(f), None) => spec_from_args(f, &args.params)?,
        (None, Some(path)) => {
            if !args.params.given().is_empty() {
                return Err(CliError::Input("parameter flags cannot be combined with --spec".into()));
            }
            read_json::<Spec64>(path)?
        }
        _ => return Err(CliError::Input("give either --family with parameters or --spec".into())),
    };
    let alpha = args
        .alpha
        .ok_or_else(|| CliError::Input("--alpha is required".into()))?;
    let method: Method = args.method.parse()?;
    let model = Model64::build(&spec, alpha, method, args.grid_size)?;
    let card = if args.no_diagnostics {
        model.card()
    } else {
        model.card_with_diagnostics()?
    };
    if let Some(d) = &card.diagnostics {
        if !d.fpe.passed {
            log::warn!("FPE residual {:.3e} exceeds its tolerance", d.fpe.scaled_max);
        }
    }
    let bytes = pretty(&card);
    match &args.out {
        Some(path) => {
            rec.write(path, &bytes)?;
            let config = json!({
                "spec": spec.to_document(),
                "alpha": alpha,
                "method": args.method,
                "grid_size": args.grid_size,
            });
            rec.finish(config, Some(card.model_hash.clone()), None)?;
        }
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(Status::Pass)
}
