use std::path::PathBuf;

use clap::{Args, ValueEnum};
use wsde_core::simulator::{
    simulate, simulate_with_threads, write_binary, write_csv, BoundaryPolicy, InitPolicy,
};
use wsde_core::Config64;

use super::{load_model, CliError, Status};
use crate::manifest::Recorder;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Bin,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Boundary {
    Reflect,
    Absorb,
    Reject,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Model card from `wsde build`.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub dt: f64,
    #[arg(long)]
    pub horizon: f64,
    #[arg(long, default_value_t = 1)]
    pub n_paths: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value = "reflect")]
    pub boundary: Boundary,
    /// `stationary`, `fixed:<x0>` or `burn-in:<duration>`.
    #[arg(long, default_value = "stationary")]
    pub init: String,
    /// Keep every k-th step.
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
    /// Refuse `dt·α > 0.1` instead of warning.
    #[arg(long)]
    pub alpha_check: bool,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_init(s: &str) -> Result<InitPolicy<f64>, CliError> {
    let number = |v: &str| {
        v.parse::<f64>()
            .map_err(|_| CliError::Input(format!("bad number `{v}` in --init {s}")))
    };
    match s.split_once(':') {
        None if s == "stationary" => Ok(InitPolicy::StationaryInverseCdf),
        Some(("fixed", v)) => Ok(InitPolicy::Fixed { x0: number(v)? }),
        Some(("burn-in", v)) => Ok(InitPolicy::BurnIn { duration: number(v)? }),
        _ => Err(CliError::Input(format!(
            "--init must be stationary, fixed:<x0> or burn-in:<duration>, got `{s}`"
        ))),
    }
}

pub fn run(args: &SimulateArgs, argv: &[String]) -> Result<Status, CliError> {
    let mut rec = Recorder::start("simulate", argv);
    let (_, model) = load_model(&args.model)?;
    let boundary = match args.boundary {
        Boundary::Reflect => BoundaryPolicy::Reflect,
        Boundary::Absorb => BoundaryPolicy::AbsorbAtEpsilon,
        Boundary::Reject => BoundaryPolicy::RejectStep,
    };
    let config = Config64::new(args.dt, args.horizon, args.n_paths, args.seed)
        .with_boundary(boundary)
        .with_init(parse_init(&args.init)?)
        .with_record_every(args.record_every)
        .with_strict_step(args.alpha_check);
    // Warnings are logged by the simulator itself.
    config.validate(model.alpha())?;
    let ens = match args.threads {
        Some(0) => return Err(CliError::Input("--threads must be >= 1".into())),
        Some(n) => simulate_with_threads(&model, &config, n)?,
        None => simulate(&model, &config)?,
    };
    let mut bytes = Vec::new();
    match args.format {
        Format::Csv => write_csv(&ens, &mut bytes),
        Format::Bin => write_binary(&ens, &mut bytes),
    }
    .map_err(|e| CliError::io(&args.out, e))?;
    rec.write(&args.out, &bytes)?;
    let mut cfg = serde_json::to_value(&config).expect("config serializes");
    cfg["config_hash"] = config.hash().into();
    cfg["format"] = format!("{:?}", args.format).to_lowercase().into();
    rec.finish(cfg, Some(model.hash()), Some(args.seed))?;
    Ok(Status::Pass)
}
