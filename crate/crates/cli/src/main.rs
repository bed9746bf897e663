//! `wsde`: build, simulate, validate and fit wind-speed SDE models.
//!
//! Exit codes: 0 success or validation pass, 1 validation failure,
//! 2 usage or input error.

mod commands;
mod manifest;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "wsde", version, about = "SDE models with a prescribed stationary law and exponential ACF")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a model card from a distribution and a decay rate.
    Build(commands::build::BuildArgs),
    /// Simulate a path ensemble from a model card.
    Simulate(commands::simulate::SimulateArgs),
    /// Check an ensemble against its model.
    Validate(commands::validate::ValidateArgs),
    /// Fit a distribution and decay rate to a `time,speed` series.
    Fit(commands::fit::FitArgs),
}

/// Distribution parameters, named as in the spec documents.
#[derive(Args, Debug, Default, Clone)]
pub struct ParamArgs {
    #[arg(long)]
    pub mean: Option<f64>,
    #[arg(long)]
    pub std: Option<f64>,
    #[arg(long)]
    pub skew: Option<f64>,
    /// Gram–Charlier standardized domain half-width.
    #[arg(long)]
    pub domain: Option<f64>,
    #[arg(long)]
    pub shape1: Option<f64>,
    #[arg(long)]
    pub shape2: Option<f64>,
    #[arg(long)]
    pub upper: Option<f64>,
    #[arg(long)]
    pub shape: Option<f64>,
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long)]
    pub power: Option<f64>,
    #[arg(long)]
    pub log_mean: Option<f64>,
    #[arg(long)]
    pub log_std: Option<f64>,
}

impl ParamArgs {
    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "mean" => self.mean,
            "std" => self.std,
            "skew" => self.skew,
            "domain" => self.domain,
            "shape1" => self.shape1,
            "shape2" => self.shape2,
            "upper" => self.upper,
            "shape" => self.shape,
            "scale" => self.scale,
            "power" => self.power,
            "log_mean" => self.log_mean,
            "log_std" => self.log_std,
            _ => None,
        }
    }

    pub fn given(&self) -> Vec<&'static str> {
        [
            "mean", "std", "skew", "domain", "shape1", "shape2", "upper", "shape", "scale", "power",
            "log_mean", "log_std",
        ]
        .into_iter()
        .filter(|n| self.get(n).is_some())
        .collect()
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let outcome = match cli.command {
        Command::Build(a) => commands::build::run(&a, &argv),
        Command::Simulate(a) => commands::simulate::run(&a, &argv),
        Command::Validate(a) => commands::validate::run(&a, &argv),
        Command::Fit(a) => commands::fit::run(&a, &argv),
    };
    match outcome {
        Ok(commands::Status::Pass) => ExitCode::SUCCESS,
        Ok(commands::Status::Fail) => ExitCode::from(1),
        Err(e) => {
            let msg = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
