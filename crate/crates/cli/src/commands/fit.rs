use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use wsde_core::analysis::fit_distribution;
use wsde_core::distributions::SpecDocument;
use wsde_core::{CalibrationResult, Error, Family, Model64};

use super::{pretty, read, CliError, Status};
use crate::manifest::Recorder;

/// Largest relative deviation of a time step from the median step.
pub const MAX_JITTER: f64 = 1e-6;

#[derive(Args, Debug)]
pub struct FitArgs {
    /// CSV with header `time,speed` and uniformly spaced times.
    #[arg(long)]
    pub csv: PathBuf,
    /// A catalog family, or `auto` to rank all of them by KS distance.
    #[arg(long, default_value = "auto")]
    pub family: String,
    /// Calibration result path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also build a model card from the fitted spec and rate.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Output<'a> {
    spec: SpecDocument,
    alpha_hat: f64,
    ks: f64,
    goodness: &'a [wsde_core::analysis::FamilyScore<f64>],
}

/// Parses a `time,speed` series; returns the values and the sample spacing.
pub fn read_series(path: &Path) -> Result<(Vec<f64>, f64), CliError> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| Error::Format(format!("{}: not UTF-8", path.display())))?;
    let bad = |line: usize, what: String| Error::Format(format!("{}:{line}: {what}", path.display()));
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.split(',').map(str::trim).eq(["time", "speed"]) => {}
        Some((i, h)) => return Err(bad(i + 1, format!("expected header `time,speed`, found `{h}`")).into()),
        None => return Err(bad(1, "empty file".into()).into()),
    }
    let (mut times, mut values) = (Vec::new(), Vec::new());
    for (i, l) in lines {
        let mut fields = l.split(',').map(str::trim);
        let mut num = |name: &str| -> Result<f64, Error> {
            let f = fields.next().ok_or_else(|| bad(i + 1, format!("missing {name}")))?;
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(i + 1, format!("bad {name} `{f}`")))
        };
        times.push(num("time")?);
        values.push(num("speed")?);
        if fields.next().is_some() {
            return Err(bad(i + 1, "expected two columns".into()).into());
        }
    }
    if times.len() < 2 {
        return Err(Error::Format(format!("{}: fewer than two rows", path.display())).into());
    }
    let mut steps: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let spacing = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(spacing > 0.0) {
        return Err(Error::Format(format!("{}: times are not increasing", path.display())).into());
    }
    steps.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let jitter = (steps[0] - spacing).abs().max((steps[steps.len() - 1] - spacing).abs()) / spacing;
    if !(jitter <= MAX_JITTER) {
        return Err(Error::Format(format!(
            "{}: sampling is not uniform (relative jitter {jitter:.2e} > {MAX_JITTER:e})",
            path.display()
        ))
        .into());
    }
    Ok((values, spacing))
}

pub fn run(args: &FitArgs, argv: &[String]) -> Result<Status, CliError> {
    let mut rec = Recorder::start("fit", argv);
    let family = match args.family.as_str() {
        "auto" => None,
        name => Some(name.parse::<Family>()?),
    };
    let (series, spacing) = read_series(&args.csv)?;
    let fit: CalibrationResult<f64> = fit_distribution(&series, family, spacing)?;
    let out = Output {
        spec: fit.spec.to_document(),
        alpha_hat: fit.alpha_hat,
        ks: fit.ks,
        goodness: &fit.goodness,
    };
    let bytes = pretty(&out);
    let mut model_hash = None;
    if let Some(path) = &args.model_out {
        let model = Model64::build_closed_form(&fit.spec, fit.alpha_hat)?;
        model_hash = Some(model.hash());
        rec.write(path, &pretty(&model.card()))?;
    }
    match &args.out {
        Some(path) => rec.write(path, &bytes)?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    let config = serde_json::json!({
        "csv": args.csv.display().to_string(),
        "family": args.family,
        "samples": series.len(),
        "spacing": spacing,
    });
    rec.finish(config, model_hash, None)?;
    Ok(Status::Pass)
}
