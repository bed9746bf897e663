//! Euler–Maruyama path ensembles.
//!
//! Every path owns a ChaCha8 stream selected by `(seed, path index)`, so an
//! ensemble is bit-for-bit the same whatever the number of worker threads.

mod io;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builder::SdeModel;
use crate::distributions::DistributionSpec;
use crate::{provenance, Error, Real, Result};

pub use io::{read_ensemble, write_binary, write_csv, BINARY_MAGIC};

/// `dt·α` above this is accepted with a warning (or refused in strict mode).
pub const DT_ALPHA_WARN: f64 = 0.1;
/// `dt·α` above this is always refused.
pub const DT_ALPHA_MAX: f64 = 0.5;
/// Consecutive rejected draws tolerated by [`BoundaryPolicy::RejectStep`].
pub const MAX_REJECTIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryPolicy {
    /// Mirror the step at the violated bound, then keep a small gap to it.
    #[default]
    Reflect,
    /// Freeze the path just inside the violated bound.
    AbsorbAtEpsilon,
    /// Redraw the Gaussian increment until the step stays inside.
    RejectStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitPolicy<T> {
    /// Draw `x₀` from the stationary law by inverse cdf.
    #[default]
    StationaryInverseCdf,
    Fixed { x0: T },
    /// Start at the mean and discard `duration` of simulated time.
    BurnIn { duration: T },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig<T> {
    pub dt: T,
    pub horizon: T,
    pub n_paths: usize,
    pub seed: u64,
    #[serde(default)]
    pub boundary: BoundaryPolicy,
    #[serde(default)]
    pub init: InitPolicy<T>,
    /// Keep every `record_every`-th step (1 keeps all).
    #[serde(default = "one")]
    pub record_every: usize,
    /// Refuse `dt·α > 0.1` instead of warning.
    #[serde(default)]
    pub strict_step: bool,
}

fn one() -> usize {
    1
}

impl<T: Real> SimulationConfig<T> {
    pub fn new(dt: T, horizon: T, n_paths: usize, seed: u64) -> Self {
        SimulationConfig {
            dt,
            horizon,
            n_paths,
            seed,
            boundary: BoundaryPolicy::Reflect,
            init: InitPolicy::StationaryInverseCdf,
            record_every: 1,
            strict_step: false,
        }
    }

    pub fn with_boundary(mut self, boundary: BoundaryPolicy) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_init(mut self, init: InitPolicy<T>) -> Self {
        self.init = init;
        self
    }

    pub fn with_record_every(mut self, record_every: usize) -> Self {
        self.record_every = record_every;
        self
    }

    pub fn with_strict_step(mut self, strict: bool) -> Self {
        self.strict_step = strict;
        self
    }

    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round().to_usize().unwrap_or(0)
    }

    /// Checks the config against a decay rate; returns warnings.
    pub fn validate(&self, alpha: T) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if !(self.dt.is_finite() && self.dt > T::zero()) {
            return Err(Error::Config(format!("dt must be finite and > 0, got {}", self.dt)));
        }
        if !(self.horizon.is_finite() && self.horizon >= self.dt) {
            return Err(Error::Config(format!(
                "horizon must be finite and >= dt, got {}",
                self.horizon
            )));
        }
        if self.n_paths == 0 {
            return Err(Error::Config("n_paths must be >= 1".into()));
        }
        if self.record_every == 0 {
            return Err(Error::Config("record_every must be >= 1".into()));
        }
        let ratio = self.dt * alpha;
        if ratio > T::lit(DT_ALPHA_MAX) {
            return Err(Error::Config(format!("dt·alpha = {ratio} exceeds {DT_ALPHA_MAX}")));
        }
        if ratio > T::lit(DT_ALPHA_WARN) {
            if self.strict_step {
                return Err(Error::Config(format!(
                    "dt·alpha = {ratio} exceeds {DT_ALPHA_WARN} (strict step check)"
                )));
            }
            warnings.push(format!("dt·alpha = {ratio} exceeds {DT_ALPHA_WARN}; expect discretization bias"));
        }
        match self.init {
            InitPolicy::BurnIn { duration } if !(duration >= T::zero() && duration.is_finite()) => {
                return Err(Error::Config(format!("burn-in duration must be >= 0, got {duration}")));
            }
            InitPolicy::Fixed { x0 } if !x0.is_finite() => {
                return Err(Error::Config(format!("x0 must be finite, got {x0}")));
            }
            _ => {}
        }
        Ok(warnings)
    }

    pub fn hash(&self) -> String {
        provenance::digest(self)
    }
}

/// Simulated paths; `values` is path-major (`n_paths × n_times`).
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble<T> {
    pub times: Vec<T>,
    pub values: Vec<T>,
    pub n_paths: usize,
    pub model_hash: String,
    pub config_hash: String,
}

impl<T: Real> PathEnsemble<T> {
    pub fn n_times(&self) -> usize {
        self.times.len()
    }

    pub fn path(&self, i: usize) -> &[T] {
        let n = self.n_times();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn paths(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks(self.n_times().max(1))
    }

    /// Values recorded at time index `k`, one per path.
    pub fn snapshot(&self, k: usize) -> Vec<T> {
        self.paths().map(|p| p[k]).collect()
    }

    /// Sampling interval of the recorded series.
    pub fn spacing(&self) -> Option<T> {
        (self.times.len() > 1).then(|| self.times[1] - self.times[0])
    }

    /// Content hash of times and values.
    pub fn content_hash(&self) -> String {
        let mut bytes = Vec::with_capacity(8 * (self.times.len() + self.values.len()));
        for v in self.times.iter().chain(&self.values) {
            bytes.extend_from_slice(&v.as_f64().to_le_bytes());
        }
        provenance::digest_bytes(&bytes)
    }
}

fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

/// `n` draws from the stationary law by inverse cdf.
pub fn sample_stationary<T: Real>(spec: &DistributionSpec<T>, n: usize, seed: u64) -> Result<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniforms: Vec<f64> = (0..n).map(|_| rng.sample(Open01)).collect();
    uniforms
        .into_par_iter()
        .map(|u| spec.quantile(T::lit(u)))
        .collect()
}

struct Stepper<'a, T: Real> {
    model: &'a SdeModel<T>,
    dt: T,
    sqrt_dt: T,
    lower: T,
    upper: T,
    gap: T,
    boundary: BoundaryPolicy,
}

enum Step<T> {
    Moved(T),
    Absorbed(T),
}

impl<T: Real> Stepper<'_, T> {
    fn inside(&self, x: T) -> bool {
        x > self.lower && x < self.upper
    }

    fn propose(&self, x: T, z: T) -> T {
        x + self.model.drift(x) * self.dt + self.model.diffusion(x) * self.sqrt_dt * z
    }

    fn step(&self, x: T, rng: &mut ChaCha8Rng, path: usize, k: usize) -> Result<Step<T>> {
        let z = T::lit(rng.sample(StandardNormal));
        let y = self.propose(x, z);
        if self.inside(y) {
            return Ok(Step::Moved(y));
        }
        match self.boundary {
            BoundaryPolicy::Reflect => Ok(Step::Moved(self.reflect(y))),
            BoundaryPolicy::AbsorbAtEpsilon => Ok(Step::Absorbed(self.clamp(y))),
            BoundaryPolicy::RejectStep => {
                for count in 1..=MAX_REJECTIONS {
                    let z = T::lit(rng.sample(StandardNormal));
                    let y = self.propose(x, z);
                    if self.inside(y) {
                        return Ok(Step::Moved(y));
                    }
                    if count == MAX_REJECTIONS {
                        break;
                    }
                }
                Err(Error::StepRejection {
                    path,
                    step: k,
                    count: MAX_REJECTIONS,
                })
            }
        }
    }

    fn reflect(&self, mut y: T) -> T {
        let two = T::lit(2.0);
        for _ in 0..4 {
            if y <= self.lower {
                y = two * self.lower - y;
            } else if y >= self.upper {
                y = two * self.upper - y;
            } else {
                break;
            }
        }
        self.clamp(y)
    }

    fn clamp(&self, y: T) -> T {
        let lo = self.lower + self.gap;
        let hi = self.upper - self.gap;
        if y.is_nan() {
            return lo.max(T::zero()).min(hi);
        }
        y.max(lo).min(hi)
    }
}

/// Runs the ensemble on the current rayon pool.
pub fn simulate<T: Real>(model: &SdeModel<T>, config: &SimulationConfig<T>) -> Result<PathEnsemble<T>> {
    for w in config.validate(model.alpha())? {
        log::warn!("{w}");
    }
    let support = model.support();
    let spread = model.spec().variance().sqrt();
    let stepper = Stepper {
        model,
        dt: config.dt,
        sqrt_dt: config.dt.sqrt(),
        lower: support.lower,
        upper: support.upper,
        gap: T::lit(1e-10) * spread,
        boundary: config.boundary,
    };
    let n_steps = config.steps();
    let every = config.record_every;
    let n_times = n_steps / every + 1;
    let burn_steps = match config.init {
        InitPolicy::BurnIn { duration } => (duration / config.dt).round().to_usize().unwrap_or(0),
        _ => 0,
    };
    let run_path = |path: usize| -> Result<Vec<T>> {
        let mut rng = path_rng(config.seed, path);
        let mut x = match config.init {
            InitPolicy::StationaryInverseCdf => {
                let u: f64 = rng.sample(Open01);
                model.spec().quantile(T::lit(u))?
            }
            InitPolicy::Fixed { x0 } => x0,
            InitPolicy::BurnIn { .. } => model.mu(),
        };
        let mut absorbed = false;
        for k in 0..burn_steps {
            if absorbed {
                break;
            }
            match stepper.step(x, &mut rng, path, k)? {
                Step::Moved(y) => x = y,
                Step::Absorbed(y) => {
                    x = y;
                    absorbed = true;
                }
            }
        }
        let mut out = Vec::with_capacity(n_times);
        out.push(x);
        for k in 1..=n_steps {
            if !absorbed {
                match stepper.step(x, &mut rng, path, k)? {
                    Step::Moved(y) => x = y,
                    Step::Absorbed(y) => {
                        x = y;
                        absorbed = true;
                    }
                }
            }
            if k % every == 0 {
                out.push(x);
            }
        }
        Ok(out)
    };
    let paths: Vec<Vec<T>> = (0..config.n_paths)
        .into_par_iter()
        .map(run_path)
        .collect::<Result<_>>()?;
    let step = config.dt * T::from_usize_lossy(every);
    Ok(PathEnsemble {
        times: (0..n_times).map(|j| step * T::from_usize_lossy(j)).collect(),
        values: paths.concat(),
        n_paths: config.n_paths,
        model_hash: model.hash(),
        config_hash: config.hash(),
    })
}

/// Runs the ensemble on a dedicated pool with `threads` workers.
pub fn simulate_with_threads<T: Real>(
    model: &SdeModel<T>,
    config: &SimulationConfig<T>,
    threads: usize,
) -> Result<PathEnsemble<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| simulate(model, config))
}

#[cfg(test)]
mod tests;
