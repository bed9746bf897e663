//! Model construction.
//!
//! The drift is always `a(x) = -α (x - μ)` with `μ` the stationary mean.
//! The diffusion comes either from a per-family closed form or from a
//! [`DiffusionTable`] built by quadrature of the defining integral; the two
//! routes are independent and are checked against each other.

mod closed_form;
mod fpe;
mod table;

use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionSpec, Family, SpecDocument, Support};
use crate::{provenance, Error, Real, Result};

pub use fpe::{default_grid, fpe_residual, FpeResidual, FPE_TOLERANCE, TAIL_TOLERANCE};
pub use table::{DiffusionTable, TableDiagnostics, MIN_GRID_SIZE, REFINE_TOLERANCE, TAIL_MASS};

pub const DEFAULT_GRID_SIZE: usize = 512;

/// How the diffusion was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ClosedForm,
    Quadrature,
}

/// Requested construction route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    /// Closed form for catalog families, quadrature for tabulated ones.
    Auto,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" | "closed_form" => Ok(Method::ClosedForm),
            "quadrature" => Ok(Method::Quadrature),
            "auto" => Ok(Method::Auto),
            _ => Err(Error::Format(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Diffusion<T> {
    ClosedForm,
    Quadrature(Box<DiffusionTable<T>>),
}

/// `dx = -α (x - μ) dt + b(x) dW`.
#[derive(Debug, Clone)]
pub struct SdeModel<T> {
    spec: DistributionSpec<T>,
    alpha: T,
    mu: T,
    support: Support<T>,
    diffusion: Diffusion<T>,
    grid_size: Option<usize>,
    factor: T,
}

fn check_alpha<T: Real>(alpha: T) -> Result<T> {
    if alpha.is_finite() && alpha > T::zero() {
        Ok(alpha)
    } else {
        Err(Error::param("model", "alpha", format!("must be finite and > 0, got {alpha}")))
    }
}

pub fn build_closed_form<T: Real>(spec: &DistributionSpec<T>, alpha: T) -> Result<SdeModel<T>> {
    SdeModel::build_closed_form(spec, alpha)
}

pub fn build_quadrature<T: Real>(
    spec: &DistributionSpec<T>,
    alpha: T,
    grid_size: usize,
) -> Result<SdeModel<T>> {
    SdeModel::build_quadrature(spec, alpha, grid_size)
}

impl<T: Real> SdeModel<T> {
    pub fn build_closed_form(spec: &DistributionSpec<T>, alpha: T) -> Result<Self> {
        let alpha = check_alpha(alpha)?;
        if spec.family() == Family::Tabulated {
            return Err(Error::UnsupportedFamily("tabulated"));
        }
        Ok(SdeModel {
            spec: spec.clone(),
            alpha,
            mu: spec.mean(),
            support: spec.support(),
            diffusion: Diffusion::ClosedForm,
            grid_size: None,
            factor: T::one(),
        })
    }

    pub fn build_quadrature(spec: &DistributionSpec<T>, alpha: T, grid_size: usize) -> Result<Self> {
        let alpha = check_alpha(alpha)?;
        let table = DiffusionTable::build(spec, alpha, grid_size)?;
        Ok(SdeModel {
            spec: spec.clone(),
            alpha,
            mu: spec.mean(),
            support: spec.support(),
            diffusion: Diffusion::Quadrature(Box::new(table)),
            grid_size: Some(grid_size),
            factor: T::one(),
        })
    }

    pub fn build(
        spec: &DistributionSpec<T>,
        alpha: T,
        method: Method,
        grid_size: usize,
    ) -> Result<Self> {
        match method {
            Method::ClosedForm => Self::build_closed_form(spec, alpha),
            Method::Quadrature => Self::build_quadrature(spec, alpha, grid_size),
            Method::Auto if spec.family() == Family::Tabulated => {
                Self::build_quadrature(spec, alpha, grid_size)
            }
            Method::Auto => Self::build_closed_form(spec, alpha),
        }
    }

    /// Same model with `b` multiplied by `factor`. Only useful as a
    /// negative control: any factor other than one breaks stationarity.
    pub fn with_diffusion_factor(mut self, factor: T) -> Self {
        self.factor = factor;
        self
    }

    pub fn spec(&self) -> &DistributionSpec<T> {
        &self.spec
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn support(&self) -> Support<T> {
        self.support
    }

    pub fn source(&self) -> Source {
        match self.diffusion {
            Diffusion::ClosedForm => Source::ClosedForm,
            Diffusion::Quadrature(_) => Source::Quadrature,
        }
    }

    pub fn diffusion_kind(&self) -> &Diffusion<T> {
        &self.diffusion
    }

    pub fn table(&self) -> Option<&DiffusionTable<T>> {
        match &self.diffusion {
            Diffusion::Quadrature(t) => Some(t),
            Diffusion::ClosedForm => None,
        }
    }

    #[inline]
    pub fn drift(&self, x: T) -> T {
        -(self.alpha * (x - self.mu))
    }

    /// `b²(x)`, zero outside the open support.
    pub fn diffusion_squared(&self, x: T) -> T {
        let b2 = match &self.diffusion {
            Diffusion::ClosedForm => {
                closed_form::squared(&self.spec, self.alpha, x).unwrap_or(T::zero())
            }
            Diffusion::Quadrature(t) => t.squared(&self.spec, x),
        };
        b2 * self.factor * self.factor
    }

    #[inline]
    pub fn diffusion(&self, x: T) -> T {
        self.diffusion_squared(x).sqrt()
    }

    fn identity(&self) -> ModelIdentity {
        ModelIdentity {
            spec: self.spec.to_document(),
            alpha: self.alpha.as_f64(),
            source: self.source(),
            grid_size: self.grid_size,
            diffusion_factor: self.factor.as_f64(),
        }
    }

    /// Short content hash of everything that determines the model.
    pub fn hash(&self) -> String {
        provenance::digest(&self.identity())
    }

    /// Model card without build diagnostics.
    pub fn card(&self) -> ModelCard {
        let id = self.identity();
        let bound = |v: T| if v.is_finite() { Some(v.as_f64()) } else { None };
        ModelCard {
            family: self.spec.family().name().to_string(),
            model_hash: self.hash(),
            spec: id.spec,
            alpha: id.alpha,
            mu: self.mu.as_f64(),
            support: [bound(self.support.lower), bound(self.support.upper)],
            source: id.source,
            grid_size: id.grid_size,
            diffusion_factor: id.diffusion_factor,
            diagnostics: None,
        }
    }

    /// Model card including the oracle comparison and the FPE residual.
    pub fn card_with_diagnostics(&self) -> Result<ModelCard> {
        let mut card = self.card();
        card.diagnostics = Some(self.diagnose()?);
        Ok(card)
    }

    /// Rebuilds the model a card describes.
    pub fn from_card(card: &ModelCard) -> Result<Self> {
        let spec = DistributionSpec::from_document(&card.spec)?;
        let alpha = T::from_f64(card.alpha)
            .ok_or_else(|| Error::Format(format!("alpha {} not representable", card.alpha)))?;
        let model = match card.source {
            Source::ClosedForm => Self::build_closed_form(&spec, alpha)?,
            Source::Quadrature => Self::build_quadrature(
                &spec,
                alpha,
                card.grid_size.unwrap_or(DEFAULT_GRID_SIZE),
            )?,
        };
        Ok(model.with_diffusion_factor(T::lit(card.diffusion_factor)))
    }

    /// Oracle comparison against the other construction route, plus the
    /// FPE residual on the default grid.
    pub fn diagnose(&self) -> Result<BuildDiagnostics> {
        let grid = oracle_grid(&self.spec, 200)?;
        let oracle_max_error = if self.spec.family() == Family::Tabulated {
            None
        } else {
            let other = match self.source() {
                Source::ClosedForm => Self::build_quadrature(&self.spec, self.alpha, DEFAULT_GRID_SIZE)?,
                Source::Quadrature => Self::build_closed_form(&self.spec, self.alpha)?,
            }
            .with_diffusion_factor(self.factor);
            Some(max_relative_gap(self, &other, &grid).as_f64())
        };
        let fpe = fpe_residual(self, &self.spec, &default_grid(&self.spec, 601)?);
        Ok(BuildDiagnostics {
            oracle_max_error,
            oracle_points: grid.len(),
            fpe: fpe.to_f64(),
            table: self.table().map(|t| t.diagnostics().clone()),
        })
    }
}

/// `max |b²_a - b²_b| / (1 + b²_a)` over a grid.
pub fn max_relative_gap<T: Real>(a: &SdeModel<T>, b: &SdeModel<T>, grid: &[T]) -> T {
    grid.iter()
        .map(|&x| {
            let ba = a.diffusion_squared(x);
            let bb = b.diffusion_squared(x);
            (ba - bb).abs() / (T::one() + ba)
        })
        .fold(T::zero(), T::max)
}

/// `n` points uniform in `x` over the central `1 - 2e-7` of the mass.
pub fn oracle_grid<T: Real>(spec: &DistributionSpec<T>, n: usize) -> Result<Vec<T>> {
    let tail = T::tolerance(1e-7);
    let lo = spec.quantile(tail)?;
    let hi = spec.quantile(T::one() - tail)?;
    let span = T::from_usize_lossy(n.max(2) - 1);
    Ok((0..n)
        .map(|i| lo + (hi - lo) * T::from_usize_lossy(i) / span)
        .collect())
}

#[derive(Serialize)]
struct ModelIdentity {
    spec: SpecDocument,
    alpha: f64,
    source: Source,
    grid_size: Option<usize>,
    diffusion_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildDiagnostics {
    /// Largest `|b²_this - b²_other| / (1 + b²_this)` against the other route.
    pub oracle_max_error: Option<f64>,
    pub oracle_points: usize,
    pub fpe: FpeResidual<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableDiagnostics>,
}

/// JSON description of a model; enough to rebuild it exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelCard {
    pub family: String,
    pub model_hash: String,
    pub spec: SpecDocument,
    pub alpha: f64,
    pub mu: f64,
    /// `null` marks an infinite end.
    pub support: [Option<f64>; 2],
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
    #[serde(default = "one")]
    pub diffusion_factor: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<BuildDiagnostics>,
}

fn one() -> f64 {
    1.0
}
