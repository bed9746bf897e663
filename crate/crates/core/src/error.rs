use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    #[error("invalid parameter `{name}` for {family}: {detail}")]
    InvalidParameter {
        family: &'static str,
        name: &'static str,
        detail: String,
    },

    #[error("invalid tabulated density: {0}")]
    InvalidTabulated(String),

    #[error("unknown distribution family `{0}`")]
    UnknownFamily(String),

    #[error("family `{0}` has no closed-form diffusion; build it by quadrature")]
    UnsupportedFamily(&'static str),

    #[error("negative diffusion radicand at x = {x}: integral = {value}")]
    NegativeRadicand { x: f64, value: f64 },

    #[error("invalid simulation config: {0}")]
    Config(String),

    #[error("{count} consecutive step rejections on path {path} at step {step}")]
    StepRejection { path: usize, step: usize, count: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate series: sample variance is zero")]
    DegenerateSeries,

    #[error("autocorrelation is not positive at lag {lag} (r = {value})")]
    NonPositiveAcf { lag: f64, value: f64 },

    #[error(
        "root finding for {what} did not converge: bracket [{lower}, {upper}] \
         with residuals [{f_lower}, {f_upper}] after {iterations} iterations"
    )]
    NonConvergence {
        what: String,
        lower: f64,
        upper: f64,
        f_lower: f64,
        f_upper: f64,
        iterations: usize,
    },

    #[error("quadrature did not reach tolerance on [{lower}, {upper}]: error estimate {error}")]
    Quadrature { lower: f64, upper: f64, error: f64 },

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn param(family: &'static str, name: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidParameter {
            family,
            name,
            detail: detail.into(),
        }
    }
}
