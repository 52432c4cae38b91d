use thiserror::Error;

/// Failures raised by the engine model, the solvers and the fits.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("squeeze magnitude {0} exceeds the representable range (max {max})", max = crate::model::MAX_SQUEEZE)]
    SqueezeOverflow(f64),

    #[error("invalid engine parameters: {0}")]
    InvalidParameters(String),

    #[error("steady-state system is singular (pivot {pivot:e} in column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("integration step rejected at t = {t}: population {index} = {value:e} left [0, 1]")]
    StepRejected { t: f64, index: usize, value: f64 },

    #[error("invalid optimization spec: {0}")]
    InvalidSpec(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }
}
