use thiserror::Error;

/// Errors surfaced to the command line, each mapped to an exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, configuration or figure id.
    #[error("{0}")]
    Usage(String),

    /// A solver, optimizer or fit failed on a valid configuration.
    #[error("numerical failure: {0}")]
    Numerical(squeezed_engine::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<squeezed_engine::Error> for CliError {
    /// Invalid parameters and optimization specs are configuration problems;
    /// everything else the library raises is numerical.
    fn from(e: squeezed_engine::Error) -> Self {
        use squeezed_engine::Error as E;
        match e {
            E::InvalidParameters(_) | E::InvalidSpec(_) | E::SqueezeOverflow(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numerical(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e.to_string()))
    }
}
