use thiserror::Error;

/// Errors raised by lattice construction, scheme evaluation and time stepping.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("stencil at (m={m}, n={n}) does not fit inside the lattice")]
    Boundary { m: i64, n: i64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("singular explicit update: {0}")]
    SingularUpdate(String),

    #[error("solver failed at level {level}: {reason}")]
    Solver { level: i64, reason: String },

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn mesh(msg: impl Into<String>) -> Self {
        Error::Mesh(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    /// True for failures of the numerics (as opposed to bad input or usage).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Numeric(_)
                | Error::SingularUpdate(_)
                | Error::Solver { .. }
                | Error::Mesh(_)
                | Error::Sampling(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
