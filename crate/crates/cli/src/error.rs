use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed option values that clap cannot catch.
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("IoError: {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io { .. } => 1,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        })*
    };
}

domain_from!(
    alexandrov::mesh::MeshError,
    alexandrov::curvature::CurvatureError,
    alexandrov::geodesics::GeodesicError,
    alexandrov::conformal::ConformalError,
    alexandrov::potential::PotentialError,
    alexandrov::convergence::ConvergenceError
);
