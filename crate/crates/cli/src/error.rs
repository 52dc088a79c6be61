use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("missing artifact for stage `{stage}`: {path}")]
    MissingArtifact { stage: &'static str, path: String },
    #[error("corner hits exhausted the retries: {0}")]
    CornerHit(String),
    #[error("{0}")]
    Core(windtree::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::MissingArtifact { .. } => 3,
            CliError::CornerHit(_) => 4,
            CliError::Core(_) | CliError::Io { .. } => 1,
        }
    }
}

impl From<windtree::Error> for CliError {
    fn from(e: windtree::Error) -> Self {
        use windtree::Error as E;
        match e {
            E::CornerHit(_) => CliError::CornerHit(e.to_string()),
            E::InvalidSurface(_)
            | E::InvalidParameter(_)
            | E::InvalidTable(_)
            | E::InvalidCover(_)
            | E::DimensionMismatch { .. }
            | E::NonUnitDirection
            | E::DeterminantNotOne(_)
            | E::NotCocycle
            | E::NotClosed => CliError::Validation(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
