use thiserror::Error;

/// Failures by exit code: 1 domain check, 2 input, 3 solver, 4 geometry.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Geometry(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Geometry(_) => 4,
        }
    }
}

impl From<cplab::io::IoError> for CliError {
    fn from(e: cplab::io::IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<cplab::admissibility::AngleError> for CliError {
    fn from(e: cplab::admissibility::AngleError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<cplab::teich::TeichError> for CliError {
    fn from(e: cplab::teich::TeichError) -> Self {
        use cplab::teich::TeichError as T;
        match e {
            T::NoConvergence { .. } => CliError::Solver(e.to_string()),
            T::NotAdmissible => CliError::Domain(e.to_string()),
            T::IncompleteCusp { .. } | T::NotASolution { .. } => CliError::Geometry(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<cplab::develop::DevelopError> for CliError {
    fn from(e: cplab::develop::DevelopError) -> Self {
        use cplab::develop::DevelopError as D;
        match e {
            D::TooFewPoints { .. } | D::Degenerate | D::ShapeMismatch { .. } | D::Angle(_) | D::BadPath => {
                CliError::Input(e.to_string())
            }
            D::Teich(t) => t.into(),
            _ => CliError::Geometry(e.to_string()),
        }
    }
}
