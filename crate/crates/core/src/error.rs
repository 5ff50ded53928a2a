use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    /// Bad user input: unknown kind, invalid parameter, malformed grid.
    #[error("invalid specification: {0}")]
    Spec(String),
    #[error("point outside domain: {0}")]
    Domain(String),
    #[error("undefined at horizontal point (theta^2 = {0})")]
    Horizontal(f64),
    #[error("not spacelike: 2 theta^2 - 1 = {0}")]
    NotSpacelike(f64),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl GeomError {
    pub fn spec(msg: impl Into<String>) -> Self {
        GeomError::Spec(msg.into())
    }

    pub fn is_spec(&self) -> bool {
        matches!(self, GeomError::Spec(_))
    }

    /// Short tag used when counting excluded samples.
    pub fn kind(&self) -> &'static str {
        match self {
            GeomError::Spec(_) => "spec",
            GeomError::Domain(_) => "domain",
            GeomError::Horizontal(_) => "horizontal",
            GeomError::NotSpacelike(_) => "not_spacelike",
            GeomError::Degenerate(_) => "degenerate",
            GeomError::Numerical(_) => "numerical",
        }
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
