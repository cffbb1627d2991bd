use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base genus must be non-negative, got {0}")]
    NegativeGenus(i64),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("operation `{0}` needs a projective-bundle geometry")]
    UnsupportedGeometry(&'static str),
    #[error("C-torsion hint contradicts the class: {0}")]
    InconsistentHint(String),
    #[error("invalid subobject lattice: {0}")]
    InvalidLattice(String),
    #[error("no strictly decreasing filtration exists over the lattice: {0}")]
    NotAFiltration(String),
    #[error("invalid tilt parameters: {0}")]
    InvalidParams(String),
    #[error("the class has no positive imaginary part to split: {0}")]
    EmptyAmbient(String),
    #[error("linear system for the coefficients is inconsistent: {0}")]
    InconsistentIdentity(String),
    #[error("invalid conjecture coefficients: {0}")]
    InvalidCoefficients(String),
    #[error("closed form has a pole at beta = {0}")]
    PoleAtBeta(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NegativeGenus(_) => "negative-genus",
            Error::InvalidGeometry(_) => "invalid-geometry",
            Error::UnsupportedGeometry(_) => "unsupported-geometry",
            Error::InconsistentHint(_) => "inconsistent-hint",
            Error::InvalidLattice(_) => "invalid-lattice",
            Error::NotAFiltration(_) => "not-a-filtration",
            Error::InvalidParams(_) => "invalid-params",
            Error::EmptyAmbient(_) => "empty-ambient",
            Error::InconsistentIdentity(_) => "inconsistent-identity",
            Error::InvalidCoefficients(_) => "invalid-coefficients",
            Error::PoleAtBeta(_) => "pole-at-beta",
            Error::Parse(_) => "parse-error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
