use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("lightlike vector has no angle")]
    LightlikeInput,

    #[error("angle undefined: {0}")]
    CaseUndefined(String),

    #[error("matrix is not pseudo-orthogonal with unit determinant (residual {residual:.3e}, det {det})")]
    NotPseudoOrthogonal { residual: f64, det: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("parameter is not strictly increasing at sample {index}")]
    NonMonotoneParameter { index: usize },

    #[error("need at least {needed} samples, got {found}")]
    TooFewSamples { needed: usize, found: usize },

    #[error("generator parameters out of domain: {0}")]
    InfeasibleParameters(String),

    #[error("tangent is lightlike at sample {index}")]
    LightlikeTangent { index: usize },

    #[error("derivative jet is degenerate at sample {index}: {detail}")]
    DegenerateJet { index: usize, detail: String },

    #[error("frame vector e{vector} is lightlike at sample {index}")]
    LightlikeFrameVector { index: usize, vector: usize },

    #[error("kappa1 vanishes at sample {index} (normalized value {value:.3e})")]
    VanishingCurvature { index: usize, value: f64 },

    #[error("focal curvature m{order} vanishes at sample {index}")]
    VanishingFocal { index: usize, order: usize },

    #[error("incompatible signatures: {0}")]
    IncompatibleDimension(String),

    #[error("spherical parameter ranges do not overlap")]
    DisjointRanges,

    #[error("frame re-orthonormalization failed at sigma = {sigma}")]
    FrameDrift { sigma: f64 },

    #[error("non-finite value at sigma = {sigma}")]
    NonFinite { sigma: f64 },

    #[error("signatures differ by {distance:.3e} (threshold {threshold:.1e})")]
    NoMatch { distance: f64, threshold: f64 },

    #[error("congruence residual {residual:.3e} exceeds tolerance {tolerance:.1e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("infeasible self-similar spec: {0}")]
    InfeasibleSpec(String),

    #[error("eigenvalues of M^2 cannot be paired: {0}")]
    DegenerateEigenvalues(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable variant name, used in machine-readable error payloads.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::LightlikeInput => "LightlikeInput",
            Error::CaseUndefined(_) => "CaseUndefined",
            Error::NotPseudoOrthogonal { .. } => "NotPseudoOrthogonal",
            Error::Parse(_) => "ParseError",
            Error::NonMonotoneParameter { .. } => "NonMonotoneParameter",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::InfeasibleParameters(_) => "InfeasibleParameters",
            Error::LightlikeTangent { .. } => "LightlikeTangent",
            Error::DegenerateJet { .. } => "DegenerateJet",
            Error::LightlikeFrameVector { .. } => "LightlikeFrameVector",
            Error::VanishingCurvature { .. } => "VanishingCurvature",
            Error::VanishingFocal { .. } => "VanishingFocal",
            Error::IncompatibleDimension(_) => "IncompatibleDimension",
            Error::DisjointRanges => "DisjointRanges",
            Error::FrameDrift { .. } => "FrameDrift",
            Error::NonFinite { .. } => "NonFinite",
            Error::NoMatch { .. } => "NoMatch",
            Error::ResidualTooLarge { .. } => "ResidualTooLarge",
            Error::InfeasibleSpec(_) => "InfeasibleSpec",
            Error::DegenerateEigenvalues(_) => "DegenerateEigenvalues",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Io(_) => "IoError",
        }
    }

    /// True for errors caused by bad input rather than numerical breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::NotPseudoOrthogonal { .. }
                | Error::Parse(_)
                | Error::NonMonotoneParameter { .. }
                | Error::TooFewSamples { .. }
                | Error::InfeasibleParameters(_)
                | Error::IncompatibleDimension(_)
                | Error::InfeasibleSpec(_)
                | Error::InvalidInput(_)
                | Error::Io(_)
        )
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
