use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("sublattice is not saturated; the quotient would have torsion")]
    NotSaturated,
    #[error("sublattices do not differ in rank by exactly one")]
    NotCodimOne,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors are not linearly independent")]
    NotIndependent,
    #[error("cone contains a line")]
    NotStronglyConvex,
    #[error("ambient rank {0} exceeds the supported maximum of {max}", max = crate::fan::MAX_AMBIENT_RANK)]
    RankCapExceeded(usize),
    #[error("cone {0} is not in the fan")]
    ConeNotInFan(String),
    #[error("cone is not simplicial")]
    NotSimplicial,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("fan is not complete")]
    FanNotComplete,
    #[error("displacement vector is not generic: {0}")]
    NonGenericVector(String),
    #[error("no generic vector found after {0} candidates")]
    GenericSearchExhausted(usize),
    #[error("cone {tau} is not a face of {sigma}")]
    NotAFace { tau: String, sigma: String },
    #[error("residue sum at {0} is not a polynomial")]
    ResidueNotPolynomial(String),
    #[error("the ring oracle requires a smooth complete fan")]
    OracleRequiresSmoothComplete,
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("piecewise polynomial is not compatible on shared faces")]
    IncompatiblePieces,
    #[error("balancing fails at {0}")]
    Unbalanced(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
