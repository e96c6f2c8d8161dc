use alloc::string::String;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("negative value {0} in a non-negative ring")]
    NegativeValue(f64),
    #[error("unknown homomorphism `{0}`")]
    UnknownHomomorphism(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("direction violation: {0}")]
    DirectionViolation(String),
    #[error("symmetry constraint violated: {0}")]
    SymmetryViolation(String),
    #[error("singular block: pivot {pivot:e} below threshold {threshold:e}")]
    SingularBlock { pivot: f64, threshold: f64 },
    #[error("no identity tensor: {0}")]
    NoIdentity(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
}
