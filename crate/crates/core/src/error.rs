use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("classes live on different ambients: {0} vs {1}")]
    AmbientMismatch(String, String),
    #[error("not divisible by (1+y): {0}")]
    NotDivisible(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unsupported morphism: {0}")]
    UnsupportedMorphism(String),
    #[error("fiber product not in catalogue: {0}")]
    UnsupportedFiberProduct(String),
    #[error("morphism is not smooth: {0}")]
    NotSmooth(String),
    #[error("morphism is not proper: {0}")]
    NotProper(String),
    #[error("composite with reference is not smooth: {0}")]
    CompositeNotSmooth(String),
    #[error("reference mismatch: expected {expected}, found {found}")]
    ReferenceMismatch { expected: String, found: String },
    #[error("series order {order} is below the required {required}")]
    InsufficientOrder { order: usize, required: usize },
    #[error("invalid blow-up diagram: {0}")]
    InvalidDiagram(String),
    #[error("reference target is not a point: {0}")]
    ReferenceNotPoint(String),
}
