use thiserror::Error;

/// Errors produced by the exact engine. Every variant names the violated
/// precondition so script drivers can surface it with a step index.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(i64),
    #[error("degree {degree} out of range 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("coordinate length {got} does not match summand count {want} in degree {degree}")]
    CoordinateLength {
        degree: usize,
        got: usize,
        want: usize,
    },
    #[error("element is not a unit free generator: {0}")]
    NotUfg(String),
    #[error("mismatched top degree: {0} vs {1}")]
    TopDegreeMismatch(usize, usize),
    #[error("mismatched coefficient ring: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("mismatched dimension: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("Kunneth factors have torsion over a non-field coefficient ring")]
    TorsionKunneth,
    #[error("invalid invariant factor {0}")]
    BadFactor(i64),
    #[error("invalid manifold expression: {0}")]
    BadManifold(String),
    #[error("no marked generator of degree {0} is available for c0")]
    NoEligibleC0(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("oracle simplex budget exceeded: {used} > {budget}")]
    BudgetExceeded { used: usize, budget: usize },
    #[error("invalid gluing: {0}")]
    BadGlue(String),
}

impl EngineError {
    pub fn precondition(msg: impl Into<String>) -> Self {
        EngineError::Precondition(msg.into())
    }
}
