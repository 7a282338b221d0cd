use alloc::string::String;

/// Failures of algebra, hom and limit constructions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("not a Weil algebra: {0}")]
    NotWeil(String),
    #[error("relations force the quotient to be zero")]
    DegenerateQuotient,
    #[error("elements or homs belong to different algebras")]
    AlgebraMismatch,
    #[error("expected {expected} generator images, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("image of generator '{0}' is not in the maximal ideal")]
    NotInMaximalIdeal(String),
    #[error("relation {0} is not sent to zero")]
    RelationViolated(String),
    #[error("not an algebra homomorphism: {0}")]
    NotAHom(String),
    #[error("hom does not factor through the given map")]
    NoFactorization,
    #[error("cone does not commute with the diagram: {0}")]
    ConeNotCommuting(String),
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("subspace is not a subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("expected dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("points lie over different base points")]
    BaseMismatch,
    #[error("'{0}' is not a basis monomial of the maximal ideal")]
    UnknownBasisMonomial(String),
    #[error("{0}")]
    Parse(#[from] crate::parse::ParseError),
}

/// Failures of jet evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("exact mode cannot represent {0}")]
    Mode(String),
    #[error("expected {expected} arguments, got {found}")]
    Arity { expected: usize, found: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
