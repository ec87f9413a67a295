use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("line {line}: {message}")]
    ParseLine { line: usize, message: String },

    #[error("root finding did not converge (best residual {best_residual:e})")]
    NonConvergence { best_residual: f64 },

    #[error("factorization-unverified: {0}")]
    FactorizationUnverified(String),

    #[error("non-integral-image: operator maps {point:?} outside the integer lattice")]
    NonIntegralImage { point: Vec<i64> },

    #[error("wrong-dimension: expected {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("size-mismatch: |A| = {left}, |B| = {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("mixed-fields: elements belong to different number fields")]
    MixedFields,

    #[error("singular-operator")]
    SingularOperator,

    #[error("defective-operator: repeated eigenvalue with a single eigenvector")]
    DefectiveOperator,

    #[error("empty-construction: no lattice point qualifies")]
    EmptyConstruction,

    #[error("search-too-large: predicted {predicted} candidate sets exceeds budget {budget}")]
    SearchTooLarge { predicted: u128, budget: u128 },

    #[error("coordinate overflow while computing {0}")]
    CoordinateOverflow(&'static str),

    #[error("iteration cap reached: {0}")]
    IterationCap(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}
