use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("axis {axis} out of range for dimension {n}")]
    AxisOutOfRange { axis: usize, n: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("density weight mismatch: {left} vs {right}")]
    WeightMismatch { left: String, right: String },
    #[error("polynomial is not homogeneous in the fiber variables")]
    NotHomogeneous,
    #[error("operation undefined on fiber degree zero")]
    ZeroDegree,
    #[error("polynomial is not a vector field (fiber degree must be exactly 1)")]
    NotVectorField,
    #[error("coefficient contains fiber variables")]
    NotXOnly,
    #[error("principal symbol of the zero operator")]
    ZeroOperator,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(String),
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),
    #[error("exceptional weight: {0}")]
    ExceptionalWeight(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrices are not mutually inverse")]
    NotInverse,
    #[error("resonant order: {0}")]
    ResonantOrder(String),
    #[error("extracted component is not proportional to the transvectant: {0}")]
    NotProportional(String),
    #[error("truncation depth mismatch: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
