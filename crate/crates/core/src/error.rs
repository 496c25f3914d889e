use thiserror::Error;

/// Errors raised by the laboratory's numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("vectors are not orthonormal (max Gram deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("likelihood {value} at index {index} lies outside [0, 1]")]
    LikelihoodOutOfRange { index: usize, value: f64 },

    #[error("operator is not a density operator: {0}")]
    NotDensity(String),

    #[error("operator is not an effect (spectrum [{min}, {max}])")]
    NotEffect { min: f64, max: f64 },

    #[error("effects do not sum to the identity (max deviation {deviation:e})")]
    IncompletePovm { deviation: f64 },

    #[error("operator is not a projector (idempotence deviation {deviation:e})")]
    NotProjector { deviation: f64 },

    #[error("outcome probability {probability:e} is too small to condition on")]
    ZeroProbability { probability: f64 },

    #[error("measure is not additive (violation {violation:e})")]
    NotAdditive { violation: f64 },

    #[error("measure is not normalized: mu(I) = {value}")]
    MeasureNotNormalized { value: f64 },

    #[error("direction is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("invalid statistic: {0}")]
    InvalidStatistic(String),

    #[error("parameter grids differ between experiments")]
    GridMismatch,

    #[error("likelihoods are not proportional")]
    NotProportional,

    #[error("theta = {0} lies outside (-1, 1)")]
    ThetaOutOfRange(f64),

    #[error("upper-bound rule is not monotone in the confidence level")]
    NonMonotoneRule,

    #[error("design matrix is rank deficient")]
    RankDeficient,

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("element set is not a group: {0}")]
    NotAGroup(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("variable is not permissible under the group")]
    NotPermissible,

    #[error("space of {0} points is too large to enumerate its symmetric group")]
    SpaceTooLarge(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{mass:e} of the squared norm lies outside the grid")]
    SupportEscape { mass: f64 },

    #[error("boundary density {density:e} exceeds the allowed level")]
    BoundaryMassLoss { density: f64 },

    #[error("wave function vanishes near x = {x}")]
    NodeEncountered { x: f64 },

    #[error("{fraction:e} of diffusion paths left the grid")]
    PathEscape { fraction: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
