use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex enumeration supports at most {max} states, got {got}")]
    DimensionTooLarge { got: usize, max: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("halfspace normal is constant across states (degenerate on the simplex)")]
    DegenerateHalfspace,

    #[error("invalid belief: {0}")]
    InvalidBelief(String),

    #[error("invalid rational {0:?}: expected an integer or \"p/q\"")]
    InvalidRational(String),

    #[error("invalid decision problem: {0}")]
    InvalidProblem(String),

    #[error("scale factor must be positive")]
    NonpositiveScale,

    #[error("cell adjacency graph is disconnected")]
    Disconnected,

    #[error("prior must be interior (all coordinates > 0)")]
    BoundaryPrior,

    #[error("mean mismatch: {0}")]
    MeanMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("collapsed atoms must carry equal probabilities")]
    UnequalWeights,

    #[error("no admissible residual weight found")]
    NoFeasibleLambda,

    #[error("malformed identification data: {0}")]
    MalformedData(String),

    #[error("inconsistent data: {0}")]
    InconsistentData(String),

    #[error("singular solve: {0}")]
    SingularSolve(String),

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
