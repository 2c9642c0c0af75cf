use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("degenerate parameter: all parameter coordinates are zero")]
    DegenerateParameter,

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("common component: the two curves share a component")]
    CommonComponent,

    #[error("chart exhaustion: no chart isolates all intersection points")]
    ChartExhaustion,

    #[error("root finding did not converge after {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        best: Vec<Complex64>,
        residuals: Vec<f64>,
    },

    #[error("multiplicity disagreement near {root}: cluster size {cluster} but |p'| = {derivative:e}")]
    MultiplicityDisagreement {
        root: Complex64,
        cluster: usize,
        derivative: f64,
    },

    #[error("ambiguous matching for point {index}")]
    AmbiguousMatching { index: usize },

    #[error("cardinality mismatch: expected {expected} simple points, got {got}")]
    CardinalityMismatch { expected: usize, got: usize },

    #[error("path hits discriminant at segment {segment}, s = {s:.6}")]
    PathHitsDiscriminant { segment: usize, s: f64 },

    #[error("label matching failed: {0}")]
    LabelMatchingFailed(String),

    #[error("basepoint not smooth")]
    BasepointNotSmooth,

    #[error("loop is not closed (gap {gap:e})")]
    LoopNotClosed { gap: f64 },

    #[error("no crossing found")]
    NoCrossingFound,

    #[error("crossings too close: {0:e}")]
    CrossingsTooClose(f64),

    #[error("no loop was tracked successfully")]
    NoSuccessfulLoops,

    #[error("not a subgroup")]
    NotSubgroup,

    #[error("index mismatch: [G:H] = {index}, {labels} labels given")]
    IndexMismatch { index: usize, labels: usize },

    #[error("unclassifiable: {0}")]
    Unclassifiable(String),

    #[error("pencil inside discriminant")]
    PencilInsideDiscriminant,

    #[error("count mismatch: discriminant polynomial has {polynomial} crossings, multistart found {multistart}")]
    CountMismatch { polynomial: usize, multistart: usize },

    #[error("insufficient starts: {first} members with {starts} starts, {second} with {doubled}")]
    InsufficientStarts {
        starts: usize,
        first: usize,
        doubled: usize,
        second: usize,
    },

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("non-integral intermediate: {0}")]
    NonIntegral(String),
}

impl Error {
    /// True for errors caused by malformed input rather than numerical failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Invalid(_) | Error::Schema(_) | Error::DegenerateParameter | Error::Constraint(_)
        )
    }
}
