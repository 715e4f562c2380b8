use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("disconnected graph")]
    DisconnectedGraph,
    #[error("irreducibility violated: consensus matrix needs a connected graph")]
    IrreducibilityViolated,
    #[error("invalid graph: {0}")]
    InvalidGraph(&'static str),
    #[error("k = {k} must satisfy 1 <= k < n_nodes = {n_nodes}")]
    InvalidK { k: usize, n_nodes: usize },
    #[error("coordinate of node {0} is not finite")]
    NonFiniteCoordinate(usize),
    #[error("invalid UEM parameter {name} = {value}")]
    InvalidUemParameter { name: &'static str, value: f64 },
    #[error("non-symmetric GSO (max |S - S^T| = {0:e})")]
    NonSymmetricGso(f64),
    #[error("eigendecomposition did not converge")]
    EigenNoConvergence,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown GSO kind")]
    UnknownGsoKind,
    #[error("empty healthy set")]
    EmptyHealthySet,
    #[error("dataset must contain both healthy and anomalous signals")]
    MissingClass,
    #[error("empty hyperparameter grid")]
    EmptyGrid,
    #[error("need at least 2 folds, got {0}")]
    TooFewFolds(usize),
    #[error("all cross-validation folds skipped")]
    AllFoldsSkipped,
    #[error("max_anomalous_sensors = {max} exceeds n_nodes = {n_nodes}")]
    TooManyAnomalousSensors { max: usize, n_nodes: usize },
    #[error("invalid anomaly spec: {0}")]
    InvalidAnomalySpec(&'static str),
    #[error("no connected graph after {0} attempts")]
    ResamplingExhausted(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
