use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("{rows}x{cols} matrix needs {} entries, got {len}", rows * cols)]
    EntryCount { rows: usize, cols: usize, len: usize },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a sub-normalized state (hermitian: {hermitian}, min eigenvalue {min_eigenvalue:.3e}, trace {trace:.6})")]
    InvalidState {
        hermitian: bool,
        min_eigenvalue: f64,
        trace: f64,
    },
    #[error("ket must have unit norm, got {norm:.6}")]
    NotNormalized { norm: f64 },
    #[error("expected a column vector, got {rows}x{cols}")]
    NotAKet { rows: usize, cols: usize },
    #[error("operator is not an orthogonal projector (deviation {deviation:.3e})")]
    NotProjector { deviation: f64 },
    #[error("measurement operators violate {0}")]
    InvalidMeasurement(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TomError {
    #[error("grid holds {found} cells, expected {expected}")]
    GridSize { expected: usize, found: usize },
    #[error("cell ({row}, {col}) acts on dimension {found}, expected {expected}")]
    CellDimension {
        row: usize,
        col: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex index {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("operands disagree: {0}")]
    Mismatch(String),
    #[error("column {column} is not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { column: usize, deviation: f64 },
    #[error("column {column} has no positive-definite completeness sum")]
    DegenerateColumn { column: usize },
    #[error("vector state total trace {trace:.9} is not 1")]
    NotFullVectorState { trace: f64 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("generation {requested} exceeds the supported maximum {max}")]
    GenerationTooLarge { requested: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("{walk} needs generation >= {min}, got {found}")]
    Generation {
        walk: &'static str,
        min: usize,
        found: usize,
    },
    #[error("{walk} is not a valid TOM: {source}")]
    InvalidTom {
        walk: &'static str,
        #[source]
        source: TomError,
    },
    #[error("no operator assigned to class pair ({from}, {to})")]
    MissingAssignment { from: usize, to: usize },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Tom(#[from] TomError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PassageError {
    #[error("no vertex has degree {0}")]
    NoVertexWithDegree(usize),
    #[error("initial state must have unit trace, got {0:.9}")]
    InitialTrace(f64),
    #[error("residual threshold must lie in (0, 1), got {0}")]
    Threshold(f64),
    #[error("t_max must be at least 1")]
    ZeroSteps,
    #[error("linear system for target {target} is singular")]
    Singular { target: usize },
    #[error(transparent)]
    Tom(#[from] TomError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}
