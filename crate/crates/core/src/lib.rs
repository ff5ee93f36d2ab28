//! Generalized open quantum walks driven by transition operation matrices,
//! on Apollonian networks, with monitored first-passage statistics.

pub mod apollonian;
pub mod error;
pub mod passage;
pub mod quantum;
pub mod tom;
pub mod walks;

pub use apollonian::{ApollonianNetwork, ClassPartition};
pub use error::{NetworkError, PassageError, QuantumError, TomError, WalkError};
pub use passage::{Aggregate, PassageConfig, PassageEngine, PassageResult, PassageValue, QmfptMatrix};
pub use quantum::{CMatrix, KrausMap, Measurement, SubNormalizedState, Tolerances, ViewOperator, C64};
pub use tom::{GlobalState, LiftedChannel, TomClass, TransitionOperationMatrix, VectorState};
pub use walks::{WalkKind, WalkSpec};
