//! Complex matrices and the quantum vocabulary used by the walks: states,
//! Kraus maps, view operators, measurements and the named operators.

mod kraus;
mod matrix;
mod measure;
pub mod operators;
mod state;

pub(crate) use kraus::classify_completeness;
pub use kraus::{KrausMap, OperationClass};
pub use matrix::{CMatrix, C64, ONE, ZERO};
pub(crate) use matrix::{adjoint_sandwich_acc, sandwich_acc, trace_product_re};
pub use measure::{Measurement, ViewOperator};
pub use state::{check_state, StateClass, SubNormalizedState};

/// Numerical tolerances for structural checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity and projector identities (max-abs entry).
    pub herm: f64,
    /// Eigenvalue floor and trace slack for states.
    pub psd: f64,
    /// Completeness sums of trace-preserving maps.
    pub tp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            psd: 1e-10,
            tp: 1e-9,
        }
    }
}
