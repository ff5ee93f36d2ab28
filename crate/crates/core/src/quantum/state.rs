use crate::error::QuantumError;

use super::matrix::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    /// Hermitian, PSD, unit trace.
    Normalized,
    /// Hermitian, PSD, trace below one (including the zero state).
    SubNormalized,
    Invalid,
}

/// Classifies a square matrix as a (sub-)normalized quantum state.
pub fn check_state(m: &CMatrix, tol: f64) -> Result<StateClass, QuantumError> {
    if !m.is_square() {
        return Err(QuantumError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_hermitian(tol) || m.min_eigenvalue() < -tol {
        return Ok(StateClass::Invalid);
    }
    let tr = m.trace().re;
    Ok(if (tr - 1.0).abs() <= tol {
        StateClass::Normalized
    } else if tr >= -tol && tr < 1.0 {
        StateClass::SubNormalized
    } else {
        StateClass::Invalid
    })
}

/// Hermitian positive semi-definite matrix with trace at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct SubNormalizedState(CMatrix);

impl SubNormalizedState {
    pub fn new(m: CMatrix, tol: f64) -> Result<Self, QuantumError> {
        match check_state(&m, tol)? {
            StateClass::Invalid => Err(QuantumError::InvalidState {
                hermitian: m.is_hermitian(tol),
                min_eigenvalue: m.min_eigenvalue(),
                trace: m.trace().re,
            }),
            _ => Ok(Self(m)),
        }
    }

    /// Wraps a matrix produced by a CP map from a valid state.
    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn zero(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    /// `1/d · 1`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(CMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// `|ψ⟩⟨ψ|` for a unit ket.
    pub fn pure(ket: &CMatrix) -> Result<Self, QuantumError> {
        if ket.cols() != 1 {
            return Err(QuantumError::NotAKet {
                rows: ket.rows(),
                cols: ket.cols(),
            });
        }
        let norm = ket.inner(ket).re.sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(QuantumError::NotNormalized { norm });
        }
        Ok(Self(CMatrix::outer(ket)))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        assert!((0.0..=1.0).contains(&factor));
        Self(self.0.scale(C64::new(factor, 0.0)))
    }
}
