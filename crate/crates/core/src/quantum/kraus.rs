use crate::error::QuantumError;

use super::matrix::CMatrix;
use super::state::SubNormalizedState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperationClass {
    /// `Σ E†E = 1`
    TracePreserving,
    /// `Σ E†E ≤ 1`
    TraceNonIncreasing,
    Invalid,
}

/// Completely positive map `ρ ↦ Σ_k E_k ρ E_k†` on square matrices of a fixed
/// dimension. An empty Kraus list is the zero operation.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    dim: usize,
    kraus: Vec<CMatrix>,
    completeness: CMatrix,
}

impl KrausMap {
    pub fn new(dim: usize, kraus: Vec<CMatrix>) -> Result<Self, QuantumError> {
        for k in &kraus {
            if !k.is_square() {
                return Err(QuantumError::NotSquare {
                    rows: k.rows(),
                    cols: k.cols(),
                });
            }
            if k.rows() != dim {
                return Err(QuantumError::DimensionMismatch {
                    expected: dim,
                    found: k.rows(),
                });
            }
        }
        let mut completeness = CMatrix::zeros(dim, dim);
        for k in &kraus {
            completeness += &(&k.adjoint() * k);
        }
        Ok(Self {
            dim,
            kraus,
            completeness,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            kraus: Vec::new(),
            completeness: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::single(CMatrix::identity(dim))
    }

    /// Rank-one operation `ρ ↦ K ρ K†`. Panics if `k` is not square.
    pub fn single(k: CMatrix) -> Self {
        let dim = k.rows();
        Self::new(dim, vec![k]).expect("single Kraus operator must be square")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_zero(&self) -> bool {
        self.kraus.is_empty()
    }

    /// Cached `Σ E_k† E_k`.
    pub fn completeness_sum(&self) -> &CMatrix {
        &self.completeness
    }

    /// `Σ E_k X E_k†` on an arbitrary square matrix.
    pub fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix, QuantumError> {
        if !x.is_square() {
            return Err(QuantumError::NotSquare {
                rows: x.rows(),
                cols: x.cols(),
            });
        }
        if x.rows() != self.dim {
            return Err(QuantumError::DimensionMismatch {
                expected: self.dim,
                found: x.rows(),
            });
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out += &(&(k * x) * &k.adjoint());
        }
        Ok(out)
    }

    /// Heisenberg-picture action `Σ E_k† X E_k`.
    pub fn apply_adjoint_matrix(&self, x: &CMatrix) -> Result<CMatrix, QuantumError> {
        if x.rows() != self.dim || !x.is_square() {
            return Err(QuantumError::DimensionMismatch {
                expected: self.dim,
                found: x.rows(),
            });
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out += &(&(&k.adjoint() * x) * k);
        }
        Ok(out)
    }

    /// Applies the map to a state. The result is only guaranteed to be
    /// sub-normalized when the map is trace non-increasing.
    pub fn apply(&self, state: &SubNormalizedState) -> Result<SubNormalizedState, QuantumError> {
        self.apply_matrix(state.matrix())
            .map(SubNormalizedState::new_unchecked)
    }

    pub fn classify(&self, tol: f64) -> OperationClass {
        classify_completeness(&self.completeness, tol)
    }

    /// `self ∘ other`, materialized as all Kraus products `A_a B_b`.
    pub fn compose(&self, other: &Self) -> Result<Self, QuantumError> {
        if self.dim != other.dim {
            return Err(QuantumError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut kraus = Vec::with_capacity(self.len() * other.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a * b);
            }
        }
        Self::new(self.dim, kraus)
    }

    /// Concatenates Kraus lists (the sum of the maps).
    pub fn pooled<'a, I>(dim: usize, maps: I) -> Result<Self, QuantumError>
    where
        I: IntoIterator<Item = &'a KrausMap>,
    {
        let mut kraus = Vec::new();
        for m in maps {
            if m.dim != dim {
                return Err(QuantumError::DimensionMismatch {
                    expected: dim,
                    found: m.dim,
                });
            }
            kraus.extend(m.kraus.iter().cloned());
        }
        Self::new(dim, kraus)
    }

    /// Superoperator equality checked on the matrix-unit basis.
    pub fn same_action(&self, other: &Self, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let d = self.dim;
        for a in 0..d {
            for b in 0..d {
                let mut unit = CMatrix::zeros(d, d);
                unit.set(a, b, super::ONE);
                let lhs = self.apply_matrix(&unit).expect("dimension checked");
                let rhs = other.apply_matrix(&unit).expect("dimension checked");
                if !lhs.approx_eq(&rhs, tol) {
                    return false;
                }
            }
        }
        true
    }
}

pub(crate) fn classify_completeness(sum: &CMatrix, tol: f64) -> OperationClass {
    let id = CMatrix::identity(sum.rows());
    if sum.approx_eq(&id, tol) {
        return OperationClass::TracePreserving;
    }
    let deficit = &id - sum;
    if deficit.is_hermitian(tol) && deficit.min_eigenvalue() >= -tol {
        OperationClass::TraceNonIncreasing
    } else {
        OperationClass::Invalid
    }
}
