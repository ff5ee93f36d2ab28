use crate::error::QuantumError;

use super::matrix::CMatrix;

/// Projector `Π_v` deciding which part of the internal state counts as a
/// detection. Its complement `1 − Π_v` is cached.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewOperator {
    projector: CMatrix,
    complement: CMatrix,
}

impl ViewOperator {
    pub fn new(projector: CMatrix, tol: f64) -> Result<Self, QuantumError> {
        if !projector.is_square() {
            return Err(QuantumError::NotSquare {
                rows: projector.rows(),
                cols: projector.cols(),
            });
        }
        let deviation = projector
            .max_abs_diff(&projector.adjoint())
            .max(projector.max_abs_diff(&(&projector * &projector)));
        if deviation > tol {
            return Err(QuantumError::NotProjector { deviation });
        }
        let complement = &CMatrix::identity(projector.rows()) - &projector;
        Ok(Self {
            projector,
            complement,
        })
    }

    /// `|v⟩⟨v|` for a unit column vector.
    pub fn from_ket(v: &CMatrix) -> Result<Self, QuantumError> {
        if v.cols() != 1 {
            return Err(QuantumError::NotAKet {
                rows: v.rows(),
                cols: v.cols(),
            });
        }
        let norm = v.inner(v).re.sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(QuantumError::NotNormalized { norm });
        }
        Self::new(CMatrix::outer(v), 1e-10)
    }

    /// Trivial measurement: any presence at the vertex is a detection.
    pub fn identity(dim: usize) -> Self {
        Self {
            projector: CMatrix::identity(dim),
            complement: CMatrix::zeros(dim, dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            projector: CMatrix::zeros(dim, dim),
            complement: CMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.projector.rows()
    }

    pub fn projector(&self) -> &CMatrix {
        &self.projector
    }

    /// `Π_v^⊥ = 1 − Π_v`.
    pub fn complement(&self) -> &CMatrix {
        &self.complement
    }

    /// Detection probability `Tr(Π_v ρ)`.
    pub fn detect(&self, rho: &CMatrix) -> f64 {
        (&self.projector * rho).trace().re
    }

    /// The two-outcome measurement `{Π_v, Π_v^⊥}`.
    pub fn measurement(&self) -> Measurement {
        Measurement {
            operators: vec![self.projector.clone(), self.complement.clone()],
        }
    }
}

/// Square projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    operators: Vec<CMatrix>,
}

impl Measurement {
    pub fn new(operators: Vec<CMatrix>, tol: f64) -> Result<Self, QuantumError> {
        let Some(first) = operators.first() else {
            return Err(QuantumError::InvalidMeasurement("an empty outcome set"));
        };
        let dim = first.rows();
        let mut completeness = CMatrix::zeros(dim, dim);
        for a in &operators {
            if !a.is_square() || a.rows() != dim {
                return Err(QuantumError::DimensionMismatch {
                    expected: dim,
                    found: a.rows(),
                });
            }
            completeness += &(&a.adjoint() * a);
        }
        if !completeness.approx_eq(&CMatrix::identity(dim), tol) {
            return Err(QuantumError::InvalidMeasurement("the completeness relation"));
        }
        for (i, a) in operators.iter().enumerate() {
            for (j, b) in operators.iter().enumerate() {
                let prod = a * b;
                let want = if i == j { a.clone() } else { CMatrix::zeros(dim, dim) };
                if !prod.approx_eq(&want, tol) {
                    return Err(QuantumError::InvalidMeasurement("A_i A_j = δ_ij A_i"));
                }
            }
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// Outcome probabilities `Tr(A_i ρ A_i†)`.
    pub fn probabilities(&self, rho: &CMatrix) -> Vec<f64> {
        self.operators
            .iter()
            .map(|a| (&(a * rho) * &a.adjoint()).trace().re)
            .collect()
    }

    /// Post-measurement sub-normalized state for outcome `i`.
    pub fn post_state(&self, i: usize, rho: &CMatrix) -> CMatrix {
        let a = &self.operators[i];
        &(a * rho) * &a.adjoint()
    }
}
