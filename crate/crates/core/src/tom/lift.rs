//! Embedding of a TOM as one quantum channel on `H₁ ⊗ H₂`.
//!
//! Joint indices are position-major (`vertex * dim + internal`), so the
//! embedded vector state `Σ_j α_j ⊗ |j⟩⟨j|` is block diagonal with one
//! contiguous `dim × dim` block per vertex, and the lifted Kraus operator
//! `E ⊗ |i⟩⟨j|` is the single block `E` at block position `(i, j)`.

use crate::error::TomError;
use crate::quantum::{check_state, CMatrix, StateClass};

use super::{TransitionOperationMatrix, VectorState};

/// Block-diagonal joint state `ρ_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalState {
    n: usize,
    dim: usize,
    matrix: CMatrix,
}

impl GlobalState {
    /// Embeds a full vector state; fails if its total trace is not 1.
    pub fn embed(a: &VectorState, tol: f64) -> Result<Self, TomError> {
        let trace = a.total_trace();
        if (trace - 1.0).abs() > tol {
            return Err(TomError::NotFullVectorState { trace });
        }
        let n = a.n_vertices();
        let d = a.dim();
        let mut matrix = CMatrix::zeros(n * d, n * d);
        for (j, block) in a.components().iter().enumerate() {
            for r in 0..d {
                for c in 0..d {
                    matrix.set(j * d + r, j * d + c, block.get(r, c));
                }
            }
        }
        Ok(Self { n, dim: d, matrix })
    }

    /// Wraps a joint matrix, e.g. the output of [`LiftedChannel::apply`].
    pub fn from_matrix(n: usize, dim: usize, matrix: CMatrix) -> Result<Self, TomError> {
        if matrix.rows() != n * dim || !matrix.is_square() {
            return Err(TomError::Mismatch(format!(
                "joint matrix {}x{} does not match {n} vertices of dimension {dim}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { n, dim, matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                out.set(r, c, self.matrix.get(i * d + r, j * d + c));
            }
        }
        out
    }

    /// Largest entry outside the diagonal blocks.
    pub fn off_block_max(&self) -> f64 {
        let d = self.dim;
        let mut m: f64 = 0.0;
        for r in 0..self.n * d {
            for c in 0..self.n * d {
                if r / d != c / d {
                    m = m.max(self.matrix.get(r, c).norm());
                }
            }
        }
        m
    }

    /// Diagonal blocks as a vector state.
    pub fn to_vector_state(&self) -> VectorState {
        VectorState::from_components_unchecked((0..self.n).map(|j| self.block(j, j)).collect())
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.off_block_max() <= 1e-12
            && check_state(&self.matrix, tol).map_or(false, |c| c != StateClass::Invalid)
    }
}

/// Channel with Kraus operators `E_{k,ij} ⊗ |i⟩⟨j|`.
#[derive(Debug, Clone)]
pub struct LiftedChannel {
    n: usize,
    dim: usize,
    kraus: Vec<CMatrix>,
}

impl LiftedChannel {
    pub(super) fn from_tom(t: &TransitionOperationMatrix) -> Self {
        let n = t.n_vertices();
        let d = t.internal_dim();
        let mut kraus = Vec::with_capacity(t.kraus_count());
        for i in 0..n {
            for j in 0..n {
                for e in t.cell(i, j).kraus() {
                    let mut big = CMatrix::zeros(n * d, n * d);
                    for r in 0..d {
                        for c in 0..d {
                            big.set(i * d + r, j * d + c, e.get(r, c));
                        }
                    }
                    kraus.push(big);
                }
            }
        }
        Self { n, dim: d, kraus }
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn joint_dim(&self) -> usize {
        self.n * self.dim
    }

    /// `Σ Ê† Ê`.
    pub fn completeness_sum(&self) -> CMatrix {
        let m = self.joint_dim();
        let mut sum = CMatrix::zeros(m, m);
        for k in &self.kraus {
            sum += &(&k.adjoint() * k);
        }
        sum
    }

    pub fn completeness_deviation(&self) -> f64 {
        self.completeness_sum()
            .max_abs_diff(&CMatrix::identity(self.joint_dim()))
    }

    pub fn apply(&self, rho: &GlobalState) -> Result<GlobalState, TomError> {
        if rho.n != self.n || rho.dim != self.dim {
            return Err(TomError::Mismatch("joint state shape differs from channel".into()));
        }
        let m = self.joint_dim();
        let mut out = CMatrix::zeros(m, m);
        for k in &self.kraus {
            out += &(&(k * &rho.matrix) * &k.adjoint());
        }
        GlobalState::from_matrix(self.n, self.dim, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::operators::pauli_x;
    use crate::quantum::{KrausMap, SubNormalizedState, C64};

    #[test]
    fn single_vertex_unitary_lifts_to_itself() {
        let t = TransitionOperationMatrix::from_fn(1, 2, |_, _| KrausMap::single(pauli_x())).unwrap();
        let ch = t.lift(1e-9).unwrap();
        assert_eq!(ch.kraus().len(), 1);
        assert!(ch.kraus()[0].approx_eq(&pauli_x(), 0.0));
    }

    #[test]
    fn embed_places_blocks_on_the_diagonal() {
        let rho = SubNormalizedState::maximally_mixed(2);
        let a = VectorState::localized(2, 0, &rho).unwrap();
        let g = GlobalState::embed(&a, 1e-10).unwrap();
        assert!(g.block(0, 0).approx_eq(rho.matrix(), 0.0));
        assert!(g.block(1, 1).max_abs() == 0.0);
        assert!(g.is_valid(1e-10));
    }

    #[test]
    fn uniform_classical_vector_embeds_as_quarter_diagonal() {
        let comps = vec![CMatrix::scalar(C64::new(0.25, 0.0)); 4];
        let a = VectorState::new(comps, 1e-10).unwrap();
        let g = GlobalState::embed(&a, 1e-10).unwrap();
        assert!(g
            .matrix()
            .approx_eq(&CMatrix::identity(4).scale_real(0.25), 0.0));
    }

    #[test]
    fn embed_rejects_partial_mass() {
        let half = SubNormalizedState::maximally_mixed(1).scaled(0.5);
        let a = VectorState::localized(3, 1, &half).unwrap();
        assert!(matches!(
            GlobalState::embed(&a, 1e-10),
            Err(TomError::NotFullVectorState { .. })
        ));
    }

    #[test]
    fn lift_requires_valid_tom() {
        let t = TransitionOperationMatrix::from_fn(2, 1, |_, _| KrausMap::zero(1)).unwrap();
        assert!(t.lift(1e-9).is_err());
    }
}
