//! Transition Operation Matrices.
//!
//! Index convention: `cell(i, j)` is the operation applied to the internal
//! state when the walker moves **from vertex `j` to vertex `i`**, so the
//! trace-preservation condition is a condition on columns:
//! `Σ_i Σ_k E_{k,ij}† E_{k,ij} = 1` for every source `j`.

mod kernel;
mod lift;

pub use kernel::CompiledTom;
pub(crate) use kernel::project_block;
pub use lift::{GlobalState, LiftedChannel};

use crate::error::TomError;
use crate::quantum::{
    check_state, classify_completeness, CMatrix, KrausMap, OperationClass, StateClass, SubNormalizedState, ViewOperator,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TomClass {
    /// Every column sums to a trace-preserving map.
    Valid,
    /// Every column sums to a trace non-increasing map.
    SubTom,
    Invalid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionOperationMatrix {
    n: usize,
    dim: usize,
    /// Row-major `n × n`; `cells[i * n + j]` is the move `j → i`.
    cells: Vec<KrausMap>,
}

impl TransitionOperationMatrix {
    pub fn new(n: usize, dim: usize, cells: Vec<KrausMap>) -> Result<Self, TomError> {
        if cells.len() != n * n {
            return Err(TomError::GridSize {
                expected: n * n,
                found: cells.len(),
            });
        }
        for (idx, cell) in cells.iter().enumerate() {
            if cell.dim() != dim {
                return Err(TomError::CellDimension {
                    row: idx / n,
                    col: idx % n,
                    expected: dim,
                    found: cell.dim(),
                });
            }
        }
        Ok(Self { n, dim, cells })
    }

    /// Builds the grid from `f(i, j)`, the operation for the move `j → i`.
    pub fn from_fn<F>(n: usize, dim: usize, mut f: F) -> Result<Self, TomError>
    where
        F: FnMut(usize, usize) -> KrausMap,
    {
        let mut cells = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                cells.push(f(i, j));
            }
        }
        Self::new(n, dim, cells)
    }

    /// Diagonal TOM with identity operations.
    pub fn identity(n: usize, dim: usize) -> Self {
        Self::from_fn(n, dim, |i, j| {
            if i == j {
                KrausMap::identity(dim)
            } else {
                KrausMap::zero(dim)
            }
        })
        .expect("identity grid is well formed")
    }

    /// Rescales arbitrary CP cells so that every column becomes trace
    /// preserving: each Kraus operator of column `j` is right-multiplied by
    /// `S_j^{-1/2}`, where `S_j` is the column's completeness sum.
    pub fn normalize_columns(n: usize, dim: usize, cells: Vec<KrausMap>) -> Result<Self, TomError> {
        let raw = Self::new(n, dim, cells)?;
        let mut cells = raw.cells;
        for j in 0..n {
            let mut sum = CMatrix::zeros(dim, dim);
            for i in 0..n {
                sum += cells[i * n + j].completeness_sum();
            }
            let r = sum
                .hermitian_inverse_sqrt(1e-12)
                .ok_or(TomError::DegenerateColumn { column: j })?;
            for i in 0..n {
                let cell = &cells[i * n + j];
                let kraus = cell.kraus().iter().map(|k| k * &r).collect();
                cells[i * n + j] = KrausMap::new(dim, kraus)?;
            }
        }
        Ok(Self { n, dim, cells })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn internal_dim(&self) -> usize {
        self.dim
    }

    /// Operation for the move `j → i`.
    pub fn cell(&self, i: usize, j: usize) -> &KrausMap {
        &self.cells[i * self.n + j]
    }

    pub fn cells(&self) -> &[KrausMap] {
        &self.cells
    }

    /// Total number of Kraus operators over the grid.
    pub fn kraus_count(&self) -> usize {
        self.cells.iter().map(KrausMap::len).sum()
    }

    /// `Σ_i Σ_k E_{k,ij}† E_{k,ij}` for source column `j`.
    pub fn column_sum(&self, j: usize) -> CMatrix {
        let mut sum = CMatrix::zeros(self.dim, self.dim);
        for i in 0..self.n {
            sum += self.cell(i, j).completeness_sum();
        }
        sum
    }

    /// The pooled column map `Φ_j`.
    pub fn column_map(&self, j: usize) -> KrausMap {
        KrausMap::pooled(self.dim, (0..self.n).map(|i| self.cell(i, j)))
            .expect("cells share the internal dimension")
    }

    /// Max-abs deviation of column `j`'s completeness sum from the identity.
    pub fn column_deviation(&self, j: usize) -> f64 {
        self.column_sum(j).max_abs_diff(&CMatrix::identity(self.dim))
    }

    pub fn max_column_deviation(&self) -> f64 {
        (0..self.n)
            .map(|j| self.column_deviation(j))
            .fold(0.0, f64::max)
    }

    pub fn column_class(&self, j: usize, tol: f64) -> OperationClass {
        classify_completeness(&self.column_sum(j), tol)
    }

    pub fn validate(&self, tol: f64) -> TomClass {
        let mut class = TomClass::Valid;
        for j in 0..self.n {
            match self.column_class(j, tol) {
                OperationClass::TracePreserving => {}
                OperationClass::TraceNonIncreasing => class = TomClass::SubTom,
                OperationClass::Invalid => return TomClass::Invalid,
            }
        }
        class
    }

    /// Errors unless every column is trace preserving within `tol`.
    pub fn ensure_valid(&self, tol: f64) -> Result<(), TomError> {
        for j in 0..self.n {
            if self.column_class(j, tol) != OperationClass::TracePreserving {
                return Err(TomError::NotTracePreserving {
                    column: j,
                    deviation: self.column_deviation(j),
                });
            }
        }
        Ok(())
    }

    fn check_state_shape(&self, a: &VectorState) -> Result<(), TomError> {
        if a.n_vertices() != self.n {
            return Err(TomError::Mismatch(format!(
                "vector state has {} components, TOM has {} vertices",
                a.n_vertices(),
                self.n
            )));
        }
        if a.dim() != self.dim {
            return Err(TomError::Mismatch(format!(
                "vector state dimension {} differs from internal dimension {}",
                a.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    /// One step of the quantum Markov chain: `α'_i = Σ_j cell(i, j)(α_j)`.
    pub fn apply(&self, a: &VectorState) -> Result<VectorState, TomError> {
        self.check_state_shape(a)?;
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut acc = CMatrix::zeros(self.dim, self.dim);
            for j in 0..self.n {
                let cell = self.cell(i, j);
                if !cell.is_zero() {
                    acc += &cell.apply_matrix(a.component(j))?;
                }
            }
            out.push(acc);
        }
        Ok(VectorState { components: out })
    }

    /// Product `G = self · f` with `G_ij = Σ_k self_ik ∘ f_kj`.
    pub fn compose(&self, f: &Self) -> Result<Self, TomError> {
        if self.n != f.n || self.dim != f.dim {
            return Err(TomError::Mismatch(format!(
                "cannot compose {}x{} (dim {}) with {}x{} (dim {})",
                self.n, self.n, self.dim, f.n, f.n, f.dim
            )));
        }
        let mut cells = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut kraus = Vec::new();
                for k in 0..self.n {
                    let e = self.cell(i, k);
                    let g = f.cell(k, j);
                    for a in e.kraus() {
                        for b in g.kraus() {
                            kraus.push(a * b);
                        }
                    }
                }
                cells.push(KrausMap::new(self.dim, kraus)?);
            }
        }
        Self::new(self.n, self.dim, cells)
    }

    /// Monitored sub-TOM `F = E·P`, where `P` is the identity on every
    /// vertex except `target`, at which it applies `Π_v^⊥ · Π_v^⊥`.
    pub fn monitored(&self, target: usize, view: &ViewOperator) -> Result<Self, TomError> {
        if target >= self.n {
            return Err(TomError::VertexOutOfRange {
                index: target,
                n: self.n,
            });
        }
        if view.dim() != self.dim {
            return Err(TomError::Mismatch(format!(
                "view acts on dimension {}, TOM on {}",
                view.dim(),
                self.dim
            )));
        }
        let mut cells = self.cells.clone();
        for i in 0..self.n {
            let cell = &self.cells[i * self.n + target];
            let kraus = cell.kraus().iter().map(|k| k * view.complement()).collect();
            cells[i * self.n + target] = KrausMap::new(self.dim, kraus)?;
        }
        Self::new(self.n, self.dim, cells)
    }

    /// Flattened form for long iterated evolutions.
    pub fn compile(&self) -> CompiledTom {
        CompiledTom::new(self)
    }

    /// Channel on the joint position-internal space; see [`LiftedChannel`].
    pub fn lift(&self, tol: f64) -> Result<LiftedChannel, TomError> {
        self.ensure_valid(tol)?;
        Ok(LiftedChannel::from_tom(self))
    }
}

/// Column of per-vertex sub-normalized states `α = (α_0, …, α_{N−1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorState {
    components: Vec<CMatrix>,
}

impl VectorState {
    /// Validates a sub-vector state: every component and their sum are
    /// sub-normalized states.
    pub fn new(components: Vec<CMatrix>, tol: f64) -> Result<Self, TomError> {
        let Some(first) = components.first() else {
            return Err(TomError::Mismatch("vector state needs at least one vertex".into()));
        };
        let dim = first.rows();
        let mut sum = CMatrix::zeros(dim, dim);
        for c in &components {
            if c.rows() != dim || !c.is_square() {
                return Err(TomError::Mismatch(format!(
                    "component of shape {}x{} in a dimension-{dim} vector state",
                    c.rows(),
                    c.cols()
                )));
            }
            SubNormalizedState::new(c.clone(), tol)?;
            sum += c;
        }
        SubNormalizedState::new(sum, tol)?;
        Ok(Self { components })
    }

    /// `state` at `vertex`, zero elsewhere.
    pub fn localized(n: usize, vertex: usize, state: &SubNormalizedState) -> Result<Self, TomError> {
        if vertex >= n {
            return Err(TomError::VertexOutOfRange { index: vertex, n });
        }
        let d = state.dim();
        let mut components = vec![CMatrix::zeros(d, d); n];
        components[vertex] = state.matrix().clone();
        Ok(Self { components })
    }

    pub(crate) fn from_components_unchecked(components: Vec<CMatrix>) -> Self {
        Self { components }
    }

    pub fn n_vertices(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.components[0].rows()
    }

    pub fn component(&self, i: usize) -> &CMatrix {
        &self.components[i]
    }

    pub fn components(&self) -> &[CMatrix] {
        &self.components
    }

    /// Trace of each component.
    pub fn masses(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.trace().re).collect()
    }

    /// `Tr(Π_v α_i)` for each vertex.
    pub fn detections(&self, view: &ViewOperator) -> Vec<f64> {
        self.components.iter().map(|c| view.detect(c)).collect()
    }

    pub fn total_trace(&self) -> f64 {
        self.masses().iter().sum()
    }

    /// Whether the components sum to a normalized state within `tol`.
    pub fn is_full(&self, tol: f64) -> bool {
        let d = self.dim();
        let mut sum = CMatrix::zeros(d, d);
        for c in &self.components {
            sum += c;
        }
        check_state(&sum, tol).map_or(false, |c| c == StateClass::Normalized)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.components.len() != other.components.len() {
            return f64::INFINITY;
        }
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::operators::{basis_projector, pauli_x};
    use crate::quantum::C64;

    fn classical_k4() -> TransitionOperationMatrix {
        let w = (1.0f64 / 3.0).sqrt();
        TransitionOperationMatrix::from_fn(4, 1, |i, j| {
            if i == j {
                KrausMap::zero(1)
            } else {
                KrausMap::single(CMatrix::scalar(C64::new(w, 0.0)))
            }
        })
        .unwrap()
    }

    #[test]
    fn classical_k4_is_valid() {
        let t = classical_k4();
        assert_eq!(t.validate(1e-9), TomClass::Valid);
        assert!(t.max_column_deviation() < 1e-15);
    }

    #[test]
    fn deleting_a_cell_leaves_a_sub_tom() {
        let t = classical_k4();
        let mut cells = t.cells().to_vec();
        cells[1 * 4 + 0] = KrausMap::zero(1);
        let broken = TransitionOperationMatrix::new(4, 1, cells).unwrap();
        assert_eq!(broken.validate(1e-9), TomClass::SubTom);
        assert!((broken.column_sum(0).get(0, 0).re - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(broken.column_class(1, 1e-9), OperationClass::TracePreserving);
    }

    #[test]
    fn overweight_column_is_invalid() {
        let mut cells = classical_k4().cells().to_vec();
        cells[0] = KrausMap::identity(1);
        let t = TransitionOperationMatrix::new(4, 1, cells).unwrap();
        assert_eq!(t.validate(1e-9), TomClass::Invalid);
        assert!(t.ensure_valid(1e-9).is_err());
    }

    #[test]
    fn grid_shape_errors() {
        assert!(matches!(
            TransitionOperationMatrix::new(2, 1, vec![KrausMap::zero(1); 3]),
            Err(TomError::GridSize { .. })
        ));
        let mut cells = vec![KrausMap::zero(1); 4];
        cells[3] = KrausMap::zero(2);
        assert!(matches!(
            TransitionOperationMatrix::new(2, 1, cells),
            Err(TomError::CellDimension { row: 1, col: 1, .. })
        ));
    }

    #[test]
    fn classical_step_spreads_uniformly() {
        let t = classical_k4();
        let a = VectorState::localized(4, 0, &SubNormalizedState::maximally_mixed(1)).unwrap();
        let b = t.apply(&a).unwrap();
        let m = b.masses();
        assert!(m[0].abs() < 1e-15);
        for v in 1..4 {
            assert!((m[v] - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_tom_is_a_fixed_point() {
        let t = TransitionOperationMatrix::identity(3, 2);
        let a = VectorState::new(
            vec![
                basis_projector(2, 0).scale_real(0.25),
                CMatrix::identity(2).scale_real(0.125),
                basis_projector(2, 1).scale_real(0.5),
            ],
            1e-10,
        )
        .unwrap();
        assert_eq!(t.apply(&a).unwrap(), a);
    }

    #[test]
    fn compose_with_identity_is_neutral() {
        let t = classical_k4();
        let id = TransitionOperationMatrix::identity(4, 1);
        let g = id.compose(&t).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!(g.cell(i, j).same_action(t.cell(i, j), 1e-15));
            }
        }
    }

    #[test]
    fn monitoring_with_zero_view_is_neutral() {
        let t = classical_k4();
        let f = t.monitored(2, &ViewOperator::zero(1)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!(f.cell(i, j).same_action(t.cell(i, j), 0.0));
            }
        }
    }

    #[test]
    fn monitoring_with_identity_view_absorbs() {
        let t = classical_k4();
        let f = t.monitored(2, &ViewOperator::identity(1)).unwrap();
        assert!(f.column_sum(2).max_abs() < 1e-15);
        assert_eq!(f.validate(1e-9), TomClass::SubTom);
        assert!(matches!(
            t.monitored(4, &ViewOperator::identity(1)),
            Err(TomError::VertexOutOfRange { .. })
        ));
        assert!(t.monitored(0, &ViewOperator::identity(2)).is_err());
    }

    #[test]
    fn vector_state_validation() {
        let over = vec![CMatrix::identity(1), CMatrix::identity(1)];
        assert!(VectorState::new(over, 1e-10).is_err());
        let ok = VectorState::new(
            vec![CMatrix::identity(1).scale_real(0.5), CMatrix::identity(1).scale_real(0.5)],
            1e-10,
        )
        .unwrap();
        assert!(ok.is_full(1e-10));
        assert!(VectorState::localized(2, 5, &SubNormalizedState::zero(1)).is_err());
    }

    #[test]
    fn apply_rejects_mismatched_state() {
        let t = TransitionOperationMatrix::from_fn(1, 2, |_, _| KrausMap::single(pauli_x())).unwrap();
        let wrong = VectorState::localized(2, 0, &SubNormalizedState::maximally_mixed(2)).unwrap();
        assert!(t.apply(&wrong).is_err());
    }
}
