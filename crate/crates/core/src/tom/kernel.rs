//! Flat-buffer stepping used by long evolutions.
//!
//! A vector state is stored as `n` consecutive row-major `dim × dim` blocks.

use crate::quantum::{adjoint_sandwich_acc, sandwich_acc, CMatrix, C64, ZERO};

use super::{TransitionOperationMatrix, VectorState};

#[derive(Debug, Clone, Copy)]
struct Entry {
    row: usize,
    kraus_start: usize,
    kraus_len: usize,
}

/// Column-sparse copy of a TOM with all Kraus operators in one buffer.
#[derive(Debug, Clone)]
pub struct CompiledTom {
    n: usize,
    dim: usize,
    col_start: Vec<usize>,
    entries: Vec<Entry>,
    kraus: Vec<C64>,
}

impl CompiledTom {
    pub fn new(t: &TransitionOperationMatrix) -> Self {
        let n = t.n_vertices();
        let dim = t.internal_dim();
        let dd = dim * dim;
        let mut col_start = Vec::with_capacity(n + 1);
        let mut entries = Vec::new();
        let mut kraus = Vec::new();
        for j in 0..n {
            col_start.push(entries.len());
            for i in 0..n {
                let cell = t.cell(i, j);
                if cell.is_zero() {
                    continue;
                }
                entries.push(Entry {
                    row: i,
                    kraus_start: kraus.len() / dd,
                    kraus_len: cell.len(),
                });
                for k in cell.kraus() {
                    kraus.extend_from_slice(k.as_slice());
                }
            }
        }
        col_start.push(entries.len());
        Self {
            n,
            dim,
            col_start,
            entries,
            kraus,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn internal_dim(&self) -> usize {
        self.dim
    }

    /// Length of a flat state buffer.
    pub fn state_len(&self) -> usize {
        self.n * self.dim * self.dim
    }

    pub fn flatten(&self, a: &VectorState) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.state_len());
        for c in a.components() {
            out.extend_from_slice(c.as_slice());
        }
        out
    }

    pub fn unflatten(&self, buf: &[C64]) -> VectorState {
        let dd = self.dim * self.dim;
        VectorState::from_components_unchecked(
            buf.chunks(dd)
                .map(|c| CMatrix::from_vec(self.dim, self.dim, c.to_vec()).expect("block size"))
                .collect(),
        )
    }

    /// `dst = E(src)` (Schrödinger picture).
    pub fn forward(&self, src: &[C64], dst: &mut [C64]) {
        let d = self.dim;
        let dd = d * d;
        dst.fill(ZERO);
        let mut tmp = vec![ZERO; dd];
        for j in 0..self.n {
            let x = &src[j * dd..(j + 1) * dd];
            if x.iter().all(|z| *z == ZERO) {
                continue;
            }
            for e in &self.entries[self.col_start[j]..self.col_start[j + 1]] {
                let out = &mut dst[e.row * dd..(e.row + 1) * dd];
                for k in e.kraus_start..e.kraus_start + e.kraus_len {
                    sandwich_acc(out, &self.kraus[k * dd..(k + 1) * dd], x, &mut tmp, d);
                }
            }
        }
    }

    /// `dst = E†(src)` (Heisenberg picture): `dst_j = Σ_i Σ_k E† src_i E`.
    pub fn adjoint(&self, src: &[C64], dst: &mut [C64]) {
        let d = self.dim;
        let dd = d * d;
        dst.fill(ZERO);
        let mut tmp = vec![ZERO; dd];
        for j in 0..self.n {
            let out = &mut dst[j * dd..(j + 1) * dd];
            for e in &self.entries[self.col_start[j]..self.col_start[j + 1]] {
                let y = &src[e.row * dd..(e.row + 1) * dd];
                for k in e.kraus_start..e.kraus_start + e.kraus_len {
                    adjoint_sandwich_acc(out, &self.kraus[k * dd..(k + 1) * dd], y, &mut tmp, d);
                }
            }
        }
    }
}

/// In-place `X ← P X P` on one `d×d` block, `P` Hermitian.
pub(crate) fn project_block(block: &mut [C64], p: &[C64], d: usize) {
    let mut out = vec![ZERO; d * d];
    let mut tmp = vec![ZERO; d * d];
    sandwich_acc(&mut out, p, block, &mut tmp, d);
    block.copy_from_slice(&out);
}
