//! Named operators and kets used by the walk constructions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::matrix::{CMatrix, C64, ONE, ZERO};

pub fn pauli_x() -> CMatrix {
    CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// Computational basis ket `|k⟩` in `C^dim`.
pub fn basis_ket(dim: usize, k: usize) -> CMatrix {
    let mut v = vec![ZERO; dim];
    v[k] = ONE;
    CMatrix::column(&v)
}

/// `|k⟩⟨k|` in `C^dim`.
pub fn basis_projector(dim: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m.set(k, k, ONE);
    m
}

/// `|+⟩ = (|0⟩ + |1⟩)/√2`.
pub fn ket_plus() -> CMatrix {
    CMatrix::column(&[C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)])
}

/// `|j⟩ = (|0⟩ + i|1⟩)/√2`.
pub fn ket_imag() -> CMatrix {
    CMatrix::column(&[C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2)])
}

/// Qutrit Fourier kets `|x⟩, |y⟩, |z⟩` with `ω = e^{2πi/3}`:
/// `|x⟩ = (1,1,1)/√3`, `|y⟩ = (1,ω,ω²)/√3`, `|z⟩ = (1,ω²,ω⁴)/√3`.
pub fn qutrit_fourier_kets() -> [CMatrix; 3] {
    let s = 1.0 / 3f64.sqrt();
    let omega = |k: u32| C64::from_polar(s, 2.0 * PI * f64::from(k) / 3.0);
    [
        CMatrix::column(&[omega(0), omega(0), omega(0)]),
        CMatrix::column(&[omega(0), omega(1), omega(2)]),
        CMatrix::column(&[omega(0), omega(2), omega(4)]),
    ]
}

/// Rank-one projectors `A = |x⟩⟨x|`, `B = |y⟩⟨y|`, `C = |z⟩⟨z|` on `C³`.
pub fn qutrit_fourier_projectors() -> [CMatrix; 3] {
    qutrit_fourier_kets().map(|k| CMatrix::outer(&k))
}

/// Complementary projector pairs on `C⁴` built from two-qubit parity.
#[derive(Debug, Clone)]
pub struct SubspaceOperators {
    /// `(1 − σx⊗σx)/2`
    pub b_x: CMatrix,
    /// `(1 + σx⊗σx)/2`
    pub c_x: CMatrix,
    /// `(1 − σz⊗σz)/2`
    pub b_z: CMatrix,
    /// `(1 + σz⊗σz)/2`
    pub c_z: CMatrix,
}

pub fn subspace_operators() -> SubspaceOperators {
    let id = CMatrix::identity(4);
    let xx = pauli_x().kron(&pauli_x());
    let zz = pauli_z().kron(&pauli_z());
    SubspaceOperators {
        b_x: (&id - &xx).scale_real(0.5),
        c_x: (&id + &xx).scale_real(0.5),
        b_z: (&id - &zz).scale_real(0.5),
        c_z: (&id + &zz).scale_real(0.5),
    }
}
