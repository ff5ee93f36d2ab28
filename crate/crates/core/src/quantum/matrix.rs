//! Dense complex matrices sized for internal walker spaces (dimension 1 to ~16).
//!
//! Storage is row-major. Products and sums panic on shape mismatch, the same
//! way the arithmetic operators of most linear-algebra crates do; fallible
//! construction goes through [`CMatrix::from_vec`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::QuantumError;

/// Double-precision complex scalar.
pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, QuantumError> {
        if rows * cols != data.len() {
            return Err(QuantumError::EntryCount {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            assert_eq!(r.len(), n_cols, "ragged rows");
            data.extend(r.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self {
            rows: n_rows,
            cols: n_cols,
            data,
        }
    }

    /// Column vector (ket).
    pub fn column(entries: &[C64]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in entries.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn scalar(value: C64) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![value],
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * cols + j * other.cols + l] =
                            a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    /// `v v†` for a column vector `v`.
    pub fn outer(v: &Self) -> Self {
        assert_eq!(v.cols, 1, "outer product needs a column vector");
        v * &v.adjoint()
    }

    /// `⟨self|other⟩` for column vectors.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.cols, 1);
        assert_eq!(other.cols, 1);
        assert_eq!(self.rows, other.rows);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.data[i * self.cols + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute entry difference; `f64::INFINITY` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.data[i * m.ncols() + j] = m[(i, j)];
            }
        }
        out
    }

    /// Eigenvalues of the Hermitian part `(M + M†)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_square(), "eigenvalues of a non-square matrix");
        if self.rows == 0 {
            return Vec::new();
        }
        let h = (self + &self.adjoint()).scale_real(0.5);
        let mut values: Vec<f64> = h.to_nalgebra().symmetric_eigen().eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    /// `H^{-1/2}` for a Hermitian positive-definite matrix; `None` when the
    /// smallest eigenvalue is at or below `floor`.
    pub fn hermitian_inverse_sqrt(&self, floor: f64) -> Option<Self> {
        let h = (self + &self.adjoint()).scale_real(0.5);
        let eig = h.to_nalgebra().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| l <= floor) {
            return None;
        }
        let n = self.rows;
        let v = &eig.eigenvectors;
        let mut out = DMatrix::<C64>::zeros(n, n);
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let w = 1.0 / lambda.sqrt();
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
        }
        Some(Self::from_nalgebra(&out))
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: CMatrix) -> CMatrix {
        &self * &rhs
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for CMatrix {
    type Output = CMatrix;

    fn add(mut self, rhs: CMatrix) -> CMatrix {
        self += &rhs;
        self
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch in sum"
        );
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch in difference"
        );
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: CMatrix) -> CMatrix {
        &self - &rhs
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}

/// `out += K X K†` on flat row-major `d×d` buffers. `tmp` must hold `d*d`.
#[inline]
pub(crate) fn sandwich_acc(out: &mut [C64], k: &[C64], x: &[C64], tmp: &mut [C64], d: usize) {
    if d == 1 {
        out[0] += k[0] * x[0] * k[0].conj();
        return;
    }
    // tmp = K X
    for i in 0..d {
        for j in 0..d {
            let mut s = ZERO;
            for l in 0..d {
                s += k[i * d + l] * x[l * d + j];
            }
            tmp[i * d + j] = s;
        }
    }
    // out += tmp K†
    for i in 0..d {
        for j in 0..d {
            let mut s = ZERO;
            for l in 0..d {
                s += tmp[i * d + l] * k[j * d + l].conj();
            }
            out[i * d + j] += s;
        }
    }
}

/// `out += K† X K` on flat row-major `d×d` buffers.
#[inline]
pub(crate) fn adjoint_sandwich_acc(
    out: &mut [C64],
    k: &[C64],
    x: &[C64],
    tmp: &mut [C64],
    d: usize,
) {
    if d == 1 {
        out[0] += k[0].conj() * x[0] * k[0];
        return;
    }
    // tmp = X K
    for i in 0..d {
        for j in 0..d {
            let mut s = ZERO;
            for l in 0..d {
                s += x[i * d + l] * k[l * d + j];
            }
            tmp[i * d + j] = s;
        }
    }
    // out += K† tmp
    for i in 0..d {
        for j in 0..d {
            let mut s = ZERO;
            for l in 0..d {
                s += k[l * d + i].conj() * tmp[l * d + j];
            }
            out[i * d + j] += s;
        }
    }
}

/// `Re Tr(A B)` for flat `d×d` buffers.
#[inline]
pub(crate) fn trace_product_re(a: &[C64], b: &[C64], d: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..d {
        for l in 0..d {
            let x = a[i * d + l];
            let y = b[l * d + i];
            s += x.re * y.re - x.im * y.im;
        }
    }
    s
}
