//! Exact passage times of the homogeneous random walk.

use nalgebra::{DMatrix, DVector};

use crate::apollonian::ApollonianNetwork;
use crate::error::{PassageError, TomError};

/// Mean first passage times into `target` from every vertex, from the
/// linear system `T_k = 1 + Σ_{m≠target} P_km T_m`. Entry `target` holds the
/// mean return time `1 + Σ_m P_{target,m} T_m`.
pub fn classical_mfpt_column(net: &ApollonianNetwork, target: usize) -> Result<Vec<f64>, PassageError> {
    let n = net.n_vertices();
    if target >= n {
        return Err(TomError::VertexOutOfRange { index: target, n }.into());
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != target).collect();
    let pos = |v: usize| if v < target { v } else { v - 1 };
    let m = others.len();
    let mut a = DMatrix::<f64>::identity(m, m);
    for (r, &k) in others.iter().enumerate() {
        let p = 1.0 / net.degree(k) as f64;
        for &nb in net.neighbors(k) {
            if nb != target {
                a[(r, pos(nb))] -= p;
            }
        }
    }
    let t = a
        .lu()
        .solve(&DVector::from_element(m, 1.0))
        .ok_or(PassageError::Singular { target })?;
    let mut out = vec![0.0; n];
    for (r, &k) in others.iter().enumerate() {
        out[k] = t[r];
    }
    let p = 1.0 / net.degree(target) as f64;
    out[target] = 1.0
        + net
            .neighbors(target)
            .iter()
            .map(|&nb| p * out[nb])
            .sum::<f64>();
    Ok(out)
}

pub fn classical_mfpt_exact(net: &ApollonianNetwork, source: usize, target: usize) -> Result<f64, PassageError> {
    let n = net.n_vertices();
    if source >= n {
        return Err(TomError::VertexOutOfRange { index: source, n }.into());
    }
    Ok(classical_mfpt_column(net, target)?[source])
}

/// Row `i`, column `j`: mean passage time from `i` to `j`; diagonal holds
/// the return times.
pub fn classical_mfpt_matrix(net: &ApollonianNetwork) -> Result<Vec<Vec<f64>>, PassageError> {
    let n = net.n_vertices();
    let columns = (0..n)
        .map(|j| classical_mfpt_column(net, j))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((0..n).map(|i| columns.iter().map(|c| c[i]).collect()).collect())
}

/// Mean return time `Σ_m d_m / d_i`.
pub fn classical_art_formula(net: &ApollonianNetwork, vertex: usize) -> f64 {
    net.total_degree() as f64 / net.degree(vertex) as f64
}
