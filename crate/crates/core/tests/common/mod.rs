#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tomwalk::quantum::{CMatrix, KrausMap, C64};
use tomwalk::{TransitionOperationMatrix, VectorState};

pub fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let data = (0..d * d)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    CMatrix::from_vec(d, d, data).unwrap()
}

/// Random TOM: each cell gets 0..=2 Gaussian-ish Kraus operators, every
/// column at least one, then columns are normalized.
pub fn random_tom(rng: &mut ChaCha8Rng, n: usize, d: usize) -> TransitionOperationMatrix {
    let mut cells = vec![KrausMap::zero(d); n * n];
    for j in 0..n {
        let forced = rng.random_range(0..n);
        for i in 0..n {
            let mut count = rng.random_range(0..=2usize);
            if i == forced && count == 0 {
                count = 1;
            }
            let kraus = (0..count).map(|_| random_matrix(rng, d)).collect();
            cells[i * n + j] = KrausMap::new(d, kraus).unwrap();
        }
    }
    TransitionOperationMatrix::normalize_columns(n, d, cells).unwrap()
}

/// Random full vector state with blocks `G G†` rescaled to total trace 1.
pub fn random_vector_state(rng: &mut ChaCha8Rng, n: usize, d: usize) -> VectorState {
    let blocks: Vec<CMatrix> = (0..n)
        .map(|_| {
            let g = random_matrix(rng, d);
            let w = if rng.random_bool(0.3) { 0.0 } else { 1.0 };
            (&g * &g.adjoint()).scale_real(w)
        })
        .collect();
    let total: f64 = blocks.iter().map(|b| b.trace().re).sum();
    let blocks = if total > 0.0 {
        blocks.into_iter().map(|b| b.scale_real(1.0 / total)).collect()
    } else {
        let mut b = vec![CMatrix::zeros(d, d); n];
        b[0] = CMatrix::identity(d).scale_real(1.0 / d as f64);
        b
    };
    VectorState::new(blocks, 1e-10).unwrap()
}
