//! Builders for the walk families studied on Apollonian networks.

use std::fmt;
use std::str::FromStr;

use crate::apollonian::ApollonianNetwork;
use crate::error::{TomError, WalkError};
use crate::quantum::operators::{
    basis_projector, pauli_x, pauli_z, qutrit_fourier_kets, qutrit_fourier_projectors, subspace_operators,
};
use crate::quantum::{CMatrix, KrausMap, SubNormalizedState, Tolerances};
use crate::tom::TransitionOperationMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WalkKind {
    Classical,
    Simple4,
    Case1,
    Case2,
    Case3,
}

impl WalkKind {
    pub const ALL: [WalkKind; 5] = [
        WalkKind::Classical,
        WalkKind::Simple4,
        WalkKind::Case1,
        WalkKind::Case2,
        WalkKind::Case3,
    ];

    pub fn key(self) -> &'static str {
        match self {
            WalkKind::Classical => "classical",
            WalkKind::Simple4 => "simple4",
            WalkKind::Case1 => "case1",
            WalkKind::Case2 => "case2",
            WalkKind::Case3 => "case3",
        }
    }

    /// Generation used when the caller does not pick one.
    pub fn default_generation(self) -> usize {
        match self {
            WalkKind::Classical | WalkKind::Case1 | WalkKind::Case3 => 3,
            WalkKind::Simple4 => 1,
            WalkKind::Case2 => 5,
        }
    }

    /// `Some(g)` when the walk only exists on one generation.
    pub fn fixed_generation(self) -> Option<usize> {
        match self {
            WalkKind::Simple4 => Some(1),
            WalkKind::Case3 => Some(3),
            _ => None,
        }
    }

    pub fn internal_dim(self) -> usize {
        match self {
            WalkKind::Classical => 1,
            WalkKind::Simple4 | WalkKind::Case1 => 3,
            WalkKind::Case2 => 2,
            WalkKind::Case3 => 4,
        }
    }

    pub fn build(self, generation: usize) -> Result<WalkSpec, WalkError> {
        match self {
            WalkKind::Classical => build_classical(&ApollonianNetwork::generate(generation)?),
            WalkKind::Simple4 => build_simple4(),
            WalkKind::Case1 => build_case1(&ApollonianNetwork::generate(generation)?),
            WalkKind::Case2 => build_case2(&ApollonianNetwork::generate(generation)?),
            WalkKind::Case3 => build_case3(),
        }
    }
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for WalkKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WalkKind::ALL
            .into_iter()
            .find(|k| k.key() == s)
            .ok_or_else(|| format!("unknown experiment '{s}'"))
    }
}

/// A network together with a validated TOM on it.
#[derive(Debug, Clone)]
pub struct WalkSpec {
    kind: WalkKind,
    network: ApollonianNetwork,
    tom: TransitionOperationMatrix,
    default_initial: SubNormalizedState,
}

impl WalkSpec {
    fn checked(
        kind: WalkKind,
        network: ApollonianNetwork,
        tom: TransitionOperationMatrix,
        default_initial: SubNormalizedState,
    ) -> Result<Self, WalkError> {
        debug_assert_eq!(tom.n_vertices(), network.n_vertices());
        tom.ensure_valid(Tolerances::default().tp)
            .map_err(|source| WalkError::InvalidTom {
                walk: kind.key(),
                source,
            })?;
        Ok(Self {
            kind,
            network,
            tom,
            default_initial,
        })
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn label(&self) -> &'static str {
        self.kind.key()
    }

    pub fn network(&self) -> &ApollonianNetwork {
        &self.network
    }

    pub fn tom(&self) -> &TransitionOperationMatrix {
        &self.tom
    }

    pub fn internal_dim(&self) -> usize {
        self.tom.internal_dim()
    }

    pub fn n_vertices(&self) -> usize {
        self.tom.n_vertices()
    }

    pub fn default_initial(&self) -> &SubNormalizedState {
        &self.default_initial
    }
}

fn scaled_identity(dim: usize, degree: usize) -> KrausMap {
    KrausMap::single(CMatrix::identity(dim).scale_real(1.0 / (degree as f64).sqrt()))
}

fn edge_tom<F>(net: &ApollonianNetwork, dim: usize, mut edge: F) -> Result<TransitionOperationMatrix, TomError>
where
    F: FnMut(usize, usize) -> KrausMap,
{
    TransitionOperationMatrix::from_fn(net.n_vertices(), dim, |i, j| {
        if net.are_adjacent(i, j) {
            edge(i, j)
        } else {
            KrausMap::zero(dim)
        }
    })
}

/// Homogeneous random walk: every move `j → i` along an edge has weight `1/d_j`.
pub fn build_classical(net: &ApollonianNetwork) -> Result<WalkSpec, WalkError> {
    let tom = edge_tom(net, 1, |_, j| scaled_identity(1, net.degree(j)))?;
    WalkSpec::checked(
        WalkKind::Classical,
        net.clone(),
        tom,
        SubNormalizedState::maximally_mixed(1),
    )
}

/// Qutrit walk on `K₄` with the rank-one cells built from the Fourier
/// projectors `A, B, C`. Outer vertices 0, 1, 2 rotate `A` one way and `B`
/// the other way; `C` shuttles between the rim and the centre 3.
pub fn build_simple4() -> Result<WalkSpec, WalkError> {
    let net = ApollonianNetwork::generate(1)?;
    let [a, b, c] = qutrit_fourier_projectors();
    let c3 = c.scale_real(1.0 / 3f64.sqrt());
    let kraus = |i: usize, j: usize| -> Option<CMatrix> {
        Some(match (i, j) {
            (1, 0) | (2, 1) | (0, 2) => a.clone(),
            (2, 0) | (0, 1) | (1, 2) => b.clone(),
            (3, 0) | (3, 1) | (3, 2) => c.clone(),
            (0, 3) => c3.clone(),
            (1, 3) => &b + &c3,
            (2, 3) => &a + &c3,
            _ => return None,
        })
    };
    let tom = TransitionOperationMatrix::from_fn(4, 3, |i, j| {
        kraus(i, j).map_or_else(|| KrausMap::zero(3), KrausMap::single)
    })?;
    let initial = SubNormalizedState::maximally_mixed(3);
    WalkSpec::checked(WalkKind::Simple4, net, tom, initial)
}

/// The projector pairs `𝒫₁, 𝒫₂, 𝒫₃` on `C³`.
pub fn projector_pair(which: usize) -> KrausMap {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (p, q) = [(0, 1), (1, 2), (2, 0)][which];
    KrausMap::new(
        3,
        vec![
            basis_projector(3, p).scale_real(s),
            basis_projector(3, q).scale_real(s),
        ],
    )
    .expect("qutrit projectors")
}

/// Identity-based qutrit walk where each edge leaving a last-generation
/// vertex carries a projector pair, chosen by the position of the target in
/// the source's host triangle.
pub fn build_case1(net: &ApollonianNetwork) -> Result<WalkSpec, WalkError> {
    let g = net.generation();
    if g == 0 {
        return Err(WalkError::Generation {
            walk: WalkKind::Case1.key(),
            min: 1,
            found: 0,
        });
    }
    let tom = edge_tom(net, 3, |i, j| {
        if net.vertex_generation(j) == g {
            let host = net.host_triangle(j).expect("interior vertex has a host");
            let slot = host.iter().position(|&c| c == i).expect("neighbours are host corners");
            projector_pair(slot)
        } else {
            scaled_identity(3, net.degree(j))
        }
    })?;
    let [x, _, _] = qutrit_fourier_kets();
    let initial = SubNormalizedState::pure(&x).expect("unit ket");
    WalkSpec::checked(WalkKind::Case1, net.clone(), tom, initial)
}

/// Qubit walk with `σx` on moves towards older vertices, `σz` on moves
/// towards younger ones and the identity between the three corners, each
/// scaled by `1/√d` of the source.
pub fn build_case2(net: &ApollonianNetwork) -> Result<WalkSpec, WalkError> {
    if net.generation() == 0 {
        return Err(WalkError::Generation {
            walk: WalkKind::Case2.key(),
            min: 1,
            found: 0,
        });
    }
    let (sx, sz) = (pauli_x(), pauli_z());
    let tom = edge_tom(net, 2, |i, j| {
        let scale = 1.0 / (net.degree(j) as f64).sqrt();
        let (gi, gj) = (net.vertex_generation(i), net.vertex_generation(j));
        let op = match gj.cmp(&gi) {
            std::cmp::Ordering::Greater => sx.scale_real(scale),
            std::cmp::Ordering::Less => sz.scale_real(scale),
            std::cmp::Ordering::Equal => CMatrix::identity(2).scale_real(scale),
        };
        KrausMap::single(op)
    })?;
    WalkSpec::checked(
        WalkKind::Case2,
        net.clone(),
        tom,
        SubNormalizedState::maximally_mixed(2),
    )
}

/// Kraus operators assigned to every move from class `from` to class `to`.
pub fn case3_assignment(from: usize, to: usize) -> Option<Vec<CMatrix>> {
    let ops = subspace_operators();
    let r = |m: &CMatrix, k: f64| m.scale_real(1.0 / k.sqrt());
    let out = match (from, to) {
        (0, 0) => vec![r(&ops.b_x, 8.0)],
        (0, 1) => vec![r(&ops.b_z, 4.0)],
        (0, 2) => vec![r(&ops.c_x, 4.0)],
        (0, 3) => vec![r(&ops.b_z, 8.0)],
        (0, 4) => vec![r(&ops.c_z, 4.0), r(&ops.b_x, 8.0)],
        (1, 0) => vec![r(&ops.c_z, 6.0)],
        (1, 2) => vec![r(&ops.c_z, 6.0)],
        (1, 3) => vec![r(&ops.b_z, 6.0)],
        (2, 0) => vec![r(&ops.c_z, 4.0)],
        (2, 1) => vec![r(&ops.b_x, 4.0)],
        (2, 3) => vec![r(&ops.b_x, 8.0)],
        (2, 4) => vec![r(&ops.b_z, 2.0), r(&ops.c_x, 2.0)],
        (3, 0) => vec![r(&ops.c_x, 2.0)],
        (3, 1) => vec![ops.b_x],
        (3, 2) => vec![r(&ops.c_x, 2.0)],
        (4, 0) => vec![r(&ops.b_x, 2.0)],
        (4, 2) => vec![ops.c_x],
        _ => return None,
    };
    Some(out)
}

/// Class-based walk on `C⁴` over an arbitrary class labelling of `net`.
/// Fails if an edge joins a class pair without an assignment or if a column
/// is not trace preserving.
pub fn build_case3_with_classes(net: &ApollonianNetwork, class_of: &[usize]) -> Result<WalkSpec, WalkError> {
    let n = net.n_vertices();
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            if !net.are_adjacent(i, j) {
                cells.push(KrausMap::zero(4));
                continue;
            }
            let (from, to) = (class_of[j], class_of[i]);
            let ops = case3_assignment(from, to).ok_or(WalkError::MissingAssignment { from, to })?;
            cells.push(KrausMap::new(4, ops).map_err(TomError::from)?);
        }
    }
    let tom = TransitionOperationMatrix::new(n, 4, cells)?;
    WalkSpec::checked(
        WalkKind::Case3,
        net.clone(),
        tom,
        SubNormalizedState::maximally_mixed(4),
    )
}

/// Case 3 on the generation-3 network with its neighbour-generation classes.
pub fn build_case3() -> Result<WalkSpec, WalkError> {
    let net = ApollonianNetwork::generate(3)?;
    let classes = net.class_partition();
    build_case3_with_classes(&net, classes.classes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tom::{TomClass, VectorState};

    #[test]
    fn all_builders_are_valid() {
        for kind in WalkKind::ALL {
            let spec = kind.build(kind.default_generation()).unwrap();
            assert_eq!(spec.tom().validate(1e-9), TomClass::Valid, "{kind}");
            assert!(spec.tom().max_column_deviation() < 1e-9, "{kind}");
        }
    }

    fn weight(spec: &WalkSpec, i: usize, j: usize) -> f64 {
        spec.tom().cell(i, j).completeness_sum().get(0, 0).re
    }

    #[test]
    fn classical_weights() {
        let k4 = build_classical(&ApollonianNetwork::generate(1).unwrap()).unwrap();
        for j in 0..4 {
            let weights: Vec<f64> = (0..4).map(|i| weight(&k4, i, j)).collect();
            let expected: Vec<f64> = (0..4).map(|i| if i == j { 0.0 } else { 1.0 / 3.0 }).collect();
            for (w, e) in weights.iter().zip(&expected) {
                assert!((w - e).abs() < 1e-15);
            }
        }
        let g3 = build_classical(&ApollonianNetwork::generate(3).unwrap()).unwrap();
        let centre: Vec<f64> = (0..16)
            .map(|i| weight(&g3, i, 3))
            .filter(|&w| w > 0.0)
            .collect();
        assert_eq!(centre.len(), 12);
        assert!(centre.iter().all(|w| (w - 1.0 / 12.0).abs() < 1e-15));
        let g0 = build_classical(&ApollonianNetwork::generate(0).unwrap()).unwrap();
        assert!((weight(&g0, 1, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn simple4_first_step_masses() {
        let spec = build_simple4().unwrap();
        let a0 = VectorState::localized(4, 3, spec.default_initial()).unwrap();
        let a1 = spec.tom().apply(&a0).unwrap();
        let expected = [1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0, 0.0];
        for (m, e) in a1.masses().iter().zip(expected) {
            assert!((m - e).abs() < 1e-12);
        }
    }

    #[test]
    fn case1_pairs_follow_host_order() {
        let spec = build_case1(&ApollonianNetwork::generate(3).unwrap()).unwrap();
        assert!(spec.tom().cell(0, 7).same_action(&projector_pair(0), 1e-12));
        assert!(spec.tom().cell(3, 8).same_action(&projector_pair(2), 1e-12));
        assert_eq!(spec.tom().cell(4, 0).len(), 1);
        assert!(matches!(
            build_case1(&ApollonianNetwork::generate(0).unwrap()),
            Err(WalkError::Generation { .. })
        ));
    }

    #[test]
    fn case2_orientation() {
        let spec = build_case2(&ApollonianNetwork::generate(1).unwrap()).unwrap();
        let expected = pauli_z().scale_real(1.0 / 3f64.sqrt());
        assert!(spec.tom().cell(3, 0).kraus()[0].approx_eq(&expected, 1e-15));
        let back = pauli_x().scale_real(1.0 / 3f64.sqrt());
        assert!(spec.tom().cell(0, 3).kraus()[0].approx_eq(&back, 1e-15));
        assert!(spec.tom().cell(1, 0).kraus()[0].approx_eq(&CMatrix::identity(2).scale_real(1.0 / 3f64.sqrt()), 1e-15));
    }

    #[test]
    fn case3_cells() {
        let spec = build_case3().unwrap();
        let ops = subspace_operators();
        // vertex 7 is class 4, vertex 4 is class 2
        assert!(spec.tom().cell(4, 7).kraus()[0].approx_eq(&ops.c_x, 1e-15));
        let centre_column: usize = (0..16).map(|i| spec.tom().cell(i, 3).len()).sum();
        assert_eq!(centre_column, 12);
    }

    #[test]
    fn walk_keys_round_trip() {
        for kind in WalkKind::ALL {
            assert_eq!(kind.key().parse::<WalkKind>().unwrap(), kind);
        }
        assert!("case4".parse::<WalkKind>().is_err());
    }
}
