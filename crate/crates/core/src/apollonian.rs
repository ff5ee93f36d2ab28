//! Deterministic Apollonian networks.
//!
//! Generation 0 is the triangle `{0, 1, 2}`. Each later generation inserts one
//! vertex into every triangle created by the previous generation and joins it
//! to the three corners. New vertices are numbered in the order their host
//! triangles were created.
//!
//! Splitting the root triangle `(a, b, c)` with the centre `ν` yields
//! `(a, b, ν), (b, c, ν), (a, c, ν)`; every later split of `(a, b, c)` yields
//! `(a, b, ν), (a, ν, c), (b, ν, c)`. The corner order of each host triangle
//! is recorded and drives edge-label assignment in the walk builders.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::NetworkError;

pub const MAX_GENERATION: usize = 12;

/// Vertex count of a generation-`g` network: `3 + (3^g − 1)/2`.
pub fn vertex_count(g: usize) -> usize {
    3 + (3usize.pow(g as u32) - 1) / 2
}

/// Edge count of a generation-`g` network.
pub fn edge_count(g: usize) -> usize {
    if g == 0 {
        3
    } else {
        3 * (vertex_count(g) - 2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApollonianNetwork {
    generation: usize,
    adjacency: Vec<Vec<usize>>,
    vertex_generation: Vec<usize>,
    host: Vec<Option<[usize; 3]>>,
}

impl ApollonianNetwork {
    pub fn generate(g: usize) -> Result<Self, NetworkError> {
        if g > MAX_GENERATION {
            return Err(NetworkError::GenerationTooLarge {
                requested: g,
                max: MAX_GENERATION,
            });
        }
        let n = vertex_count(g);
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut vertex_generation = vec![0; n];
        let mut host = vec![None; n];
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }

        let mut triangles = vec![[0usize, 1, 2]];
        let mut next_id = 3;
        for gen in 1..=g {
            let mut children = Vec::with_capacity(3 * triangles.len());
            for tri in &triangles {
                let v = next_id;
                next_id += 1;
                vertex_generation[v] = gen;
                host[v] = Some(*tri);
                for &corner in tri {
                    adjacency[v].push(corner);
                    adjacency[corner].push(v);
                }
                let [a, b, c] = *tri;
                if gen == 1 {
                    children.extend([[a, b, v], [b, c, v], [a, c, v]]);
                } else {
                    children.extend([[a, b, v], [a, v, c], [b, v, c]]);
                }
            }
            triangles = children;
        }
        debug_assert_eq!(next_id, n);
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(Self {
            generation: g,
            adjacency,
            vertex_generation,
            host,
        })
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn n_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn total_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Generation in which `v` was created.
    pub fn vertex_generation(&self, v: usize) -> usize {
        self.vertex_generation[v]
    }

    pub fn vertex_generations(&self) -> &[usize] {
        &self.vertex_generation
    }

    /// Ordered corners of the triangle `v` was inserted into; `None` for the
    /// generation-0 corners.
    pub fn host_triangle(&self, v: usize) -> Option<[usize; 3]> {
        self.host[v]
    }

    /// Vertex count per degree.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for nbrs in &self.adjacency {
            *h.entry(nbrs.len()).or_insert(0) += 1;
        }
        h
    }

    /// `V_d`, ascending.
    pub fn vertices_with_degree(&self, d: usize) -> Vec<usize> {
        (0..self.n_vertices()).filter(|&v| self.degree(v) == d).collect()
    }

    /// Undirected edges `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n_edges());
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn class_partition(&self) -> ClassPartition {
        ClassPartition::from_neighbor_generations(&self.adjacency, &self.vertex_generation)
    }
}

/// Partition of vertices by the set of generations among their neighbours.
///
/// Class ids are ordered by the smallest generation among the members, then
/// by the signature compared as an ascending sequence. On the generation-3
/// network this yields: 0 corners `{0,1,2,3}`, 1 centre `{0,2,3}`,
/// 2 generation-2 vertices `{0,1,3}`, 3 generation-3 vertices next to the
/// centre `{0,1,2}`, 4 the remaining generation-3 vertices `{0,2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    class_of: Vec<usize>,
    signatures: Vec<BTreeSet<usize>>,
}

impl ClassPartition {
    pub fn from_neighbor_generations(adjacency: &[Vec<usize>], generation: &[usize]) -> Self {
        let sig_of: Vec<BTreeSet<usize>> = adjacency
            .iter()
            .map(|nbrs| nbrs.iter().map(|&u| generation[u]).collect())
            .collect();
        let mut min_gen: BTreeMap<&BTreeSet<usize>, usize> = BTreeMap::new();
        for (v, sig) in sig_of.iter().enumerate() {
            let g = min_gen.entry(sig).or_insert(generation[v]);
            *g = (*g).min(generation[v]);
        }
        let mut order: Vec<(usize, Vec<usize>)> = min_gen
            .iter()
            .map(|(sig, &g)| (g, sig.iter().copied().collect()))
            .collect();
        order.sort();
        let signatures: Vec<BTreeSet<usize>> = order
            .into_iter()
            .map(|(_, s)| s.into_iter().collect())
            .collect();
        let class_of = sig_of
            .iter()
            .map(|sig| signatures.iter().position(|s| s == sig).expect("signature indexed"))
            .collect();
        Self {
            class_of,
            signatures,
        }
    }

    pub fn n_classes(&self) -> usize {
        self.signatures.len()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class_of
    }

    pub fn signature(&self, class: usize) -> &BTreeSet<usize> {
        &self.signatures[class]
    }

    pub fn members(&self, class: usize) -> Vec<usize> {
        (0..self.class_of.len())
            .filter(|&v| self.class_of[v] == class)
            .collect()
    }

    /// Class size per class id.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_classes()];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        sizes
    }
}
