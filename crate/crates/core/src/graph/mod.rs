//! Fiber graphs and their spectral and expansion quantities.
//!
//! A fiber graph joins `u` and `u + m` for every effective move `m`; moves
//! that leave the fiber become loops, so every node has the same degree.

mod boundary;
mod expansion;
mod loops;
mod moves;
mod spectral;

use std::collections::VecDeque;

pub use boundary::{boundary, boundary_slice_superset_size, expansion_upper_bound};
pub use expansion::{
    edge_expansion_exact, slem_lower_bound_from_expansion, EdgeExpansion, ExpansionBound,
    DEFAULT_SUBSET_LIMIT,
};
pub use loops::{loop_removed, LoopRemoved};
pub use moves::{MoveMode, MoveSet};
pub use spectral::{
    slem, symmetric_eigenvalues, transition_matrix, ExactTransition, Spectrum, TransitionMatrix,
};

use crate::error::{Error, Result};
use crate::fiber::Fiber;

/// Regular multigraph with per-node loop counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberGraph {
    /// Sorted `(neighbor, multiplicity)` lists without self entries.
    neighbors: Vec<Vec<(usize, u32)>>,
    loops: Vec<u32>,
    degree: usize,
}

impl FiberGraph {
    /// Applies every effective move at every node.
    pub fn build(fiber: &Fiber, moves: &MoveSet) -> Result<Self> {
        if moves.dim() != fiber.dim() {
            return Err(Error::Dimension {
                expected: fiber.dim(),
                got: moves.dim(),
            });
        }
        let effective = moves.effective();
        let n = fiber.len();
        let mut neighbors = Vec::with_capacity(n);
        let mut loops = Vec::with_capacity(n);
        let mut target = vec![0i64; fiber.dim()];
        for u in fiber.points() {
            let mut adj: Vec<(usize, u32)> = Vec::new();
            let mut l = 0u32;
            for m in &effective {
                if m.iter().all(|x| *x == 0) {
                    l += 1;
                    continue;
                }
                for ((t, a), b) in target.iter_mut().zip(u).zip(m) {
                    *t = a + b;
                }
                match fiber.index_of(&target) {
                    Some(v) => adj.push((v, 1)),
                    None => l += 1,
                }
            }
            neighbors.push(merge(adj));
            loops.push(l);
        }
        Ok(Self {
            neighbors,
            loops,
            degree: moves.degree(),
        })
    }

    /// A graph from explicit adjacency; checks regularity and symmetry.
    pub fn from_adjacency(
        neighbors: Vec<Vec<(usize, u32)>>,
        loops: Vec<u32>,
        degree: usize,
    ) -> Result<Self> {
        let n = neighbors.len();
        if loops.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: loops.len(),
            });
        }
        let neighbors: Vec<_> = neighbors.into_iter().map(merge).collect();
        let graph = Self {
            neighbors,
            loops,
            degree,
        };
        for v in 0..n {
            if graph.neighbors[v].iter().any(|&(w, _)| w >= n || w == v) {
                return Err(Error::InvalidParameter(format!(
                    "bad adjacency at node {v}"
                )));
            }
            if graph.node_degree(v) != degree {
                return Err(Error::InvalidParameter(format!(
                    "node {v} has degree {} instead of {degree}",
                    graph.node_degree(v)
                )));
            }
            for &(w, m) in &graph.neighbors[v] {
                if graph.multiplicity(w, v) != m {
                    return Err(Error::InvalidParameter(format!(
                        "asymmetric multiplicity between {v} and {w}"
                    )));
                }
            }
        }
        Ok(graph)
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Common degree, loops included.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.neighbors[v]
    }

    pub fn loops(&self) -> &[u32] {
        &self.loops
    }

    pub fn multiplicity(&self, v: usize, w: usize) -> u32 {
        self.neighbors[v]
            .binary_search_by_key(&w, |&(x, _)| x)
            .map_or(0, |i| self.neighbors[v][i].1)
    }

    /// Neighbor multiplicities plus loops at `v`.
    pub fn node_degree(&self, v: usize) -> usize {
        self.neighbors[v]
            .iter()
            .map(|&(_, m)| m as usize)
            .sum::<usize>()
            + self.loops[v] as usize
    }

    /// Number of non-loop edges, counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.neighbors
            .iter()
            .flatten()
            .map(|&(_, m)| m as usize)
            .sum::<usize>()
            / 2
    }

    /// Breadth-first distances from `source`; `None` marks unreachable nodes.
    pub fn distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap_or(0);
            for &(w, _) in &self.neighbors[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.distances(0).iter().all(Option::is_some)
    }

    /// Largest breadth-first eccentricity; loops are ignored.
    pub fn diameter(&self) -> Result<usize> {
        let mut diam = 0;
        for v in 0..self.len() {
            let dist = self.distances(v);
            for (w, d) in dist.iter().enumerate() {
                match d {
                    Some(d) => diam = diam.max(*d),
                    None => return Err(Error::Disconnected { from: v, to: w }),
                }
            }
        }
        Ok(diam)
    }

    /// Whether every pair of distinct nodes is adjacent.
    pub fn is_complete(&self) -> bool {
        let n = self.len();
        self.neighbors.iter().all(|adj| adj.len() == n - 1)
    }

    /// Two-colouring of the non-loop edges, if one exists.
    pub fn is_bipartite(&self) -> bool {
        let n = self.len();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].unwrap_or(false);
                for &(w, _) in &self.neighbors[v] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// The same graph with all loops dropped: per-node degrees now differ.
    pub fn without_loops(&self) -> (Vec<Vec<(usize, u32)>>, Vec<usize>) {
        let degrees = self
            .neighbors
            .iter()
            .map(|adj| adj.iter().map(|&(_, m)| m as usize).sum())
            .collect();
        (self.neighbors.clone(), degrees)
    }
}

fn merge(mut adj: Vec<(usize, u32)>) -> Vec<(usize, u32)> {
    adj.sort_unstable_by_key(|&(w, _)| w);
    let mut out: Vec<(usize, u32)> = Vec::with_capacity(adj.len());
    for (w, m) in adj {
        match out.last_mut() {
            Some((last, lm)) if *last == w => *lm += m,
            _ => out.push((w, m)),
        }
    }
    out
}
