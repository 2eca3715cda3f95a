use super::spectral::{second_eigenvalues, slem, symmetric_eigenvalues, transition_matrix};
use super::FiberGraph;
use crate::error::{Error, Result};

/// The walk on applicable moves only, compared against the simple walk.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopRemoved {
    /// Loop-free adjacency with multiplicities.
    pub neighbors: Vec<Vec<(usize, u32)>>,
    /// Per-node degree after dropping loops.
    pub degrees: Vec<usize>,
    pub bipartite: bool,
    /// SLEM of the simple walk with loops.
    pub slem: f64,
    /// SLEM of the loop-free walk.
    pub slem_loop_free: f64,
    /// `1 - slem_loop_free`.
    pub gap_loop_free: f64,
    /// `degree * (1 - slem)`.
    pub scaled_gap: f64,
}

impl LoopRemoved {
    /// `(1 - lambda') <= d (1 - lambda)` up to `tolerance`.
    pub fn holds(&self, tolerance: f64) -> bool {
        self.gap_loop_free <= self.scaled_gap + tolerance
    }
}

/// Drops all loops and analyses the resulting non-regular walk
/// `S'[i][j] = mult(i, j) / deg'(i)`.
///
/// `S'` is reversible for `pi'(u) = deg'(u) / 2|E|`, so it is similar to the
/// symmetric `D^{1/2} S' D^{-1/2}` with entries `mult / sqrt(deg'_i deg'_j)`,
/// which goes to the Jacobi solver.
pub fn loop_removed(g: &FiberGraph) -> Result<LoopRemoved> {
    if !g.is_connected() {
        let to = g.distances(0).iter().position(Option::is_none).unwrap_or(0);
        return Err(Error::Disconnected { from: 0, to });
    }
    let (neighbors, degrees) = g.without_loops();
    let n = g.len();
    if n > 1 {
        if let Some(v) = degrees.iter().position(|d| *d == 0) {
            return Err(Error::IsolatedNode(v));
        }
    }
    let lambda = slem(&transition_matrix(g)?)?;
    let slem_loop_free = if n <= 1 {
        0.0
    } else {
        let mut sym = vec![0.0; n * n];
        for (v, adj) in neighbors.iter().enumerate() {
            for &(w, m) in adj {
                sym[v * n + w] = f64::from(m) / ((degrees[v] * degrees[w]) as f64).sqrt();
            }
        }
        second_eigenvalues(&symmetric_eigenvalues(n, &sym)?).0
    };
    Ok(LoopRemoved {
        bipartite: g.is_bipartite(),
        slem: lambda,
        slem_loop_free,
        gap_loop_free: 1.0 - slem_loop_free,
        scaled_gap: g.degree() as f64 * (1.0 - lambda),
        neighbors,
        degrees,
    })
}
