//! Named matrix families with explicit Markov bases.

use crate::error::{Error, Result};
use crate::graph::{FiberGraph, MoveSet};
use crate::linalg::IntegerMatrix;

/// A constraint matrix together with a one-sided Markov basis.
#[derive(Debug, Clone)]
pub struct ModelInstance {
    pub name: String,
    pub parameters: Vec<usize>,
    pub matrix: IntegerMatrix,
    pub markov_basis: MoveSet,
}

impl ModelInstance {
    /// Certifies the matrix and checks every move against it.
    pub fn new(
        name: impl Into<String>,
        parameters: Vec<usize>,
        matrix: IntegerMatrix,
        markov_basis: MoveSet,
    ) -> Result<Self> {
        let matrix = if matrix.certificate().is_some() {
            matrix
        } else {
            matrix.certified()?
        };
        markov_basis.check_kernel(&matrix)?;
        Ok(Self {
            name: name.into(),
            parameters,
            matrix,
            markov_basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }
}

fn unit_difference(d: usize, plus: usize, minus: usize) -> Vec<i64> {
    let mut v = vec![0; d];
    v[plus] = 1;
    v[minus] = -1;
    v
}

/// `A_d = (1, ..., 1)` with moves `e_1 - e_k`.
pub fn build_single_row(d: usize) -> Result<ModelInstance> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "single row needs d >= 2, got {d}"
        )));
    }
    let matrix = IntegerMatrix::new(1, d, vec![1; d])?;
    let moves = (1..d).map(|k| unit_difference(d, 0, k)).collect();
    ModelInstance::new("a_d", vec![d], matrix, MoveSet::one_sided(d, moves)?)
}

/// Row and column sums of an `n x m` table (flattened row-major), with the
/// basic 2x2 swap moves.
pub fn build_independence(n: usize, m: usize) -> Result<ModelInstance> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidParameter(format!(
            "independence model needs n, m >= 2, got {n}x{m}"
        )));
    }
    let d = n * m;
    let mut entries = vec![0; (n + m) * d];
    for r in 0..n {
        for c in 0..m {
            entries[r * d + r * m + c] = 1;
            entries[(n + c) * d + r * m + c] = 1;
        }
    }
    let matrix = IntegerMatrix::new(n + m, d, entries)?;
    let mut moves = Vec::with_capacity(n * (n - 1) * m * (m - 1) / 4);
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            for c1 in 0..m {
                for c2 in c1 + 1..m {
                    // +1 at the first nonzero index keeps the lexicographically larger sign
                    let mut v = vec![0; d];
                    v[r1 * m + c1] = 1;
                    v[r2 * m + c2] = 1;
                    v[r1 * m + c2] = -1;
                    v[r2 * m + c1] = -1;
                    moves.push(v);
                }
            }
        }
    }
    ModelInstance::new(
        "independence",
        vec![n, m],
        matrix,
        MoveSet::one_sided(d, moves)?,
    )
}

/// The `(2k+1) x (4k+2)` matrix `H_k` with its reduced lexicographic
/// Gröbner basis `G_k`.
///
/// Column blocks are `[I I 0 0 -1 0; 0 0 I I 0 -1; 0 0 0 0 1 1]` with
/// identity blocks of size `k`.
pub fn build_hemmecke(k: usize) -> Result<ModelInstance> {
    if k < 1 {
        return Err(Error::InvalidParameter("hemmecke needs k >= 1".into()));
    }
    let (rows, d) = (2 * k + 1, 4 * k + 2);
    let mut entries = vec![0; rows * d];
    for i in 0..k {
        entries[i * d + i] = 1;
        entries[i * d + k + i] = 1;
        entries[i * d + 4 * k] = -1;
        let r = k + i;
        entries[r * d + 2 * k + i] = 1;
        entries[r * d + 3 * k + i] = 1;
        entries[r * d + 4 * k + 1] = -1;
    }
    entries[2 * k * d + 4 * k] = 1;
    entries[2 * k * d + 4 * k + 1] = 1;
    let matrix = IntegerMatrix::new(rows, d, entries)?;

    let mut moves: Vec<Vec<i64>> = (0..k)
        .chain(2 * k..3 * k)
        .map(|i| unit_difference(d, i, k + i))
        .collect();
    let mut long = vec![0; d];
    long[k..2 * k].iter_mut().for_each(|x| *x = 1);
    long[3 * k..4 * k].iter_mut().for_each(|x| *x = -1);
    long[4 * k] = 1;
    long[4 * k + 1] = -1;
    moves.push(long);
    ModelInstance::new("hemmecke", vec![k], matrix, MoveSet::one_sided(d, moves)?)
}

/// Node index of `(bits, last)` in the hypercube model graph: the first
/// `k` coordinates are the bits of `bits` (coordinate 1 is the most
/// significant), the last coordinate is `last`.
pub fn hypercube_index(k: usize, bits: usize, last: usize) -> usize {
    debug_assert!(bits < 1 << k && last < 2);
    bits << 1 | last
}

/// The graph on `{0,1}^{k+1}` that models the Graver fiber graph of `H_k`
/// at `e_{2k+1}`.
///
/// Nodes with equal last coordinate are adjacent when their first `k`
/// coordinates differ in exactly one place; nodes with different last
/// coordinates are always adjacent. The one-place reading is what the
/// brute-force Graver fiber graph of `H_k` produces (see the integration
/// tests); read literally as `||i - j||_inf = 1` the same-class part would be
/// complete instead. Simple, loop-free and `(k + 2^k)`-regular.
pub fn build_hemmecke_hypercube_graph(k: usize) -> Result<FiberGraph> {
    if k < 1 {
        return Err(Error::InvalidParameter(
            "hypercube graph needs k >= 1".into(),
        ));
    }
    let n = 1usize << (k + 1);
    let neighbors = (0..n)
        .map(|v| {
            let (bits, last) = (v >> 1, v & 1);
            let mut adj: Vec<(usize, u32)> = (0..k)
                .map(|b| (hypercube_index(k, bits ^ (1 << b), last), 1))
                .chain((0..1usize << k).map(|other| (hypercube_index(k, other, last ^ 1), 1)))
                .collect();
            adj.sort_unstable();
            adj
        })
        .collect();
    FiberGraph::from_adjacency(neighbors, vec![0; n], k + (1 << k))
}
