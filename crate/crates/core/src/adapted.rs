//! Blown-up move sets `M(l)` and the diameter-adapted basis.
//!
//! `M(l)` holds every distinct vector `sum_j c_j m_j` with `sum_j |c_j| <= l`.
//! At `l = diam F(M)` the fiber graph under `M(l)` is complete and its simple
//! walk has SLEM `1 - |F| / |M(l)|`.

use std::collections::HashMap;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fiber::{enumerate_fiber, Fiber};
use crate::graph::{FiberGraph, MoveSet};
use crate::linalg::{lattice_basis, IntegerMatrix};

/// Cap on the number of coefficient vectors `power_moves` may visit.
pub const COEFFICIENT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Direct,
    LatticeSuperset,
}

#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    pub level: usize,
    /// Symmetric-closed, contains zero.
    pub moves: MoveSet,
    /// `witnesses[i]` are coefficients over the generators realizing `moves[i]`.
    pub witnesses: Vec<Vec<i64>>,
    /// The generators the coefficients refer to.
    pub generators: Vec<Vec<i64>>,
    pub provenance: Provenance,
}

impl AdaptedBasis {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

/// Largest absolute coordinate over all moves.
pub fn complexity(moves: &MoveSet) -> Result<u64> {
    moves.complexity()
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Integer points `u in Z^r` with `||u||_1 = s`.
pub fn sphere_count(r: usize, s: usize) -> Option<u128> {
    if s == 0 {
        return Some(1);
    }
    let mut total: u128 = 0;
    for j in 1..=r.min(s) {
        let term = binomial(r as u128, j as u128)?
            .checked_mul(binomial(s as u128 - 1, j as u128 - 1)?)?
            .checked_mul(1u128.checked_shl(j as u32)?)?;
        total = total.checked_add(term)?;
    }
    Some(total)
}

/// Integer points `u in Z^r` with `||u||_1 <= l`.
pub fn cross_polytope_count(r: usize, l: usize) -> Option<u128> {
    (0..=l).try_fold(0u128, |acc, s| acc.checked_add(sphere_count(r, s)?))
}

/// Calls `visit` with every coefficient vector of length `k` and norm at most
/// `l`: by norm, then weak composition (lexicographic), then sign pattern.
fn for_each_coefficient(k: usize, l: usize, mut visit: impl FnMut(&[i64])) {
    fn compose(pos: usize, left: usize, parts: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if pos + 1 == parts.len() {
            parts[pos] = left;
            visit(parts);
            return;
        }
        for v in 0..=left {
            parts[pos] = v;
            compose(pos + 1, left - v, parts, visit);
        }
    }
    if k == 0 {
        visit(&[]);
        return;
    }
    let mut parts = vec![0usize; k];
    let mut coeffs = vec![0i64; k];
    for s in 0..=l {
        compose(0, s, &mut parts, &mut |parts: &[usize]| {
            let support: Vec<usize> = (0..k).filter(|&i| parts[i] > 0).collect();
            for signs in 0u64..(1u64 << support.len()) {
                for (i, p) in parts.iter().enumerate() {
                    coeffs[i] = *p as i64;
                }
                for (bit, &i) in support.iter().enumerate() {
                    if signs >> bit & 1 == 1 {
                        coeffs[i] = -coeffs[i];
                    }
                }
                visit(&coeffs);
            }
        });
    }
}

fn combine(generators: &[Vec<i64>], coeffs: &[i64], dim: usize) -> Vec<i64> {
    let mut out = vec![0i64; dim];
    for (g, c) in generators.iter().zip(coeffs) {
        if *c != 0 {
            for (o, x) in out.iter_mut().zip(g) {
                *o += c * x;
            }
        }
    }
    out
}

fn power_of(
    generators: &[Vec<i64>],
    dim: usize,
    level: usize,
    provenance: Provenance,
) -> Result<AdaptedBasis> {
    let count = cross_polytope_count(generators.len(), level).unwrap_or(u128::MAX);
    if count > COEFFICIENT_BUDGET {
        return Err(Error::Budget {
            count,
            limit: COEFFICIENT_BUDGET,
        });
    }
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut moves = Vec::new();
    let mut witnesses = Vec::new();
    for_each_coefficient(generators.len(), level, |coeffs| {
        let image = combine(generators, coeffs, dim);
        if !seen.contains_key(&image) {
            seen.insert(image.clone(), moves.len());
            moves.push(image);
            witnesses.push(coeffs.to_vec());
        }
    });
    Ok(AdaptedBasis {
        level,
        moves: MoveSet::symmetric_closed(dim, moves)?,
        witnesses,
        generators: generators.to_vec(),
        provenance,
    })
}

/// `M(l)` as a set of distinct vectors.
pub fn power_moves(base: &MoveSet, level: usize) -> Result<AdaptedBasis> {
    power_of(base.moves(), base.dim(), level, Provenance::Direct)
}

/// `B(C l)` for a lattice basis `B` of the moves and
/// `C = sum_j max_i |coordinate of m_i along b_j|`; contains `M(l)`.
pub fn lattice_superset(base: &MoveSet, level: usize) -> Result<AdaptedBasis> {
    let lb = lattice_basis(base.moves())?;
    let scaled = (lb.constant as usize)
        .checked_mul(level)
        .ok_or(Error::Budget {
            count: u128::MAX,
            limit: COEFFICIENT_BUDGET,
        })?;
    power_of(&lb.basis, base.dim(), scaled, Provenance::LatticeSuperset)
}

/// `M^b = M(diam F_A(b)(M))`, checked to make the fiber graph complete.
pub fn adapt_to_fiber(a: &IntegerMatrix, b: &[i64], base: &MoveSet) -> Result<AdaptedBasis> {
    let fiber = enumerate_fiber(a, b)?;
    adapt_fiber(&fiber, base)
}

/// [`adapt_to_fiber`] on an enumerated fiber.
pub fn adapt_fiber(fiber: &Fiber, base: &MoveSet) -> Result<AdaptedBasis> {
    if fiber.is_empty() {
        return Err(Error::InvalidParameter("empty fiber".into()));
    }
    let diameter = FiberGraph::build(fiber, base)?.diameter()?;
    let adapted = power_moves(base, diameter)?;
    let graph = FiberGraph::build(fiber, &adapted.moves)?;
    if !graph.is_complete() {
        return Err(Error::InvalidParameter(format!(
            "adapted graph at level {diameter} is not complete"
        )));
    }
    Ok(adapted)
}

/// Exactly uniform sampler on `{u in Z^r : ||u||_1 <= l}`.
///
/// Draws the norm `s` with weight `N(r, s)`, then the support size `j` with
/// weight `2^j C(r, j) C(s-1, j-1)`, then a uniform support, a uniform
/// composition of `s` into `j` positive parts and uniform signs.
#[derive(Debug, Clone)]
pub struct CrossPolytopeSampler {
    rank: usize,
    level: usize,
    norm_weights: Vec<u128>,
    total: u128,
}

impl CrossPolytopeSampler {
    pub fn new(rank: usize, level: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParameter("rank must be positive".into()));
        }
        let overflow = || Error::Budget {
            count: u128::MAX,
            limit: u128::MAX,
        };
        let norm_weights = (0..=level)
            .map(|s| sphere_count(rank, s).ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()?;
        let total = norm_weights
            .iter()
            .try_fold(0u128, |acc, w| acc.checked_add(*w))
            .ok_or_else(overflow)?;
        Ok(Self {
            rank,
            level,
            norm_weights,
            total,
        })
    }

    /// Number of points in the cross-polytope.
    pub fn size(&self) -> u128 {
        self.total
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<i64> {
        let r = self.rank;
        let mut out = vec![0i64; r];
        let s = pick(rng, &self.norm_weights);
        if s == 0 {
            return out;
        }
        let support_weights: Vec<u128> = (0..=r.min(s))
            .map(|j| {
                if j == 0 {
                    0
                } else {
                    (binomial(r as u128, j as u128).unwrap_or(0)
                        * binomial(s as u128 - 1, j as u128 - 1).unwrap_or(0))
                        << j
                }
            })
            .collect();
        let j = pick(rng, &support_weights);
        let mut support = index::sample(rng, r, j).into_vec();
        support.sort_unstable();
        let mut cuts = if j > 1 {
            index::sample(rng, s - 1, j - 1).into_vec()
        } else {
            Vec::new()
        };
        cuts.sort_unstable();
        let mut prev = 0usize;
        for (slot, &pos) in support.iter().enumerate() {
            let next = if slot + 1 < j { cuts[slot] + 1 } else { s };
            let part = (next - prev) as i64;
            prev = next;
            out[pos] = if rng.gen::<bool>() { part } else { -part };
        }
        out
    }
}

fn pick<R: Rng + ?Sized>(rng: &mut R, weights: &[u128]) -> usize {
    let total: u128 = weights.iter().sum();
    let mut x = rng.gen_range(0..total);
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    unreachable!("draw below total weight")
}

/// One uniform draw from `{u in Z^r : ||u||_1 <= l}`.
pub fn sample_cross_polytope<R: Rng + ?Sized>(
    rank: usize,
    level: usize,
    rng: &mut R,
) -> Result<Vec<i64>> {
    Ok(CrossPolytopeSampler::new(rank, level)?.sample(rng))
}
