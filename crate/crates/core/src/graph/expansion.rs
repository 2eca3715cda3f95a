use num_rational::Ratio;

use super::{spectral, FiberGraph};
use crate::error::{Error, Result};

/// Default node limit for the exhaustive cut search.
pub const DEFAULT_SUBSET_LIMIT: usize = 24;

/// Exact edge expansion with one minimizing subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeExpansion {
    pub value: Ratio<u64>,
    /// Node indices of the first minimizer met in Gray-code order.
    pub subset: Vec<usize>,
    pub cut: u64,
}

/// `min |E(S)| / |S|` over nonempty `S` with `2|S| <= |V|`.
///
/// Walks all subsets in reflected Gray-code order; toggling node `v` changes
/// the cut by `(edges from v to the outside) - (edges from v to S)`, so each
/// step costs one neighbor scan. Loops never cross a cut.
pub fn edge_expansion_exact(g: &FiberGraph, limit: usize) -> Result<EdgeExpansion> {
    let n = g.len();
    if n > limit || n >= 63 {
        return Err(Error::SubsetLimit { nodes: n, limit });
    }
    if n < 2 {
        return Err(Error::InvalidParameter(
            "edge expansion needs at least two nodes".into(),
        ));
    }
    let weight: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&(_, m)| u64::from(m)).sum())
        .collect();
    let mut in_set = vec![false; n];
    // multiplicity-weighted edges from each node into the current set
    let mut into_set = vec![0u64; n];
    let mut cut: u64 = 0;
    let mut size = 0usize;
    let mut best: Option<(u64, usize, u64)> = None; // (cut, size, gray code)
    let mut gray: u64 = 0;

    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        gray ^= 1 << v;
        let inside = into_set[v];
        let outside = weight[v] - inside;
        if in_set[v] {
            cut = cut + inside - outside;
            size -= 1;
        } else {
            cut = cut + outside - inside;
            size += 1;
        }
        in_set[v] = !in_set[v];
        for &(w, m) in g.neighbors(v) {
            if in_set[v] {
                into_set[w] += u64::from(m);
            } else {
                into_set[w] -= u64::from(m);
            }
        }
        if size == 0 || 2 * size > n {
            continue;
        }
        let better = match best {
            None => true,
            Some((bc, bs, _)) => u128::from(cut) * (bs as u128) < u128::from(bc) * (size as u128),
        };
        if better {
            best = Some((cut, size, gray));
        }
    }
    let (cut, size, code) = best.expect("some subset has 2|S| <= |V|");
    Ok(EdgeExpansion {
        value: Ratio::new(cut, size as u64),
        subset: (0..n).filter(|&v| code >> v & 1 == 1).collect(),
        cut,
    })
}

/// `1 - (2/d) h(G)` next to the computed SLEM.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionBound {
    pub expansion: Ratio<u64>,
    pub lower_bound: f64,
    pub slem: f64,
}

impl ExpansionBound {
    pub fn holds(&self, tolerance: f64) -> bool {
        self.lower_bound <= self.slem + tolerance
    }
}

pub fn slem_lower_bound_from_expansion(g: &FiberGraph, limit: usize) -> Result<ExpansionBound> {
    if !g.is_connected() {
        let dist = g.distances(0);
        let to = dist.iter().position(Option::is_none).unwrap_or(0);
        return Err(Error::Disconnected { from: 0, to });
    }
    let h = edge_expansion_exact(g, limit)?;
    let s = spectral::transition_matrix(g)?;
    let slem = spectral::slem(&s)?;
    let h_f = *h.value.numer() as f64 / *h.value.denom() as f64;
    Ok(ExpansionBound {
        expansion: h.value,
        lower_bound: 1.0 - 2.0 / g.degree() as f64 * h_f,
        slem,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::enumerate_fiber;
    use crate::model::build_single_row;

    fn path(i: i64) -> FiberGraph {
        let model = build_single_row(2).unwrap();
        let f = enumerate_fiber(&model.matrix, &[i]).unwrap();
        FiberGraph::build(&f, &model.markov_basis).unwrap()
    }

    fn complete(n: usize, loops: u32) -> FiberGraph {
        let adj = (0..n)
            .map(|v| (0..n).filter(|&w| w != v).map(|w| (w, 1)).collect())
            .collect();
        FiberGraph::from_adjacency(adj, vec![loops; n], n - 1 + loops as usize).unwrap()
    }

    /// Plain enumeration of every subset.
    fn brute_force(g: &FiberGraph) -> Ratio<u64> {
        let n = g.len();
        let mut best: Option<Ratio<u64>> = None;
        for mask in 1u64..(1 << n) {
            let size = mask.count_ones() as usize;
            if 2 * size > n {
                continue;
            }
            let mut cut = 0u64;
            for v in 0..n {
                if mask >> v & 1 == 1 {
                    for &(w, m) in g.neighbors(v) {
                        if mask >> w & 1 == 0 {
                            cut += u64::from(m);
                        }
                    }
                }
            }
            let r = Ratio::new(cut, size as u64);
            best = Some(best.map_or(r, |b| b.min(r)));
        }
        best.unwrap()
    }

    #[test]
    fn path_expansion() {
        assert_eq!(
            edge_expansion_exact(&path(3), 24).unwrap().value,
            Ratio::new(1, 2)
        );
        assert_eq!(
            edge_expansion_exact(&path(2), 24).unwrap().value,
            Ratio::new(1, 1)
        );
    }

    #[test]
    fn complete_graph_expansion() {
        let h = edge_expansion_exact(&complete(4, 0), 24).unwrap();
        assert_eq!(h.value, Ratio::new(2, 1));
        assert_eq!(h.subset.len(), 2);
        assert_eq!(brute_force(&complete(4, 0)), Ratio::new(2, 1));
    }

    #[test]
    fn gray_code_matches_brute_force() {
        let model = build_single_row(3).unwrap();
        for i in 1..=4 {
            let f = enumerate_fiber(&model.matrix, &[i]).unwrap();
            let g = FiberGraph::build(&f, &model.markov_basis).unwrap();
            let h = edge_expansion_exact(&g, 24).unwrap();
            assert_eq!(h.value, brute_force(&g), "i = {i}");
            // the reported subset attains the value
            let in_s: Vec<bool> = (0..g.len()).map(|v| h.subset.contains(&v)).collect();
            let cut: u64 = h
                .subset
                .iter()
                .flat_map(|&v| g.neighbors(v).iter())
                .filter(|&&(w, _)| !in_s[w])
                .map(|&(_, m)| u64::from(m))
                .sum();
            assert_eq!(Ratio::new(cut, h.subset.len() as u64), h.value);
        }
    }

    #[test]
    fn loops_do_not_change_expansion() {
        assert_eq!(
            edge_expansion_exact(&complete(5, 0), 24).unwrap().value,
            edge_expansion_exact(&complete(5, 7), 24).unwrap().value
        );
        let g = path(5);
        let (adj, degrees) = g.without_loops();
        let max = *degrees.iter().max().unwrap();
        let loops: Vec<u32> = degrees.iter().map(|d| (max - d) as u32 + 3).collect();
        let relooped = FiberGraph::from_adjacency(adj, loops, max + 3).unwrap();
        assert_eq!(
            edge_expansion_exact(&g, 24).unwrap().value,
            edge_expansion_exact(&relooped, 24).unwrap().value
        );
    }

    #[test]
    fn limit_is_enforced() {
        assert_eq!(
            edge_expansion_exact(&path(30), 24),
            Err(Error::SubsetLimit {
                nodes: 31,
                limit: 24
            })
        );
    }

    #[test]
    fn cheeger_lower_bound_on_paths() {
        let b = slem_lower_bound_from_expansion(&path(3), 24).unwrap();
        assert_eq!(b.expansion, Ratio::new(1, 2));
        assert!((b.lower_bound - 0.5).abs() < 1e-15);
        assert!(b.holds(1e-9));
        for i in 1..=12 {
            assert!(slem_lower_bound_from_expansion(&path(i), 24)
                .unwrap()
                .holds(1e-9));
        }
    }
}
