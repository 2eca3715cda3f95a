use std::collections::BTreeSet;

use num_rational::Ratio;

use super::MoveSet;
use crate::error::{Error, Result};
use crate::fiber::Fiber;

fn translate(u: &[i64], w: &[i64]) -> Vec<i64> {
    u.iter().zip(w).map(|(a, b)| a + b).collect()
}

fn check_translate(small: &Fiber, u: &[i64], big: &Fiber) -> Result<()> {
    if u.len() != small.dim() || big.dim() != small.dim() {
        return Err(Error::Dimension {
            expected: small.dim(),
            got: u.len(),
        });
    }
    if u.iter().any(|x| *x < 0)
        || !small
            .points()
            .iter()
            .all(|w| big.contains(&translate(u, w)))
    {
        return Err(Error::NotContained);
    }
    Ok(())
}

/// Points `v` of `u + F_small` with an effective move `m` such that `v + m`
/// is nonnegative but outside `u + F_small`. Sorted lexicographically.
pub fn boundary(small: &Fiber, u: &[i64], big: &Fiber, moves: &MoveSet) -> Result<Vec<Vec<i64>>> {
    check_translate(small, u, big)?;
    if moves.dim() != small.dim() {
        return Err(Error::Dimension {
            expected: small.dim(),
            got: moves.dim(),
        });
    }
    let effective = moves.effective();
    let mut out = Vec::new();
    for w in small.points() {
        let exits = effective.iter().any(|m| {
            let target = translate(w, m);
            // v + m - u = w + m; it stays nonnegative after adding u back
            let nonneg = target.iter().zip(u).all(|(t, x)| t + x >= 0);
            nonneg && !small.contains(&target)
        });
        if exits {
            out.push(translate(u, w));
        }
    }
    Ok(out)
}

/// Size of `u + union_{j in supp(u)} union_{r=0}^{C(M)} {w in F_small : w_j = r}`,
/// the slice union that contains the `u`-boundary.
pub fn boundary_slice_superset_size(small: &Fiber, u: &[i64], moves: &MoveSet) -> Result<usize> {
    if u.len() != small.dim() {
        return Err(Error::Dimension {
            expected: small.dim(),
            got: u.len(),
        });
    }
    let support: Vec<usize> = (0..u.len()).filter(|&j| u[j] != 0).collect();
    if support.is_empty() {
        return Ok(0);
    }
    let c = moves.complexity()? as i64;
    let hits: BTreeSet<usize> = small
        .points()
        .iter()
        .enumerate()
        .filter(|(_, w)| support.iter().any(|&j| w[j] <= c))
        .map(|(i, _)| i)
        .collect();
    Ok(hits.len())
}

/// `|±M| |boundary| / |F_small|`, an upper bound on the edge expansion of
/// the big fiber graph whenever `2 |F_small| <= |F_big|`.
pub fn expansion_upper_bound(
    small: &Fiber,
    u: &[i64],
    big: &Fiber,
    moves: &MoveSet,
) -> Result<Ratio<u64>> {
    if 2 * small.len() > big.len() {
        return Err(Error::SizeHypothesis {
            small: small.len(),
            big: big.len(),
        });
    }
    if small.is_empty() {
        return Err(Error::InvalidParameter("empty sub-fiber".into()));
    }
    let b = boundary(small, u, big, moves)?;
    Ok(Ratio::new(
        (moves.degree() * b.len()) as u64,
        small.len() as u64,
    ))
}
