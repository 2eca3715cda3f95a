//! Helpers shared by the integration and acceptance targets.
#![allow(dead_code)]

use std::collections::BTreeSet;

use fiberwalk::fiber::{enumerate_fiber, Fiber};
use fiberwalk::graph::{MoveSet, TransitionMatrix};
use fiberwalk::IntegerMatrix;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// All `u` in `[0, top]^d` with `A u = b`, in lexicographic order.
pub fn box_fiber(a: &IntegerMatrix, b: &[i64], top: i64) -> Vec<Vec<i64>> {
    let d = a.cols();
    let mut out = Vec::new();
    let mut u = vec![0i64; d];
    loop {
        if a.apply(&u) == b {
            out.push(u.clone());
        }
        let mut j = d;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if u[j] < top {
                u[j] += 1;
                break;
            }
            u[j] = 0;
        }
    }
}

/// `{sum c_j m_j : c in Z^k, ||c||_1 <= l}` through the full cube `[-l, l]^k`.
pub fn naive_power(moves: &[Vec<i64>], dim: usize, l: i64) -> BTreeSet<Vec<i64>> {
    let k = moves.len();
    let mut out = BTreeSet::new();
    let mut c = vec![-l; k];
    loop {
        if c.iter().map(|x| x.abs()).sum::<i64>() <= l {
            let mut v = vec![0i64; dim];
            for (m, ci) in moves.iter().zip(&c) {
                for (x, y) in v.iter_mut().zip(m) {
                    *x += ci * y;
                }
            }
            out.insert(v);
        }
        let mut j = k;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if c[j] < l {
                c[j] += 1;
                break;
            }
            c[j] = -l;
        }
    }
}

/// Drops zero vectors and later copies of `m` or `-m`.
pub fn one_sided_dedup(vectors: impl IntoIterator<Item = Vec<i64>>) -> Vec<Vec<i64>> {
    let mut seen = BTreeSet::new();
    vectors
        .into_iter()
        .filter(|m| {
            let neg: Vec<i64> = m.iter().map(|x| -x).collect();
            m.iter().any(|x| *x != 0) && !seen.contains(&neg) && seen.insert(m.clone())
        })
        .collect()
}

/// A matrix whose first row is positive, with `b = A u` for a random `u`.
pub fn random_positive_model<R: Rng>(
    rng: &mut R,
    dims: std::ops::RangeInclusive<usize>,
    rows: std::ops::RangeInclusive<usize>,
    first: std::ops::RangeInclusive<i64>,
    rest: std::ops::RangeInclusive<i64>,
    u_max: i64,
) -> (IntegerMatrix, Vec<i64>) {
    let d = rng.gen_range(dims);
    let m = rng.gen_range(rows);
    let mut entries: Vec<i64> = (0..d).map(|_| rng.gen_range(first.clone())).collect();
    entries.extend((0..d * (m - 1)).map(|_| rng.gen_range(rest.clone())));
    let a = IntegerMatrix::new(m, d, entries)
        .unwrap()
        .certified()
        .unwrap();
    let u: Vec<i64> = (0..d).map(|_| rng.gen_range(0..=u_max)).collect();
    let b = a.apply(&u);
    (a, b)
}

/// A random model with a connected move set: differences of consecutive
/// fiber points plus a few random extra differences.
pub fn random_connected_instance<R: Rng>(rng: &mut R) -> (Fiber, MoveSet) {
    loop {
        let (a, b) = random_positive_model(rng, 2..=4, 1..=2, 1..=3, -2..=2, 3);
        let fiber = enumerate_fiber(&a, &b).unwrap();
        if fiber.len() < 2 || fiber.len() > 20 {
            continue;
        }
        let n = fiber.len();
        let diff = |i: usize, j: usize| -> Vec<i64> {
            fiber
                .point(j)
                .iter()
                .zip(fiber.point(i))
                .map(|(x, y)| x - y)
                .collect()
        };
        let mut raw: Vec<Vec<i64>> = (1..n).map(|i| diff(i - 1, i)).collect();
        for _ in 0..rng.gen_range(0..=2) {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            raw.push(diff(i, j));
        }
        let moves = MoveSet::one_sided(a.cols(), one_sided_dedup(raw)).unwrap();
        return (fiber, moves);
    }
}

/// Pearson statistic of observed transitions against the rows of `s`,
/// with its degrees of freedom and upper-tail probability.
pub fn transition_chi_square(s: &TransitionMatrix, trajectory: &[usize]) -> (f64, usize, f64) {
    let n = s.len();
    let mut counts = vec![0u64; n * n];
    for w in trajectory.windows(2) {
        counts[w[0] * n + w[1]] += 1;
    }
    let mut stat = 0.0;
    let mut dof = 0usize;
    for v in 0..n {
        let total: u64 = counts[v * n..(v + 1) * n].iter().sum();
        let support: Vec<usize> = (0..n).filter(|&w| s.get(v, w) > 0.0).collect();
        if total == 0 || support.len() < 2 {
            continue;
        }
        dof += support.len() - 1;
        for &w in &support {
            let expected = total as f64 * s.get(v, w);
            let diff = counts[v * n + w] as f64 - expected;
            stat += diff * diff / expected;
        }
    }
    let p = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).unwrap().cdf(stat)
    };
    (stat, dof, p)
}
