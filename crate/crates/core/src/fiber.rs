//! Exact fiber enumeration, slice counts and growth along rays.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;

/// All `u in N^d` with `A u = b`, sorted lexicographically.
#[derive(Debug, Clone)]
pub struct Fiber {
    matrix: IntegerMatrix,
    rhs: Vec<i64>,
    points: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

impl Fiber {
    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[i64] {
        &self.rhs
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn index_of(&self, u: &[i64]) -> Option<usize> {
        self.index.get(u).copied()
    }

    pub fn contains(&self, u: &[i64]) -> bool {
        self.index.contains_key(u)
    }

    /// `|{w in F : w_j = value}|` for a 0-based coordinate `j`.
    pub fn slice_count(&self, j: usize, value: i64) -> usize {
        self.points.iter().filter(|p| p[j] == value).count()
    }
}

/// Integer weights `c * lambda^T A` and the matching budget `c * lambda^T b`,
/// scaled by the common denominator `c` of the certificate.
struct ScaledCertificate {
    weights: Vec<i128>,
    budget: i128,
}

fn scaled_certificate(a: &IntegerMatrix, b: &[i64]) -> Result<ScaledCertificate> {
    let lambda = a.certificate().ok_or(Error::MissingCertificate)?;
    let denom = lambda
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = lambda
        .entries()
        .iter()
        .map(|x| x.numer() * (&denom / x.denom()))
        .collect();
    let to_i128 = |x: BigInt| {
        x.to_i128()
            .ok_or_else(|| Error::InvalidParameter("certificate too large".into()))
    };
    let weights = (0..a.cols())
        .map(|c| to_i128((0..a.rows()).map(|r| &scaled[r] * a.get(r, c)).sum()))
        .collect::<Result<Vec<_>>>()?;
    let budget = to_i128(scaled.iter().zip(b).map(|(l, x)| l * *x).sum())?;
    Ok(ScaledCertificate { weights, budget })
}

/// Enumerates `F_A(b)` by depth-first search over coordinates in natural
/// order.
///
/// With integer weights `w = c lambda^T A >= c` every point satisfies
/// `sum_j w_j u_j = c lambda^T b`, so once a prefix is fixed the remaining
/// coordinates share the budget `c lambda^T (b - A prefix)`; a branch dies
/// when that budget goes negative and `u_j` never exceeds `budget / w_j`.
pub fn enumerate_fiber(a: &IntegerMatrix, b: &[i64]) -> Result<Fiber> {
    if b.len() != a.rows() {
        return Err(Error::Dimension {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let cert = scaled_certificate(a, b)?;
    let d = a.cols();
    // column-major copy for residual updates
    let columns: Vec<Vec<i64>> = (0..d)
        .map(|c| (0..a.rows()).map(|r| a.get(r, c)).collect())
        .collect();

    let mut points = Vec::new();
    if cert.budget >= 0 {
        let mut current = vec![0i64; d];
        let mut residual = b.to_vec();
        search(
            0,
            cert.budget,
            &cert.weights,
            &columns,
            &mut current,
            &mut residual,
            &mut points,
        );
    }
    let index = points
        .iter()
        .enumerate()
        .map(|(i, p): (usize, &Vec<i64>)| (p.clone(), i))
        .collect();
    Ok(Fiber {
        matrix: a.clone(),
        rhs: b.to_vec(),
        points,
        index,
    })
}

fn search(
    j: usize,
    budget: i128,
    weights: &[i128],
    columns: &[Vec<i64>],
    current: &mut Vec<i64>,
    residual: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    let d = weights.len();
    if j == d {
        if residual.iter().all(|r| *r == 0) {
            out.push(current.clone());
        }
        return;
    }
    if j == d - 1 {
        // the last coordinate is forced by the budget
        if budget % weights[j] != 0 {
            return;
        }
        let v = (budget / weights[j]) as i64;
        let hit = residual.iter().zip(&columns[j]).all(|(r, c)| *r == c * v);
        if hit {
            current[j] = v;
            out.push(current.clone());
            current[j] = 0;
        }
        return;
    }
    let max = budget / weights[j];
    for v in 0..=max {
        if v > 0 {
            for (r, c) in residual.iter_mut().zip(&columns[j]) {
                *r -= c;
            }
        }
        current[j] = v as i64;
        search(
            j + 1,
            budget - v * weights[j],
            weights,
            columns,
            current,
            residual,
            out,
        );
    }
    for (r, c) in residual.iter_mut().zip(&columns[j]) {
        *r += c * max as i64;
    }
    current[j] = 0;
}

/// Coordinate bounds `floor(lambda^T b / (lambda^T A)_j)` from the certificate.
pub fn coordinate_bounds(a: &IntegerMatrix, b: &[i64]) -> Result<Vec<i64>> {
    let cert = scaled_certificate(a, b)?;
    Ok(cert
        .weights
        .iter()
        .map(|w| {
            if cert.budget < 0 {
                -1
            } else {
                (cert.budget / w) as i64
            }
        })
        .collect())
}

/// `[|F_A(i b)| for i in 0..=i_max]`.
pub fn ray_growth(a: &IntegerMatrix, b: &[i64], i_max: usize) -> Result<Vec<usize>> {
    (0..=i_max)
        .map(|i| {
            let bi: Vec<i64> = b.iter().map(|x| x * i as i64).collect();
            enumerate_fiber(a, &bi).map(|f| f.len())
        })
        .collect()
}

/// Degree detected from stabilized forward differences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthFit {
    Degree {
        degree: usize,
        /// The constant value of the `degree`-th differences over the window.
        stabilized: Vec<i128>,
    },
    Inconclusive,
}

/// Smallest `r` whose `r`-th forward differences are constant over the last
/// half of the difference sequence (at least two values).
pub fn fit_growth_degree(counts: &[usize]) -> Result<GrowthFit> {
    if counts.len() < 4 || counts.contains(&0) {
        return Err(Error::InvalidParameter(
            "growth fit needs at least four positive counts".into(),
        ));
    }
    let mut diffs: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
    for degree in 0..counts.len() {
        let window = diffs.len().div_ceil(2);
        if window < 2 {
            break;
        }
        let tail = &diffs[diffs.len() - window..];
        if tail.iter().all(|x| *x == tail[0]) {
            return Ok(GrowthFit::Degree {
                degree,
                stabilized: tail.to_vec(),
            });
        }
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(GrowthFit::Inconclusive)
}

/// `(m ||lambda||_inf ||b||_inf / min_j w_j)^d` with `w = lambda^T A`, the
/// fiber-size bound obtained from the positivity certificate. For `b = 0`
/// the value is raised to one since `F_A(0) = {0}`.
pub fn fiber_size_upper_bound(a: &IntegerMatrix, b: &[i64]) -> Result<BigRational> {
    let lambda = a.certificate().ok_or(Error::MissingCertificate)?;
    let w = a.weights(lambda);
    let min_w = w.iter().min().cloned().unwrap_or_else(BigRational::one);
    let b_inf = b.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let base = BigRational::from_integer(BigInt::from(a.rows()))
        * lambda.max_abs()
        * BigRational::from_integer(BigInt::from(b_inf))
        / min_w;
    let bound = num_traits::pow(base, a.cols());
    if b_inf == 0 {
        return Ok(bound.max(BigRational::one()));
    }
    Ok(bound)
}

/// Size of the box `prod_j (floor(X) + 1)` with `X` the sup-norm bound used in
/// [`fiber_size_upper_bound`]. Counts the lattice points the argument
/// actually confines the fiber to, so it holds for every `b`.
pub fn fiber_box_bound(a: &IntegerMatrix, b: &[i64]) -> Result<BigInt> {
    let lambda = a.certificate().ok_or(Error::MissingCertificate)?;
    let w = a.weights(lambda);
    let min_w = w.iter().min().cloned().unwrap_or_else(BigRational::one);
    let b_inf = b.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let x = BigRational::from_integer(BigInt::from(a.rows()))
        * lambda.max_abs()
        * BigRational::from_integer(BigInt::from(b_inf))
        / min_w;
    let side = x.floor().to_integer().abs() + 1;
    Ok(num_traits::pow(side, a.cols()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_hemmecke, build_independence, build_single_row};

    /// Every point of the certificate box, filtered by `A u = b`.
    fn brute_force(a: &IntegerMatrix, b: &[i64]) -> Vec<Vec<i64>> {
        let bounds = coordinate_bounds(a, b).unwrap();
        if bounds.iter().any(|x| *x < 0) {
            return Vec::new();
        }
        let d = a.cols();
        let mut u = vec![0i64; d];
        let mut out = Vec::new();
        loop {
            if a.apply(&u) == b {
                out.push(u.clone());
            }
            // odometer, last coordinate fastest keeps lexicographic order
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if u[i] < bounds[i] {
                    u[i] += 1;
                    break;
                }
                u[i] = 0;
            }
        }
    }

    #[test]
    fn compositions_of_three() {
        let a = build_single_row(2).unwrap().matrix;
        let f = enumerate_fiber(&a, &[3]).unwrap();
        assert_eq!(
            f.points(),
            &[vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]
        );
        assert_eq!(f.index_of(&[2, 1]), Some(2));
        assert_eq!(f.index_of(&[2, 2]), None);
    }

    #[test]
    fn fiber_sizes() {
        let a3 = build_single_row(3).unwrap().matrix;
        assert_eq!(enumerate_fiber(&a3, &[6]).unwrap().len(), 28);
        assert_eq!(brute_force(&a3, &[6]).len(), 28);
        let ind = build_independence(2, 2).unwrap().matrix;
        for i in 0..6 {
            let f = enumerate_fiber(&ind, &[i, i, i, i]).unwrap();
            assert_eq!(f.len(), i as usize + 1);
            assert_eq!(f.points(), brute_force(&ind, &[i, i, i, i]).as_slice());
        }
    }

    #[test]
    fn outside_cone_is_empty() {
        let a = build_single_row(2).unwrap().matrix;
        assert!(enumerate_fiber(&a, &[-2]).unwrap().is_empty());
        let ind = build_independence(2, 2).unwrap().matrix;
        // inconsistent margins
        assert!(enumerate_fiber(&ind, &[1, 0, 0, 0]).unwrap().is_empty());
    }

    #[test]
    fn missing_certificate_is_an_error() {
        let a = IntegerMatrix::new(1, 2, vec![1, 1]).unwrap();
        assert!(matches!(
            enumerate_fiber(&a, &[2]),
            Err(Error::MissingCertificate)
        ));
    }

    #[test]
    fn enumeration_matches_brute_force_on_hemmecke() {
        let h = build_hemmecke(1).unwrap().matrix;
        for i in 0..4 {
            let b = [0, 0, i];
            assert_eq!(
                enumerate_fiber(&h, &b).unwrap().points(),
                brute_force(&h, &b).as_slice()
            );
        }
    }

    #[test]
    fn slices() {
        let a3 = build_single_row(3).unwrap().matrix;
        let f = enumerate_fiber(&a3, &[4]).unwrap();
        assert_eq!(f.slice_count(0, 0), 5);
        let a2 = build_single_row(2).unwrap().matrix;
        assert_eq!(enumerate_fiber(&a2, &[3]).unwrap().slice_count(0, 5), 0);
        for j in 0..3 {
            let total: usize = (0..=4).map(|l| f.slice_count(j, l)).sum();
            assert_eq!(total, f.len());
        }
    }

    #[test]
    fn ray_growth_examples() {
        let a3 = build_single_row(3).unwrap().matrix;
        assert_eq!(ray_growth(&a3, &[1], 3).unwrap(), vec![1, 3, 6, 10]);
        let a2 = build_single_row(2).unwrap().matrix;
        assert_eq!(ray_growth(&a2, &[1], 4).unwrap(), vec![1, 2, 3, 4, 5]);
        let ind = build_independence(2, 2).unwrap().matrix;
        assert_eq!(
            ray_growth(&ind, &[1, 1, 1, 1], 3).unwrap(),
            vec![1, 2, 3, 4]
        );
    }

    #[test]
    fn ray_growth_is_monotone_for_model_families() {
        let cases: Vec<(IntegerMatrix, Vec<i64>)> = vec![
            (build_single_row(4).unwrap().matrix, vec![1]),
            (
                build_independence(2, 3).unwrap().matrix,
                vec![3, 3, 2, 2, 2],
            ),
            (build_hemmecke(1).unwrap().matrix, vec![0, 0, 1]),
        ];
        for (a, b) in cases {
            let counts = ray_growth(&a, &b, 5).unwrap();
            assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
        }
    }

    #[test]
    fn growth_degree() {
        assert_eq!(
            fit_growth_degree(&[1, 3, 6, 10, 15, 21]).unwrap(),
            GrowthFit::Degree {
                degree: 2,
                stabilized: vec![1, 1]
            }
        );
        assert!(matches!(
            fit_growth_degree(&[1, 2, 3, 4, 5]).unwrap(),
            GrowthFit::Degree { degree: 1, .. }
        ));
        assert_eq!(
            fit_growth_degree(&[1, 2, 4, 8, 16]).unwrap(),
            GrowthFit::Inconclusive
        );
        assert!(fit_growth_degree(&[1, 2, 3]).is_err());
        assert!(fit_growth_degree(&[0, 1, 2, 3]).is_err());

        let a3 = build_single_row(3).unwrap().matrix;
        let counts = ray_growth(&a3, &[1], 9).unwrap();
        assert!(matches!(
            fit_growth_degree(&counts[1..]).unwrap(),
            GrowthFit::Degree { degree: 2, .. }
        ));
        let h = build_hemmecke(1).unwrap().matrix;
        let counts = ray_growth(&h, &[0, 0, 1], 9).unwrap();
        // dim of the relaxed fiber of H_1 at e_3 is three
        assert!(matches!(
            fit_growth_degree(&counts[1..]).unwrap(),
            GrowthFit::Degree { degree: 3, .. }
        ));
    }

    #[test]
    fn size_bound_examples() {
        let a2 = build_single_row(2).unwrap().matrix;
        let lambda = a2.certificate().unwrap().entries()[0].clone();
        assert_eq!(lambda, BigRational::one());
        assert_eq!(
            fiber_size_upper_bound(&a2, &[3]).unwrap(),
            BigRational::from_integer(9.into())
        );
        assert_eq!(
            fiber_size_upper_bound(&a2, &[0]).unwrap(),
            BigRational::one()
        );
        let a3 = build_single_row(3).unwrap().matrix;
        assert_eq!(
            fiber_size_upper_bound(&a3, &[6]).unwrap(),
            BigRational::from_integer(216.into())
        );
    }

    #[test]
    fn size_bound_undercounts_unit_right_hand_sides() {
        // ||u||_inf <= X leaves (X + 1)^d candidates, not X^d
        let a2 = build_single_row(2).unwrap().matrix;
        let f = enumerate_fiber(&a2, &[1]).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(
            fiber_size_upper_bound(&a2, &[1]).unwrap(),
            BigRational::one()
        );
        assert_eq!(fiber_box_bound(&a2, &[1]).unwrap(), BigInt::from(4));
    }

    #[test]
    fn box_bound_always_holds() {
        let models = [
            build_single_row(2).unwrap(),
            build_single_row(3).unwrap(),
            build_independence(2, 2).unwrap(),
            build_hemmecke(1).unwrap(),
        ];
        for model in &models {
            let a = &model.matrix;
            for i in 0..5i64 {
                let b: Vec<i64> = match model.name.as_str() {
                    "hemmecke" => vec![0, 0, i],
                    "independence" => vec![i; 4],
                    _ => vec![i],
                };
                let f = enumerate_fiber(a, &b).unwrap();
                assert!(BigInt::from(f.len()) <= fiber_box_bound(a, &b).unwrap());
                if i >= 2 {
                    assert!(
                        BigRational::from_integer(f.len().into())
                            <= fiber_size_upper_bound(a, &b).unwrap()
                    );
                }
            }
        }
    }
}
