//! Exact integer and rational linear algebra.
//!
//! Everything here runs on arbitrary-precision integers and rationals. The
//! kernel-positivity certificate decides whether fibers of a matrix are
//! finite; the lattice basis feeds the superset sampler for power moves.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational vector; entries are kept in lowest terms with positive
/// denominators by `BigRational`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigRational {
        self.0
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Scales to the primitive integer vector with the same direction.
    pub fn clear_denominators(&self) -> Vec<BigInt> {
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| x.numer() * (&lcm / x.denom()))
            .collect();
        let gcd = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if gcd.is_zero() {
            return scaled;
        }
        scaled.into_iter().map(|x| x / &gcd).collect()
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Integer constraint matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
    certificate: Option<RationalVector>,
}

/// Outcome of the kernel-positivity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelPositivity {
    /// `lambda` with every entry of `lambda^T A` at least one.
    Certificate(RationalVector),
    /// Nonzero `u >= 0` with `A u = 0`.
    Witness(Vec<i64>),
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
            certificate: None,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension {
                expected: cols,
                got: bad.len(),
            });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Runs the positivity test and attaches the certificate, or returns the
    /// kernel witness as an error.
    pub fn certified(mut self) -> Result<Self> {
        match certify_kernel_positivity(&self) {
            KernelPositivity::Certificate(lambda) => {
                self.certificate = Some(lambda);
                Ok(self)
            }
            KernelPositivity::Witness(u) => Err(Error::KernelWitness(u)),
        }
    }

    /// Attaches a caller-supplied certificate after checking it exactly.
    pub fn with_certificate(mut self, lambda: RationalVector) -> Result<Self> {
        if lambda.len() != self.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                got: lambda.len(),
            });
        }
        let w = self.weights(&lambda);
        if w.iter().any(|x| *x < BigRational::one()) {
            return Err(Error::MissingCertificate);
        }
        self.certificate = Some(lambda);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn certificate(&self) -> Option<&RationalVector> {
        self.certificate.as_ref()
    }

    /// `A v`, exact.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    pub fn annihilates(&self, v: &[i64]) -> bool {
        v.len() == self.cols && self.apply(v).iter().all(|x| *x == 0)
    }

    /// `lambda^T A`.
    pub fn weights(&self, lambda: &RationalVector) -> Vec<BigRational> {
        (0..self.cols)
            .map(|c| {
                lambda
                    .0
                    .iter()
                    .enumerate()
                    .fold(BigRational::zero(), |acc, (r, l)| {
                        acc + l * BigRational::from_integer(self.get(r, c).into())
                    })
            })
            .collect()
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(i64::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Decides whether `ker(A)` meets the nonnegative orthant only in zero.
///
/// Exactly one of two systems is feasible: `lambda^T A >= 1` or
/// `A u = 0, u >= 0, sum(u) = 1`. Both are solved with a phase-one rational
/// simplex.
pub fn certify_kernel_positivity(a: &IntegerMatrix) -> KernelPositivity {
    if let Some(lambda) = solve_certificate(a) {
        return KernelPositivity::Certificate(lambda);
    }
    let u = solve_witness(a).expect("one of the two alternative systems is always feasible");
    let ints = u
        .clear_denominators()
        .into_iter()
        .map(|x| x.to_i64().expect("witness entry fits in i64"))
        .collect();
    KernelPositivity::Witness(ints)
}

/// Finds `lambda` with `lambda^T A >= 1` componentwise, if any.
pub(crate) fn solve_certificate(a: &IntegerMatrix) -> Option<RationalVector> {
    let (m, d) = (a.rows(), a.cols());
    // columns: lambda+ (m), lambda- (m), surplus (d)
    let mut lhs = vec![vec![BigRational::zero(); 2 * m + d]; d];
    for (j, row) in lhs.iter_mut().enumerate() {
        for i in 0..m {
            let v = BigRational::from_integer(a.get(i, j).into());
            row[m + i] = -v.clone();
            row[i] = v;
        }
        row[2 * m + j] = -BigRational::one();
    }
    let rhs = vec![BigRational::one(); d];
    let x = phase_one(lhs, rhs)?;
    Some(RationalVector((0..m).map(|i| &x[i] - &x[m + i]).collect()))
}

/// Finds `u >= 0` with `A u = 0` and `sum(u) = 1`, if any.
pub(crate) fn solve_witness(a: &IntegerMatrix) -> Option<RationalVector> {
    let (m, d) = (a.rows(), a.cols());
    let mut lhs: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            (0..d)
                .map(|j| BigRational::from_integer(a.get(i, j).into()))
                .collect()
        })
        .collect();
    lhs.push(vec![BigRational::one(); d]);
    let mut rhs = vec![BigRational::zero(); m];
    rhs.push(BigRational::one());
    phase_one(lhs, rhs).map(RationalVector)
}

/// Phase-one simplex with Bland's rule on `lhs x = rhs, x >= 0`.
/// Returns a feasible `x` or `None`.
fn phase_one(
    mut lhs: Vec<Vec<BigRational>>,
    mut rhs: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let p = lhs.len();
    let q = lhs.first().map_or(0, Vec::len);
    for (row, b) in lhs.iter_mut().zip(rhs.iter_mut()) {
        if b.is_negative() {
            row.iter_mut().for_each(|x| *x = -x.clone());
            *b = -b.clone();
        }
    }
    let width = q + p;
    let mut tab: Vec<Vec<BigRational>> = lhs
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..p).map(|k| {
                if k == i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (q..q + p).collect();
    // reduced costs of sum(artificials)
    let mut cost: Vec<BigRational> = (0..width)
        .map(|j| {
            if j < q {
                -tab.iter().fold(BigRational::zero(), |acc, r| acc + &r[j])
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let mut objective: BigRational = rhs.iter().fold(BigRational::zero(), |acc, b| acc + b);

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..p {
            if tab[i][enter].is_positive() {
                let ratio = &rhs[i] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // phase one is bounded below by zero
        let (row, _) = leave.expect("phase-one objective is bounded");
        let piv = tab[row][enter].clone();
        tab[row].iter_mut().for_each(|x| *x /= &piv);
        rhs[row] /= &piv;
        let pivot_row = tab[row].clone();
        let pivot_rhs = rhs[row].clone();
        for i in 0..p {
            if i != row && !tab[i][enter].is_zero() {
                let f = tab[i][enter].clone();
                for (x, y) in tab[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
                rhs[i] -= &f * &pivot_rhs;
            }
        }
        let f = cost[enter].clone();
        for (x, y) in cost.iter_mut().zip(&pivot_row) {
            *x -= &f * y;
        }
        objective += &f * &pivot_rhs;
        basis[row] = enter;
    }

    if !objective.is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); q];
    for (i, &b) in basis.iter().enumerate() {
        if b < q {
            x[b] = rhs[i].clone();
        }
    }
    Some(x)
}

/// Rank of the matrix whose columns are `vectors`, by fraction-free
/// (Bareiss) elimination.
pub fn integer_rank(vectors: &[Vec<i64>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let d = first.len();
    // rows = vectors; rank is transpose-invariant
    let mut m: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let k = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..d {
        let Some(p) = (rank..k).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..k {
            for c in col + 1..d {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == k {
            break;
        }
    }
    rank
}

/// A basis of the integer lattice spanned by a move set, with coordinates of
/// every input vector over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    pub basis: Vec<Vec<i64>>,
    /// `coefficients[i]` expresses input vector `i` over `basis`.
    pub coefficients: Vec<Vec<i64>>,
    /// `sum_j max_i |coefficients[i][j]|`.
    pub constant: u64,
}

/// Column-style Hermite reduction of the generators. Unimodular column
/// operations are mirrored as row operations on the inverse transform so the
/// coordinates of each generator over the basis fall out directly.
// columns are updated in place against the pivot column, so indices stay
#[allow(clippy::needless_range_loop)]
pub fn lattice_basis(vectors: &[Vec<i64>]) -> Result<LatticeBasis> {
    let k = vectors.len();
    if k == 0 {
        return Ok(LatticeBasis {
            basis: Vec::new(),
            coefficients: Vec::new(),
            constant: 0,
        });
    }
    let d = vectors[0].len();
    if let Some(v) = vectors.iter().find(|v| v.len() != d) {
        return Err(Error::Dimension {
            expected: d,
            got: v.len(),
        });
    }
    let mut cols: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    // inverse of the accumulated column transform, k x k
    let mut inv: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();

    let mut pivot = 0;
    for row in 0..d {
        if pivot == k {
            break;
        }
        loop {
            let best = (pivot..k)
                .filter(|&c| !cols[c][row].is_zero())
                .min_by_key(|&c| cols[c][row].abs());
            let Some(best) = best else { break };
            cols.swap(pivot, best);
            inv.swap(pivot, best);
            let mut done = true;
            for c in pivot + 1..k {
                if cols[c][row].is_zero() {
                    continue;
                }
                let q = cols[c][row].div_floor(&cols[pivot][row]);
                // col_c -= q col_pivot  <=>  row_pivot += q row_c in the inverse
                for r in 0..d {
                    let t = &q * &cols[pivot][r];
                    cols[c][r] -= t;
                }
                for j in 0..k {
                    let t = &q * &inv[c][j];
                    inv[pivot][j] += t;
                }
                if !cols[c][row].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if cols[pivot][row].is_zero() {
            continue;
        }
        if cols[pivot][row].is_negative() {
            cols[pivot].iter_mut().for_each(|x| *x = -x.clone());
            inv[pivot].iter_mut().for_each(|x| *x = -x.clone());
        }
        pivot += 1;
    }
    let rank = pivot;
    let to_i64 = |x: &BigInt| {
        x.to_i64()
            .ok_or_else(|| Error::InvalidParameter("lattice basis entry exceeds i64".into()))
    };
    let basis = cols[..rank]
        .iter()
        .map(|c| c.iter().map(to_i64).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let coefficients = (0..k)
        .map(|i| {
            (0..rank)
                .map(|j| to_i64(&inv[j][i]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let constant = (0..rank)
        .map(|j| {
            coefficients
                .iter()
                .map(|c| c[j].unsigned_abs())
                .max()
                .unwrap_or(0)
        })
        .sum();
    Ok(LatticeBasis {
        basis,
        coefficients,
        constant,
    })
}
