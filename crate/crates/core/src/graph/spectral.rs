use num_rational::Ratio;

use super::FiberGraph;
use crate::error::{Error, Result};

/// Rational form `counts / denominator`, kept for small graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTransition {
    pub counts: Vec<u64>,
    pub denominator: u64,
}

/// Largest node count for which the rational form is kept.
pub const EXACT_LIMIT: usize = 64;

/// Dense transition matrix of the simple walk, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    data: Vec<f64>,
    exact: Option<ExactTransition>,
}

impl TransitionMatrix {
    /// Wraps a dense row-major matrix without the rational form.
    pub fn from_dense(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Shape {
                rows: n,
                cols: n,
                got: data.len(),
            });
        }
        Ok(Self {
            n,
            data,
            exact: None,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn exact(&self) -> Option<&ExactTransition> {
        self.exact.as_ref()
    }

    /// Exact entry when the rational form is present.
    pub fn exact_entry(&self, i: usize, j: usize) -> Option<Ratio<u64>> {
        self.exact
            .as_ref()
            .map(|e| Ratio::new(e.counts[i * self.n + j], e.denominator))
    }

    pub fn asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `x S` for a row vector `x`.
    pub fn left_multiply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0.0 {
                continue;
            }
            for (o, s) in out.iter_mut().zip(self.row(i)) {
                *o += xi * s;
            }
        }
        out
    }
}

/// `S[i][j] = multiplicity(i, j) / degree`, `S[i][i] = loops(i) / degree`.
pub fn transition_matrix(g: &FiberGraph) -> Result<TransitionMatrix> {
    let n = g.len();
    let degree = g.degree();
    if degree == 0 {
        return Err(Error::ZeroDegree);
    }
    let mut counts = vec![0u64; n * n];
    for v in 0..n {
        counts[v * n + v] = u64::from(g.loops()[v]);
        for &(w, m) in g.neighbors(v) {
            counts[v * n + w] = u64::from(m);
        }
    }
    let data = counts.iter().map(|&c| c as f64 / degree as f64).collect();
    let exact = (n <= EXACT_LIMIT).then_some(ExactTransition {
        counts,
        denominator: degree as u64,
    });
    Ok(TransitionMatrix { n, data, exact })
}

const JACOBI_TOLERANCE: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted in
/// descending order. Sweeps stop once the off-diagonal Frobenius norm drops
/// below `1e-12`.
pub fn symmetric_eigenvalues(n: usize, data: &[f64]) -> Result<Vec<f64>> {
    if data.len() != n * n {
        return Err(Error::Shape {
            rows: n,
            cols: n,
            got: data.len(),
        });
    }
    let mut a = data.to_vec();
    // symmetrize away rounding noise
    for i in 0..n {
        for j in i + 1..n {
            let d = (a[i * n + j] - a[j * n + i]).abs();
            if d > 1e-9 {
                return Err(Error::NotSymmetric { deviation: d });
            }
            let avg = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = avg;
            a[j * n + i] = avg;
        }
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_TOLERANCE {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

/// Eigen-summary of a transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Largest modulus after removing the eigenvalue closest to one.
    pub slem: f64,
    /// Largest signed eigenvalue after that removal.
    pub second_largest: f64,
    /// `|sum(eig) - tr S| + |sum(eig^2) - tr S^2|` against the exact traces,
    /// when the rational form is present.
    pub trace_residual: Option<f64>,
}

impl Spectrum {
    pub fn of(s: &TransitionMatrix) -> Result<Self> {
        let eigenvalues = symmetric_eigenvalues(s.n, &s.data)?;
        let (slem, second_largest) = second_eigenvalues(&eigenvalues);
        let trace_residual = s.exact.as_ref().map(|e| {
            let n = s.n;
            let denom = e.denominator as f64;
            // tr S and tr S^2 = sum of squared entries (S symmetric), both exact in integers
            let tr: u64 = (0..n).map(|i| e.counts[i * n + i]).sum();
            let tr2: u64 = e.counts.iter().map(|c| c * c).sum();
            let sum: f64 = eigenvalues.iter().sum();
            let sum2: f64 = eigenvalues.iter().map(|x| x * x).sum();
            (sum - tr as f64 / denom).abs() + (sum2 - tr2 as f64 / (denom * denom)).abs()
        });
        Ok(Self {
            eigenvalues,
            slem,
            second_largest,
            trace_residual,
        })
    }
}

/// `(slem, second largest)` of a descending eigenvalue list.
pub(crate) fn second_eigenvalues(eig: &[f64]) -> (f64, f64) {
    let Some(top) = eig
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
        .map(|(i, _)| i)
    else {
        return (0.0, 0.0);
    };
    let rest = eig
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != top)
        .map(|(_, x)| *x);
    let slem = rest.clone().map(f64::abs).fold(0.0, f64::max).min(1.0);
    let second = rest.fold(f64::NEG_INFINITY, f64::max);
    (slem, if second.is_finite() { second } else { 0.0 })
}

/// Second largest eigenvalue modulus of a symmetric stochastic matrix.
pub fn slem(s: &TransitionMatrix) -> Result<f64> {
    Ok(Spectrum::of(s)?.slem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::enumerate_fiber;
    use crate::graph::MoveSet;
    use crate::model::build_single_row;

    fn path(i: i64) -> FiberGraph {
        let model = build_single_row(2).unwrap();
        let f = enumerate_fiber(&model.matrix, &[i]).unwrap();
        FiberGraph::build(&f, &model.markov_basis).unwrap()
    }

    #[test]
    fn three_node_path_matrix() {
        let s = transition_matrix(&path(2)).unwrap();
        let expected = [0.5, 0.5, 0.0, 0.5, 0.0, 0.5, 0.0, 0.5, 0.5];
        assert_eq!(s.data(), &expected);
        assert_eq!(s.exact_entry(1, 2), Some(Ratio::new(1, 2)));
        let spectrum = Spectrum::of(&s).unwrap();
        assert!((spectrum.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((spectrum.eigenvalues[1] - 0.5).abs() < 1e-12);
        assert!((spectrum.eigenvalues[2] + 0.5).abs() < 1e-12);
        assert!((spectrum.slem - 0.5).abs() < 1e-12);
        assert!(spectrum.trace_residual.unwrap() < 1e-10);
    }

    #[test]
    fn rows_sum_to_one_exactly() {
        for i in 1..8 {
            let s = transition_matrix(&path(i)).unwrap();
            let e = s.exact().unwrap();
            let n = s.len();
            for r in 0..n {
                assert_eq!(
                    e.counts[r * n..(r + 1) * n].iter().sum::<u64>(),
                    e.denominator
                );
                assert!((s.row(r).iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            assert_eq!(s.asymmetry(), 0.0);
        }
    }

    #[test]
    fn adapted_complete_graph_slem() {
        let model = build_single_row(2).unwrap();
        let f = enumerate_fiber(&model.matrix, &[2]).unwrap();
        let moves = MoveSet::symmetric_closed(
            2,
            vec![
                vec![0, 0],
                vec![1, -1],
                vec![-1, 1],
                vec![2, -2],
                vec![-2, 2],
            ],
        )
        .unwrap();
        let g = FiberGraph::build(&f, &moves).unwrap();
        let s = transition_matrix(&g).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { (1.0 + 2.0) / 5.0 } else { 1.0 / 5.0 };
                assert!((s.get(i, j) - expected).abs() < 1e-15);
            }
        }
        assert!((slem(&s).unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn disconnected_full_loops() {
        let g = FiberGraph::from_adjacency(vec![vec![], vec![]], vec![2, 2], 2).unwrap();
        let s = transition_matrix(&g).unwrap();
        assert!((slem(&s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_degree_and_asymmetry_errors() {
        let g = FiberGraph::from_adjacency(vec![vec![]], vec![0], 0).unwrap();
        assert_eq!(transition_matrix(&g), Err(Error::ZeroDegree));
        let s = TransitionMatrix::from_dense(2, vec![0.5, 0.5, 0.2, 0.8]).unwrap();
        assert!(matches!(slem(&s), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn path_spectrum_is_cosine() {
        // path on n nodes with end loops: eigenvalues cos(pi k / n)
        for i in 1..20 {
            let n = i as usize + 1;
            let s = transition_matrix(&path(i)).unwrap();
            let lambda = slem(&s).unwrap();
            let expected = (std::f64::consts::PI / n as f64).cos();
            assert!((lambda - expected).abs() < 1e-10, "i = {i}");
        }
    }

    #[test]
    fn jacobi_agrees_with_nalgebra() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 5, 12, 30] {
            let mut data = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let x: f64 = rng.gen_range(-1.0..1.0);
                    data[i * n + j] = x;
                    data[j * n + i] = x;
                }
            }
            let ours = symmetric_eigenvalues(n, &data).unwrap();
            let m = nalgebra::DMatrix::from_row_slice(n, n, &data);
            let mut theirs: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
            theirs.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-10, "n = {n}: {a} vs {b}");
            }
        }
    }
}
