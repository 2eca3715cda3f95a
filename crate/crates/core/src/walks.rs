//! Walk simulation with empirical total-variation tracking, and exact
//! distance-to-uniform curves by matrix powering.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::format::sig;
use crate::graph::{FiberGraph, TransitionMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkMode {
    /// Uniform effective move; inapplicable moves keep the walk in place.
    Simple,
    /// Uniform among the applicable non-loop moves.
    ApplicableOnly,
    /// Simple-walk proposals accepted with `min(1, target(w) / target(v))`.
    Metropolis,
}

impl std::str::FromStr for WalkMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(Self::Simple),
            "applicable_only" | "applicable-only" => Ok(Self::ApplicableOnly),
            "metropolis" => Ok(Self::Metropolis),
            other => Err(Error::WalkConfig(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WalkConfig {
    pub mode: WalkMode,
    pub steps: usize,
    pub seed: u64,
    pub start: usize,
    /// Stationary target; uniform when absent.
    pub target: Option<Vec<f64>>,
    pub record_every: usize,
}

impl WalkConfig {
    pub fn new(mode: WalkMode, steps: usize, seed: u64) -> Self {
        Self {
            mode,
            steps,
            seed,
            start: 0,
            target: None,
            record_every: (steps / 100).max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvPoint {
    pub step: usize,
    pub tv: f64,
    pub rejections: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrace {
    pub seed: u64,
    pub visit_counts: Vec<usize>,
    /// Steps that stayed in place (loop taken or proposal rejected).
    pub rejection_count: usize,
    pub tv_curve: Vec<TvPoint>,
    pub final_node: usize,
    pub trajectory: Vec<usize>,
}

impl WalkTrace {
    pub fn final_tv(&self) -> Option<f64> {
        self.tv_curve.last().map(|p| p.tv)
    }

    pub fn rejection_rate(&self) -> f64 {
        let steps = self.trajectory.len().saturating_sub(1);
        if steps == 0 {
            0.0
        } else {
            self.rejection_count as f64 / steps as f64
        }
    }

    /// CSV with header `step,tv,rejections_so_far`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["step", "tv", "rejections_so_far"])
            .map_err(io)?;
        for p in &self.tv_curve {
            w.write_record([p.step.to_string(), sig(p.tv, 12), p.rejections.to_string()])
                .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn validate(g: &FiberGraph, cfg: &WalkConfig) -> Result<Vec<f64>> {
    let n = g.len();
    if n == 0 {
        return Err(Error::WalkConfig("empty graph".into()));
    }
    if cfg.start >= n {
        return Err(Error::WalkConfig(format!(
            "start node {} out of range",
            cfg.start
        )));
    }
    if cfg.record_every == 0 {
        return Err(Error::WalkConfig("record_every must be positive".into()));
    }
    if g.degree() == 0 && cfg.mode != WalkMode::ApplicableOnly {
        return Err(Error::ZeroDegree);
    }
    match &cfg.target {
        None => Ok(vec![1.0 / n as f64; n]),
        Some(t) => {
            if t.len() != n
                || t.iter()
                    .any(|x| x.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater))
            {
                return Err(Error::WalkConfig(
                    "target must be a positive vector over the nodes".into(),
                ));
            }
            let total: f64 = t.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::WalkConfig("target must sum to one".into()));
            }
            Ok(t.clone())
        }
    }
}

/// Picks the `r`-th effective move at `v`: neighbors in order by
/// multiplicity, then loops.
fn neighbor_by_rank(g: &FiberGraph, v: usize, mut r: usize) -> Option<usize> {
    for &(w, m) in g.neighbors(v) {
        if r < m as usize {
            return Some(w);
        }
        r -= m as usize;
    }
    None
}

/// Runs one seeded trajectory (ChaCha8 stream) and records the total
/// variation between the occupation measure of the last half of the
/// trajectory and the target every `record_every` steps.
pub fn run_walk(g: &FiberGraph, cfg: &WalkConfig) -> Result<WalkTrace> {
    let target = validate(g, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trajectory = Vec::with_capacity(cfg.steps + 1);
    let mut rejections_at = Vec::with_capacity(cfg.steps + 1);
    let mut v = cfg.start;
    let mut rejections = 0usize;
    trajectory.push(v);
    rejections_at.push(0);
    for _ in 0..cfg.steps {
        let next = match cfg.mode {
            WalkMode::Simple => neighbor_by_rank(g, v, rng.gen_range(0..g.degree())),
            WalkMode::ApplicableOnly => {
                let total: usize = g.neighbors(v).iter().map(|&(_, m)| m as usize).sum();
                if total == 0 {
                    return Err(Error::IsolatedNode(v));
                }
                neighbor_by_rank(g, v, rng.gen_range(0..total))
            }
            WalkMode::Metropolis => {
                match neighbor_by_rank(g, v, rng.gen_range(0..g.degree())) {
                    Some(w) => {
                        let ratio = target[w] / target[v];
                        // no draw when acceptance is certain
                        if ratio >= 1.0 || rng.gen::<f64>() < ratio {
                            Some(w)
                        } else {
                            None
                        }
                    }
                    None => None,
                }
            }
        };
        match next {
            Some(w) => v = w,
            None => rejections += 1,
        }
        trajectory.push(v);
        rejections_at.push(rejections);
    }

    let n = g.len();
    let mut visit_counts = vec![0usize; n];
    for &x in &trajectory {
        visit_counts[x] += 1;
    }
    let mut tv_curve = Vec::new();
    let mut record = |t: usize| {
        let lo = t / 2 + 1;
        let window = &trajectory[lo.min(t)..=t];
        let mut occ = vec![0usize; n];
        for &x in window {
            occ[x] += 1;
        }
        let len = window.len() as f64;
        let tv = 0.5
            * occ
                .iter()
                .zip(&target)
                .map(|(c, p)| (*c as f64 / len - p).abs())
                .sum::<f64>();
        tv_curve.push(TvPoint {
            step: t,
            tv,
            rejections: rejections_at[t],
        });
    };
    let mut t = cfg.record_every;
    while t <= cfg.steps {
        record(t);
        t += cfg.record_every;
    }
    if cfg.steps > 0 && !cfg.steps.is_multiple_of(cfg.record_every) {
        record(cfg.steps);
    }
    Ok(WalkTrace {
        seed: cfg.seed,
        visit_counts,
        rejection_count: rejections,
        tv_curve,
        final_node: v,
        trajectory,
    })
}

/// Exact `TV(pi_t, uniform)` from a point mass next to `slem^t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactTvCurve {
    /// `tv[t]` for `t = 0..=t_max`.
    pub tv: Vec<f64>,
    /// `slem^t`.
    pub envelope: Vec<f64>,
    pub slem: f64,
}

pub fn exact_tv_curve(s: &TransitionMatrix, start: usize, t_max: usize) -> Result<ExactTvCurve> {
    let n = s.len();
    if start >= n {
        return Err(Error::WalkConfig(format!(
            "start node {start} out of range"
        )));
    }
    if t_max < 1 {
        return Err(Error::WalkConfig("t_max must be at least one".into()));
    }
    let lambda = crate::graph::slem(s)?;
    let uniform = 1.0 / n as f64;
    let distance = |p: &[f64]| 0.5 * p.iter().map(|x| (x - uniform).abs()).sum::<f64>();
    let mut p = vec![0.0; n];
    p[start] = 1.0;
    let mut tv = vec![distance(&p)];
    for _ in 0..t_max {
        p = s.left_multiply(&p);
        tv.push(distance(&p));
    }
    let envelope = (0..=t_max).map(|t| lambda.powi(t as i32)).collect();
    Ok(ExactTvCurve {
        tv,
        envelope,
        slem: lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapted::adapt_fiber;
    use crate::fiber::enumerate_fiber;
    use crate::graph::transition_matrix;
    use crate::model::build_single_row;

    fn path(i: i64) -> FiberGraph {
        let model = build_single_row(2).unwrap();
        let f = enumerate_fiber(&model.matrix, &[i]).unwrap();
        FiberGraph::build(&f, &model.markov_basis).unwrap()
    }

    fn adapted_complete(i: i64) -> FiberGraph {
        let model = build_single_row(2).unwrap();
        let f = enumerate_fiber(&model.matrix, &[i]).unwrap();
        let adapted = adapt_fiber(&f, &model.markov_basis).unwrap();
        FiberGraph::build(&f, &adapted.moves).unwrap()
    }

    #[test]
    fn trace_invariants() {
        let g = path(5);
        let trace = run_walk(&g, &WalkConfig::new(WalkMode::Simple, 1000, 3)).unwrap();
        assert_eq!(trace.visit_counts.iter().sum::<usize>(), 1001);
        assert!(trace.rejection_count <= 1000);
        assert_eq!(trace.tv_curve.len(), 100);
        assert_eq!(trace.tv_curve.last().unwrap().step, 1000);
        assert_eq!(trace.seed, 3);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let g = path(6);
        let cfg = WalkConfig::new(WalkMode::Simple, 500, 42);
        assert_eq!(run_walk(&g, &cfg).unwrap(), run_walk(&g, &cfg).unwrap());
        let mut a = Vec::new();
        let mut b = Vec::new();
        run_walk(&g, &cfg).unwrap().write_csv(&mut a).unwrap();
        run_walk(&g, &cfg).unwrap().write_csv(&mut b).unwrap();
        assert_eq!(a, b);
        assert!(String::from_utf8(a)
            .unwrap()
            .starts_with("step,tv,rejections_so_far\n"));
    }

    #[test]
    fn applicable_only_never_rejects() {
        let g = path(7);
        let trace = run_walk(&g, &WalkConfig::new(WalkMode::ApplicableOnly, 5000, 9)).unwrap();
        assert_eq!(trace.rejection_count, 0);
        let isolated = FiberGraph::from_adjacency(vec![vec![]], vec![2], 2).unwrap();
        assert_eq!(
            run_walk(&isolated, &WalkConfig::new(WalkMode::ApplicableOnly, 10, 1)),
            Err(Error::IsolatedNode(0))
        );
    }

    #[test]
    fn uniform_metropolis_is_the_simple_walk() {
        let g = path(6);
        let simple = run_walk(&g, &WalkConfig::new(WalkMode::Simple, 2000, 5)).unwrap();
        let metro = run_walk(&g, &WalkConfig::new(WalkMode::Metropolis, 2000, 5)).unwrap();
        assert_eq!(simple.trajectory, metro.trajectory);
        assert_eq!(simple.rejection_count, metro.rejection_count);
    }

    #[test]
    fn metropolis_targets_weights() {
        let g = path(3);
        let target = vec![0.1, 0.2, 0.3, 0.4];
        let mut cfg = WalkConfig::new(WalkMode::Metropolis, 200_000, 11);
        cfg.target = Some(target.clone());
        let trace = run_walk(&g, &cfg).unwrap();
        assert!(trace.final_tv().unwrap() < 0.02);
        cfg.target = Some(vec![0.5, 0.5, 0.0, 0.0]);
        assert!(run_walk(&g, &cfg).is_err());
    }

    #[test]
    fn complete_adapted_walk_mixes() {
        let g = adapted_complete(14);
        assert_eq!(g.len(), 15);
        let trace = run_walk(&g, &WalkConfig::new(WalkMode::Simple, 10_000, 2024)).unwrap();
        assert!(trace.final_tv().unwrap() <= 0.1);
    }

    #[test]
    fn exact_curve_point_mass() {
        let s = transition_matrix(&path(2)).unwrap();
        let curve = exact_tv_curve(&s, 0, 50).unwrap();
        assert!((curve.tv[0] - (1.0 - 1.0 / 3.0)).abs() < 1e-15);
        for t in 0..=50 {
            assert!(curve.tv[t] <= curve.envelope[t] * 3f64.sqrt() + 1e-12);
        }
        assert!(curve.tv.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    #[test]
    fn exact_curve_on_complete_graph() {
        let g = adapted_complete(6);
        let n = g.len() as f64;
        let s = transition_matrix(&g).unwrap();
        let curve = exact_tv_curve(&s, 2, 30).unwrap();
        let lambda = 1.0 - n / g.degree() as f64;
        assert!((curve.slem - lambda).abs() < 1e-10);
        for (t, tv) in curve.tv.iter().enumerate() {
            assert!((tv - (1.0 - 1.0 / n) * lambda.powi(t as i32)).abs() < 1e-10);
        }
    }
}
