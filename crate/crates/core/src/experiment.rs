//! Conventional versus adapted SLEM along a ray of right-hand sides.

use std::io::Write;

use rayon::prelude::*;

use crate::adapted::power_moves;
use crate::error::{Error, Result};
use crate::fiber::enumerate_fiber;
use crate::format::sig;
use crate::graph::{slem, transition_matrix, FiberGraph};
use crate::model::{build_hemmecke, build_independence, build_single_row, ModelInstance};

/// Named families with their canonical ray of right-hand sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `A_d`, `b_i = (i)`.
    SingleRow,
    /// `A_{n|m}`, `b_i = i (m/g, ..., m/g, n/g, ..., n/g)`, `g = gcd(n, m)`.
    Independence,
    /// `H_k`, `b_i = i e_{2k+1}`.
    Hemmecke,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a_d" | "single_row" => Ok(Self::SingleRow),
            "independence" => Ok(Self::Independence),
            "hemmecke" => Ok(Self::Hemmecke),
            other => Err(Error::InvalidParameter(format!("unknown model {other:?}"))),
        }
    }
}

impl Family {
    pub fn build(self, params: &[usize]) -> Result<ModelInstance> {
        let want = match self {
            Self::SingleRow | Self::Hemmecke => 1,
            Self::Independence => 2,
        };
        if params.len() != want {
            return Err(Error::InvalidParameter(format!(
                "model expects {want} parameter(s), got {}",
                params.len()
            )));
        }
        match self {
            Self::SingleRow => build_single_row(params[0]),
            Self::Independence => build_independence(params[0], params[1]),
            Self::Hemmecke => build_hemmecke(params[0]),
        }
    }

    /// Unit step of the ray for a built model.
    pub fn ray(self, model: &ModelInstance) -> Vec<i64> {
        match self {
            Self::SingleRow => vec![1],
            Self::Independence => {
                let (n, m) = (model.parameters[0], model.parameters[1]);
                let g = num_integer::gcd(n, m);
                let mut b = vec![(m / g) as i64; n];
                b.extend(std::iter::repeat_n((n / g) as i64, m));
                b
            }
            Self::Hemmecke => {
                let mut b = vec![0; model.matrix.rows()];
                b[model.matrix.rows() - 1] = 1;
                b
            }
        }
    }
}

/// Outcome of the adapted walk at one `i`.
#[derive(Debug, Clone, PartialEq)]
pub enum AdaptedOutcome {
    Computed {
        slem: f64,
        basis_size: usize,
    },
    /// Enumeration of `M(diam)` failed, usually on the coefficient budget.
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub i: usize,
    pub fiber_size: usize,
    pub slem_conventional: f64,
    pub adapted: AdaptedOutcome,
    pub diameter: usize,
}

impl CurveRow {
    pub fn slem_adapted(&self) -> Option<f64> {
        match self.adapted {
            AdaptedOutcome::Computed { slem, .. } => Some(slem),
            AdaptedOutcome::Failed(_) => None,
        }
    }

    pub fn adapted_basis_size(&self) -> Option<usize> {
        match self.adapted {
            AdaptedOutcome::Computed { basis_size, .. } => Some(basis_size),
            AdaptedOutcome::Failed(_) => None,
        }
    }
}

/// Sentinel written in place of adapted values that could not be computed.
pub const ERROR_SENTINEL: &str = "error";

fn curve_row(model: &ModelInstance, ray: &[i64], i: usize) -> Result<CurveRow> {
    let b: Vec<i64> = ray.iter().map(|x| x * i as i64).collect();
    let fiber = enumerate_fiber(&model.matrix, &b)?;
    let graph = FiberGraph::build(&fiber, &model.markov_basis)?;
    let slem_conventional = slem(&transition_matrix(&graph)?)?;
    let diameter = graph.diameter()?;
    let adapted = match power_moves(&model.markov_basis, diameter) {
        Ok(adapted) => {
            let g = FiberGraph::build(&fiber, &adapted.moves)?;
            AdaptedOutcome::Computed {
                slem: slem(&transition_matrix(&g)?)?,
                basis_size: adapted.len(),
            }
        }
        Err(e) => AdaptedOutcome::Failed(e.to_string()),
    };
    Ok(CurveRow {
        i,
        fiber_size: fiber.len(),
        slem_conventional,
        adapted,
        diameter,
    })
}

/// One row per `i` in `range`, computed in parallel and returned in order.
pub fn slem_curve(
    model: &ModelInstance,
    ray: &[i64],
    range: std::ops::RangeInclusive<usize>,
) -> Result<Vec<CurveRow>> {
    if range.is_empty() {
        return Err(Error::InvalidParameter("empty i range".into()));
    }
    range
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&i| curve_row(model, ray, i))
        .collect()
}

/// CSV `i,fiber_size,slem_conventional,slem_adapted,adapted_basis_size,diameter`.
pub fn write_curve_csv<W: Write>(rows: &[CurveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([
        "i",
        "fiber_size",
        "slem_conventional",
        "slem_adapted",
        "adapted_basis_size",
        "diameter",
    ])
    .map_err(io)?;
    for r in rows {
        let (slem_adapted, size) = match &r.adapted {
            AdaptedOutcome::Computed { slem, basis_size } => {
                (sig(*slem, 12), basis_size.to_string())
            }
            AdaptedOutcome::Failed(_) => (ERROR_SENTINEL.to_string(), ERROR_SENTINEL.to_string()),
        };
        w.write_record([
            r.i.to_string(),
            r.fiber_size.to_string(),
            sig(r.slem_conventional, 12),
            slem_adapted,
            size,
            r.diameter.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
