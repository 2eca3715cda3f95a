use std::collections::HashSet;

use crate::error::{Error, Result};

/// How the stored moves turn into the effective moves of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveMode {
    /// Raw basis: `0` is absent and at most one of `m`, `-m` is stored.
    /// Every stored move contributes both signs.
    OneSided,
    /// Negation-closed set containing `0`; every element is one effective move.
    SymmetricClosed,
}

/// A finite set of integer moves of a fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveSet {
    dim: usize,
    moves: Vec<Vec<i64>>,
    mode: MoveMode,
}

fn negate(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

impl MoveSet {
    /// A one-sided set. Rejects zero moves, repeated moves and pairs `m, -m`.
    pub fn one_sided(dim: usize, moves: Vec<Vec<i64>>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(moves.len());
        for (index, m) in moves.iter().enumerate() {
            if m.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: m.len(),
                });
            }
            if m.iter().all(|x| *x == 0) {
                return Err(Error::InvalidMove {
                    index,
                    reason: "zero move".into(),
                });
            }
            if seen.contains(&negate(m)) {
                return Err(Error::InvalidMove {
                    index,
                    reason: "negation of an earlier move".into(),
                });
            }
            if !seen.insert(m.clone()) {
                return Err(Error::InvalidMove {
                    index,
                    reason: "duplicate move".into(),
                });
            }
        }
        Ok(Self {
            dim,
            moves,
            mode: MoveMode::OneSided,
        })
    }

    /// A negation-closed set containing zero. Duplicates are rejected.
    pub fn symmetric_closed(dim: usize, moves: Vec<Vec<i64>>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(moves.len());
        for (index, m) in moves.iter().enumerate() {
            if m.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: m.len(),
                });
            }
            if !seen.insert(m.as_slice()) {
                return Err(Error::InvalidMove {
                    index,
                    reason: "duplicate move".into(),
                });
            }
        }
        if !seen.contains(vec![0; dim].as_slice()) {
            return Err(Error::InvalidMove {
                index: moves.len(),
                reason: "symmetric-closed set lacks the zero move".into(),
            });
        }
        if let Some(index) = moves
            .iter()
            .position(|m| !seen.contains(negate(m).as_slice()))
        {
            return Err(Error::InvalidMove {
                index,
                reason: "negation missing from symmetric-closed set".into(),
            });
        }
        Ok(Self {
            dim,
            moves,
            mode: MoveMode::SymmetricClosed,
        })
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            moves: Vec::new(),
            mode: MoveMode::OneSided,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> MoveMode {
        self.mode
    }

    /// The stored moves (one sign only in one-sided mode).
    pub fn moves(&self) -> &[Vec<i64>] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// `|±M|` for one-sided sets, `|M|` for symmetric-closed ones.
    pub fn degree(&self) -> usize {
        match self.mode {
            MoveMode::OneSided => 2 * self.moves.len(),
            MoveMode::SymmetricClosed => self.moves.len(),
        }
    }

    /// The moves a walk chooses from, `m` followed by `-m` in one-sided mode.
    pub fn effective(&self) -> Vec<Vec<i64>> {
        match self.mode {
            MoveMode::OneSided => self
                .moves
                .iter()
                .flat_map(|m| [m.clone(), negate(m)])
                .collect(),
            MoveMode::SymmetricClosed => self.moves.clone(),
        }
    }

    /// Complexity: largest absolute coordinate over all moves.
    pub fn complexity(&self) -> Result<u64> {
        self.moves
            .iter()
            .flat_map(|m| m.iter().map(|x| x.unsigned_abs()))
            .max()
            .ok_or(Error::EmptyMoveSet)
    }

    /// Checks `A m = 0` for every stored move.
    pub fn check_kernel(&self, matrix: &crate::IntegerMatrix) -> Result<()> {
        if matrix.cols() != self.dim {
            return Err(Error::Dimension {
                expected: matrix.cols(),
                got: self.dim,
            });
        }
        match self.moves.iter().position(|m| !matrix.annihilates(m)) {
            Some(index) => Err(Error::NotInKernel { index }),
            None => Ok(()),
        }
    }
}
