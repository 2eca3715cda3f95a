//! Random walks on fibers of integer matrices.
//!
//! Enumerates fibers `{u in N^d : A u = b}` exactly, builds the
//! loop-decorated regular fiber graph of a move set, and computes its
//! spectral gap, diameter and edge expansion together with boundary-based
//! expansion bounds. Move sets can be blown up to `M(l)`, which turns a
//! fiber graph into a complete graph once `l` reaches the diameter.

pub mod adapted;
pub mod error;
pub mod experiment;
pub mod fiber;
pub mod format;
pub mod graph;
pub mod linalg;
pub mod model;
pub mod walks;

pub use error::{Error, Result};
pub use fiber::Fiber;
pub use graph::{FiberGraph, MoveSet, TransitionMatrix};
pub use linalg::{IntegerMatrix, RationalVector};
pub use model::ModelInstance;
