//! Simulation and verification toolkit for the minimum spanning tree of the
//! complete graph with i.i.d. edge weights.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph_process`] samples the weight-coupled Erdős–Rényi / Kruskal process
//!   on `K_n` and computes minimum spanning forests and trees.
//! * [`rgraph`] treats finite multigraphs with edge lengths as metric graphs:
//!   surplus, core, kernel, bridges, cutting, gluing and the integer-length
//!   discretisation.
//! * [`cycle_breaking`] implements the discrete and continuum cycle-breaking
//!   kernels together with exact-law oracles.
//! * [`continuum`] samples the continuum objects (Brownian motion with
//!   parabolic drift, excursion-coded trees, Poisson gluing, Brownian CRTs and
//!   the two core constructions).
//! * [`metric`] works with finite metric measure spaces: distances, covering
//!   numbers, Gromov–Hausdorff distance and GHP upper bounds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuum;
pub mod cycle_breaking;
pub mod error;
pub mod graph_process;
pub mod metric;
pub mod rgraph;
pub mod rng;
mod union_find;

pub use error::{Error, Result};
pub use union_find::UnionFind;
