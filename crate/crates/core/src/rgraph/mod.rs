//! Finite multigraphs with edge lengths, used as computational stand-ins for
//! R-graphs (compact length spaces that are locally trees).
//!
//! A leafless R-graph is the metric gluing of a finite multigraph with edge
//! lengths, and pendant subtrees are kept as discretised trees, so everything
//! here is finite: [`Multigraph`] carries the combinatorics and
//! [`EdgeLengthGraph`] adds strictly positive lengths and optional vertex
//! masses. Edges keep stable integer ids across edits.
//!
//! Conventions for the degenerate cases follow the usual ones: a graph of
//! surplus 1 has an empty kernel vertex set, a single kernel edge (its cycle)
//! and `r = ` cycle length; a tree has an empty core and `r = ∞`.

mod integer;
mod io;
mod iso;
mod ops;
mod structure;

pub use integer::{graph_of, IntegerGraph};
pub use io::{read_edge_length_graph, read_multigraph, write_edge_length_graph, write_multigraph};
pub use iso::{canonical_form, is_isomorphic};
pub use ops::{cut_at_point, glue, subdivide, unit_realization};
pub use structure::{
    bridges, conn_edges, conn_length, core, in_class_ar, kernel, surplus, Core, KernelDecomposition, KernelEdge,
};

use std::collections::VecDeque;

use crate::{Error, Result};

/// Largest edge id accepted; ids index a dense table.
pub const MAX_EDGE_ID: usize = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// The endpoint opposite to `x` (for a loop, `x` itself).
    #[inline]
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    #[inline]
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// Finite multigraph on vertices `0..n`, loops and parallel edges allowed.
#[derive(Debug, Clone, Default)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
    // id -> position in `edges`, usize::MAX when absent
    slot: Vec<usize>,
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Multigraph {}

/// Incidence lists: for each vertex, `(edge position, other endpoint)`.
/// A loop appears twice in the list of its vertex.
pub type Adjacency = Vec<Vec<(usize, usize)>>;

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph { n, edges: Vec::new(), slot: Vec::new() }
    }

    /// Edges get ids `0..pairs.len()` in order.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Multigraph::new(n);
        for &(u, v) in pairs {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn next_id(&self) -> usize {
        self.slot.iter().rposition(|&p| p != usize::MAX).map_or(0, |i| i + 1)
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    /// Adds an edge with a fresh id and returns the id.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        let id = self.next_id();
        self.add_edge_with_id(id, u, v)?;
        Ok(id)
    }

    pub fn add_edge_with_id(&mut self, id: usize, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Domain(format!("edge ({u}, {v}) has an endpoint outside 0..{}", self.n)));
        }
        if self.position(id).is_some() {
            return Err(Error::Domain(format!("duplicate edge id {id}")));
        }
        if id > MAX_EDGE_ID {
            return Err(Error::Domain(format!("edge id {id} exceeds {MAX_EDGE_ID}")));
        }
        if id >= self.slot.len() {
            self.slot.resize(id + 1, usize::MAX);
        }
        self.slot[id] = self.edges.len();
        self.edges.push(Edge { id, u, v });
        Ok(())
    }

    pub fn position(&self, id: usize) -> Option<usize> {
        self.slot.get(id).copied().filter(|&p| p != usize::MAX)
    }

    pub fn edge(&self, id: usize) -> Option<&Edge> {
        self.position(id).map(|p| &self.edges[p])
    }

    /// Removes the edge with the given id, keeping the relative order of the rest.
    pub fn remove_edge(&mut self, id: usize) -> Result<Edge> {
        let pos = self.position(id).ok_or_else(|| Error::Domain(format!("no edge with id {id}")))?;
        let e = self.edges.remove(pos);
        self.slot[id] = usize::MAX;
        for (p, rest) in self.edges.iter().enumerate().skip(pos) {
            self.slot[rest.id] = p;
        }
        Ok(e)
    }

    /// Degrees, loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.u == v) as usize + (e.v == v) as usize).sum()
    }

    pub fn adjacency(&self) -> Adjacency {
        let mut adj = vec![Vec::new(); self.n];
        for (pos, e) in self.edges.iter().enumerate() {
            adj[e.u].push((pos, e.v));
            adj[e.v].push((pos, e.u));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &(_, y) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.n
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.n == 0 || !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// Number of edges between each pair of vertices; loops on the diagonal.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<u32>> {
        let mut m = vec![vec![0u32; self.n]; self.n];
        for e in &self.edges {
            m[e.u][e.v] += 1;
            if e.u != e.v {
                m[e.v][e.u] += 1;
            }
        }
        m
    }
}

/// A multigraph with strictly positive edge lengths and optional vertex masses.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EdgeLengthGraph {
    graph: Multigraph,
    lengths: Vec<f64>,
    masses: Option<Vec<f64>>,
}

impl EdgeLengthGraph {
    pub fn new(n: usize) -> Self {
        EdgeLengthGraph { graph: Multigraph::new(n), lengths: Vec::new(), masses: None }
    }

    /// Edges get ids `0..edges.len()` in order.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = EdgeLengthGraph::new(n);
        for &(u, v, l) in edges {
            g.add_edge(u, v, l)?;
        }
        Ok(g)
    }

    /// Attaches lengths to the edges of `graph`, listed in edge order.
    pub fn from_multigraph(graph: Multigraph, lengths: Vec<f64>) -> Result<Self> {
        if lengths.len() != graph.num_edges() {
            return Err(Error::Domain("one length per edge required".into()));
        }
        if let Some(l) = lengths.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::Domain(format!("edge lengths must be positive and finite, got {l}")));
        }
        Ok(EdgeLengthGraph { graph, lengths, masses: None })
    }

    pub fn with_masses(mut self, masses: Vec<f64>) -> Result<Self> {
        self.set_masses(masses)?;
        Ok(self)
    }

    pub fn set_masses(&mut self, masses: Vec<f64>) -> Result<()> {
        if masses.len() != self.n() {
            return Err(Error::Domain("one mass per vertex required".into()));
        }
        if masses.iter().any(|m| !(*m >= 0.0 && m.is_finite())) {
            return Err(Error::Domain("masses must be finite and nonnegative".into()));
        }
        self.masses = Some(masses);
        Ok(())
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.graph.edges
    }

    /// Lengths, parallel to [`edges`](Self::edges).
    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn masses(&self) -> Option<&[f64]> {
        self.masses.as_deref()
    }

    pub fn mass(&self, v: usize) -> f64 {
        self.masses.as_ref().map_or(0.0, |m| m[v])
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.as_ref().map_or(0.0, |m| m.iter().sum())
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn length_of(&self, id: usize) -> Option<f64> {
        self.graph.position(id).map(|p| self.lengths[p])
    }

    /// Iterates over `(edge, length)`.
    pub fn edge_lengths(&self) -> impl Iterator<Item = (&Edge, f64)> + '_ {
        self.graph.edges.iter().zip(self.lengths.iter().copied())
    }

    pub fn add_vertex(&mut self, mass: f64) -> usize {
        let v = self.graph.add_vertex();
        if let Some(m) = self.masses.as_mut() {
            m.push(mass);
        } else if mass != 0.0 {
            let mut m = vec![0.0; v + 1];
            m[v] = mass;
            self.masses = Some(m);
        }
        v
    }

    pub fn add_edge(&mut self, u: usize, v: usize, length: f64) -> Result<usize> {
        let id = self.graph.next_id();
        self.add_edge_with_id(id, u, v, length)?;
        Ok(id)
    }

    pub fn add_edge_with_id(&mut self, id: usize, u: usize, v: usize, length: f64) -> Result<()> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain(format!("edge lengths must be positive and finite, got {length}")));
        }
        self.graph.add_edge_with_id(id, u, v)?;
        self.lengths.push(length);
        Ok(())
    }

    pub fn remove_edge(&mut self, id: usize) -> Result<(Edge, f64)> {
        let pos = self.graph.position(id).ok_or_else(|| Error::Domain(format!("no edge with id {id}")))?;
        let e = self.graph.remove_edge(id)?;
        let l = self.lengths.remove(pos);
        Ok((e, l))
    }

    /// Weighted incidence lists: `(edge position, other endpoint, length)`.
    pub fn weighted_adjacency(&self) -> Vec<Vec<(usize, usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n()];
        for (pos, (e, l)) in self.edge_lengths().enumerate() {
            adj[e.u].push((pos, e.v, l));
            adj[e.v].push((pos, e.u, l));
        }
        adj
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn path(lengths: &[f64]) -> EdgeLengthGraph {
        let edges: Vec<_> = lengths.iter().enumerate().map(|(i, &l)| (i, i + 1, l)).collect();
        EdgeLengthGraph::from_edges(lengths.len() + 1, &edges).unwrap()
    }

    pub fn cycle(k: usize, l: f64) -> EdgeLengthGraph {
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k, l)).collect();
        EdgeLengthGraph::from_edges(k, &edges).unwrap()
    }

    /// Two triangles sharing vertex 0.
    pub fn figure_eight() -> EdgeLengthGraph {
        EdgeLengthGraph::from_edges(
            5,
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (0, 3, 1.0), (3, 4, 1.0), (4, 0, 1.0)],
        )
        .unwrap()
    }

    /// Two vertices joined by three paths with the given lengths (each split
    /// into unit-ish pieces when `subdivided`).
    pub fn theta(lengths: [f64; 3]) -> EdgeLengthGraph {
        EdgeLengthGraph::from_edges(2, &[(0, 1, lengths[0]), (0, 1, lengths[1]), (0, 1, lengths[2])]).unwrap()
    }

    pub fn triangle_with_pendant() -> EdgeLengthGraph {
        EdgeLengthGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (2, 3, 1.0)]).unwrap()
    }

    pub fn complete(k: usize) -> Multigraph {
        let mut pairs = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                pairs.push((i, j));
            }
        }
        Multigraph::from_pairs(k, &pairs).unwrap()
    }
}
