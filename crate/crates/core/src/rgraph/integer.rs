//! The graph `g(X)` of an R-graph with integer lengths.
//!
//! `v(X)` is the set of points at integer distance from the branch points
//! `S_X` (degree ≥ 3). Removing `v(X)` leaves open unit paths, which become
//! the edges of `g(X)`, and half-open stubs shorter than one ending at a
//! leaf, which are dropped. When `S_X` is empty (paths and cycles) distances
//! are measured from vertex 0 instead.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{EdgeLengthGraph, Multigraph};
use crate::{Error, Result, UnionFind};

// absorbs rounding in sums of lengths; points genuinely this close to v(X) are misread
const EPS: f64 = 1e-9;

/// A point of the realization: a vertex, or an interior point of an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Vertex(usize),
    OnEdge { edge: usize, offset: f64 },
}

/// A stretch `[a, b]` of the original edge `edge`, offsets measured from its `u` end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub edge: usize,
    pub a: f64,
    pub b: f64,
}

/// `g(X)` together with its embedding into `X`.
#[derive(Debug, Clone)]
pub struct IntegerGraph {
    pub graph: Multigraph,
    /// Position in `X` of each vertex of `g(X)`.
    pub points: Vec<Point>,
    /// For each edge of `g(X)` (by position), the stretches of `X` it covers.
    pub segments: Vec<Vec<Segment>>,
}

impl IntegerGraph {
    /// The edge of `g(X)` (by id) whose open unit path contains the point at
    /// `offset` along original edge `edge`. `None` on `v(X)` or on a dropped stub.
    pub fn locate(&self, edge: usize, offset: f64) -> Option<usize> {
        self.segments.iter().enumerate().find_map(|(pos, segs)| {
            segs.iter()
                .any(|s| s.edge == edge && offset > s.a && offset < s.b)
                .then(|| self.graph.edges()[pos].id)
        })
    }
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

fn distances_from(g: &EdgeLengthGraph, sources: &[usize]) -> Vec<f64> {
    let adj = g.weighted_adjacency();
    let mut d = vec![f64::INFINITY; g.n()];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        d[s] = 0.0;
        heap.push(Item(0.0, s));
    }
    while let Some(Item(dx, x)) = heap.pop() {
        if dx > d[x] {
            continue;
        }
        for &(_, y, l) in &adj[x] {
            if dx + l < d[y] {
                d[y] = dx + l;
                heap.push(Item(d[y], y));
            }
        }
    }
    d
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < EPS
}

/// Interior offsets `p ∈ (0, ℓ)` along an edge where `min(du + p, dv + ℓ - p)` is an integer.
fn integer_offsets(du: f64, dv: f64, len: f64) -> Vec<f64> {
    let peak = ((dv + len - du) / 2.0).clamp(0.0, len);
    let mut out = Vec::new();
    let mut k = (du - EPS).ceil();
    while k <= du + peak + EPS {
        out.push(k - du);
        k += 1.0;
    }
    let mut k = (dv - EPS).ceil();
    while k <= dv + len - peak + EPS {
        out.push(dv + len - k);
        k += 1.0;
    }
    out.retain(|&p| p > EPS && p < len - EPS);
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < EPS);
    out
}

/// Builds `g(X)` for a connected graph with integer lengths between branch points.
pub fn graph_of(g: &EdgeLengthGraph) -> Result<IntegerGraph> {
    let mg = g.graph();
    mg.require_connected()?;
    let deg = mg.degrees();
    let mut sources: Vec<usize> = (0..g.n()).filter(|&v| deg[v] >= 3).collect();
    if sources.is_empty() {
        sources.push(0);
    }
    let d = distances_from(g, &sources);

    // g-vertices: marked original vertices first, then interior points edge by edge
    let mut points = Vec::new();
    let mut vertex_point = vec![usize::MAX; g.n()];
    for v in 0..g.n() {
        if is_integer(d[v]) {
            vertex_point[v] = points.len();
            points.push(Point::Vertex(v));
        }
    }

    // an end of a segment: a g-vertex or an unmarked original vertex
    #[derive(Clone, Copy)]
    enum End {
        Marked(usize),
        Plain(usize),
    }
    let vertex_end = |v: usize| if vertex_point[v] != usize::MAX { End::Marked(vertex_point[v]) } else { End::Plain(v) };

    let mut segs: Vec<(Segment, End, End)> = Vec::new();
    for (e, len) in g.edge_lengths() {
        let offs = integer_offsets(d[e.u], d[e.v], len);
        let mut prev_end = vertex_end(e.u);
        let mut prev = 0.0;
        for p in offs {
            let idx = points.len();
            points.push(Point::OnEdge { edge: e.id, offset: p });
            segs.push((Segment { edge: e.id, a: prev, b: p }, prev_end, End::Marked(idx)));
            prev_end = End::Marked(idx);
            prev = p;
        }
        segs.push((Segment { edge: e.id, a: prev, b: len }, prev_end, vertex_end(e.v)));
    }

    let mut uf = UnionFind::new(segs.len());
    let mut first_at = vec![usize::MAX; g.n()];
    for (i, (_, a, b)) in segs.iter().enumerate() {
        for end in [a, b] {
            if let End::Plain(v) = *end {
                if first_at[v] == usize::MAX {
                    first_at[v] = i;
                } else {
                    uf.union(first_at[v], i);
                }
            }
        }
    }

    struct Piece {
        segments: Vec<Segment>,
        boundary: Vec<usize>,
        leaves: usize,
        length: f64,
    }
    let mut piece_of = vec![usize::MAX; segs.len()];
    let mut pieces: Vec<Piece> = Vec::new();
    for i in 0..segs.len() {
        let r = uf.find(i);
        if piece_of[r] == usize::MAX {
            piece_of[r] = pieces.len();
            pieces.push(Piece { segments: vec![], boundary: vec![], leaves: 0, length: 0.0 });
        }
        let pc = &mut pieces[piece_of[r]];
        let (s, a, b) = segs[i];
        pc.segments.push(s);
        pc.length += s.b - s.a;
        for end in [a, b] {
            match end {
                End::Marked(p) => pc.boundary.push(p),
                End::Plain(v) if deg[v] == 1 => pc.leaves += 1,
                End::Plain(_) => {}
            }
        }
    }

    let mut graph = Multigraph::new(points.len());
    let mut segments = Vec::new();
    for pc in pieces {
        match (pc.boundary.len(), pc.leaves) {
            (2, 0) if (pc.length - 1.0).abs() < EPS * 10.0 => {
                graph.add_edge(pc.boundary[0], pc.boundary[1])?;
                segments.push(pc.segments);
            }
            (1, 1) if pc.length < 1.0 - EPS => {}
            _ => {
                return Err(Error::NonIntegerStructure(format!(
                    "piece of length {} with {} boundary points and {} leaves",
                    pc.length,
                    pc.boundary.len(),
                    pc.leaves
                )))
            }
        }
    }
    Ok(IntegerGraph { graph, points, segments })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{cut_at_point, is_isomorphic, unit_realization};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cycle_of_length_three_is_a_triangle() {
        let g = graph_of(&cycle(1, 3.0)).unwrap();
        assert!(is_isomorphic(&g.graph, &complete(3)));
        let g = graph_of(&cycle(3, 1.0)).unwrap();
        assert!(is_isomorphic(&g.graph, &complete(3)));
    }

    #[test]
    fn pendant_stub_is_dropped() {
        // unit triangle with a pendant segment of length 2.5 at vertex 0
        let x = EdgeLengthGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (0, 3, 2.5)]).unwrap();
        let g = graph_of(&x).unwrap();
        let expected = Multigraph::from_pairs(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4)]).unwrap();
        assert!(is_isomorphic(&g.graph, &expected));
        assert_eq!(g.locate(3, 2.2), None);
        assert!(g.locate(3, 1.5).is_some());
    }

    #[test]
    fn near_integer_stub_is_not_snapped() {
        // a pendant just short of length 1 ends before its first integer point
        let x = EdgeLengthGraph::from_edges(3, &[(0, 1, 1.0), (1, 0, 1.0), (0, 2, 1.0 - 3e-8)]).unwrap();
        let g = graph_of(&x).unwrap();
        assert_eq!((g.graph.n(), g.graph.num_edges()), (2, 2));
        let x = EdgeLengthGraph::from_edges(3, &[(0, 1, 1.0), (1, 0, 1.0), (0, 2, 1.0 + 3e-8)]).unwrap();
        assert_eq!(graph_of(&x).unwrap().graph.num_edges(), 3);
    }

    #[test]
    fn non_integer_core_is_rejected() {
        assert!(matches!(graph_of(&theta([1.0, 1.0, 1.5])), Err(Error::NonIntegerStructure(_))));
        assert!(matches!(graph_of(&cycle(1, 2.5)), Err(Error::NonIntegerStructure(_))));
    }

    #[test]
    fn split_edges_are_transparent() {
        // theta(2, 1, 1) with the long branch split at 0.7
        let x = EdgeLengthGraph::from_edges(3, &[(0, 2, 0.7), (2, 1, 1.3), (0, 1, 1.0), (0, 1, 1.0)]).unwrap();
        let g = graph_of(&x).unwrap();
        let expected = Multigraph::from_pairs(3, &[(0, 2), (2, 1), (0, 1), (0, 1)]).unwrap();
        assert!(is_isomorphic(&g.graph, &expected));
        let a = g.locate(0, 0.5).unwrap();
        assert_eq!(g.locate(1, 0.1), Some(a));
        assert_ne!(g.locate(1, 0.5), Some(a));
    }

    #[test]
    fn cut_projects_to_spanning_tree() {
        let x = theta([2.0, 1.0, 1.0]);
        let gx = graph_of(&x).unwrap();
        let c = cut_at_point(&x, 1, 0.4).unwrap();
        let c = cut_at_point(&c, 0, 1.5).unwrap();
        let gc = graph_of(&c).unwrap();
        let removed = [gx.locate(1, 0.4).unwrap(), gx.locate(0, 1.5).unwrap()];
        let mut rest = gx.graph.clone();
        for id in removed {
            rest.remove_edge(id).unwrap();
        }
        assert!(rest.is_connected());
        assert!(is_isomorphic(&gc.graph, &rest));
    }

    proptest! {
        #[test]
        fn unit_realization_round_trip(n in 1usize..8, extra in 0usize..6, picks in proptest::collection::vec(0usize..1000, 30)) {
            let mut it = picks.iter().copied().cycle();
            let mut g = Multigraph::new(n);
            for v in 1..n {
                g.add_edge(it.next().unwrap() % v, v).unwrap();
            }
            for _ in 0..extra {
                let a = it.next().unwrap() % n;
                g.add_edge(a, it.next().unwrap() % n).unwrap();
            }
            let back = graph_of(&unit_realization(&g)).unwrap();
            prop_assert!(is_isomorphic(&back.graph, &g));
        }
    }
}
