use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::rgraph::EdgeLengthGraph;
use crate::{Error, Result};

/// Weighted incidence lists `(edge position, neighbour, length)`.
pub type WeightedAdjacency = [Vec<(usize, usize, f64)>];

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

/// Multi-source shortest-path distances (`∞` where unreachable).
pub fn dijkstra(adj: &WeightedAdjacency, sources: &[usize]) -> Vec<f64> {
    dijkstra_tree(adj, sources).0
}

/// Distances and the shortest-path parent of each vertex (`usize::MAX` at sources).
pub fn dijkstra_tree(adj: &WeightedAdjacency, sources: &[usize]) -> (Vec<f64>, Vec<usize>) {
    let n = adj.len();
    let mut d = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
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
            let nd = dx + l;
            if nd < d[y] {
                d[y] = nd;
                parent[y] = x;
                heap.push(Item(nd, y));
            }
        }
    }
    (d, parent)
}

fn farthest(d: &[f64]) -> (usize, f64) {
    d.iter().copied().enumerate().fold((0, 0.0), |best, (i, x)| if x > best.1 { (i, x) } else { best })
}

/// Two sweeps from vertex 0: the eccentricity of the farthest vertex found.
/// Exact on trees, a lower bound otherwise.
pub fn double_sweep(g: &EdgeLengthGraph) -> Result<f64> {
    if g.n() == 0 || !g.graph().is_connected() {
        return Err(Error::Disconnected);
    }
    let adj = g.weighted_adjacency();
    let (a, _) = farthest(&dijkstra(&adj, &[0]));
    Ok(farthest(&dijkstra(&adj, &[a])).1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diameter {
    pub value: f64,
    /// False when `value` is only the double-sweep lower bound.
    pub exact: bool,
}

/// Diameter of the vertex set. Trees always get the exact double sweep;
/// graphs with cycles get all-pairs Dijkstra when `exact`, else the
/// double-sweep lower bound.
pub fn diameter(g: &EdgeLengthGraph, exact: bool) -> Result<Diameter> {
    let sweep = double_sweep(g)?;
    let is_tree = g.graph().num_edges() + 1 == g.n();
    if is_tree || !exact {
        return Ok(Diameter { value: sweep, exact: is_tree });
    }
    let adj = g.weighted_adjacency();
    let value = (0..g.n()).map(|s| farthest(&dijkstra(&adj, &[s])).1).fold(0.0, f64::max);
    Ok(Diameter { value, exact: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::realize;
    use proptest::prelude::*;

    #[test]
    fn path_and_cycle() {
        let p = EdgeLengthGraph::from_edges(3, &[(0, 1, 0.5), (1, 2, 2.0)]).unwrap();
        assert_eq!(diameter(&p, true).unwrap(), Diameter { value: 2.5, exact: true });
        let c = EdgeLengthGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        assert_eq!(diameter(&c, true).unwrap().value, 2.0);
        assert!(!diameter(&c, false).unwrap().exact);
    }

    proptest! {
        #[test]
        fn double_sweep_is_exact_on_trees(
            lens in proptest::collection::vec(0.01f64..3.0, 1..60),
            picks in proptest::collection::vec(0usize..1000, 60),
        ) {
            let n = lens.len() + 1;
            let mut g = EdgeLengthGraph::new(n);
            for v in 1..n {
                g.add_edge(picks[v - 1] % v, v, lens[v - 1]).unwrap();
            }
            let apsp = realize(&g).unwrap().diameter();
            prop_assert!((double_sweep(&g).unwrap() - apsp).abs() < 1e-9);
        }
    }
}
