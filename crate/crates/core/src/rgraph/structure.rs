use std::collections::VecDeque;

use super::{EdgeLengthGraph, Multigraph};
use crate::{Error, Result};

/// `|E| - |V| + 1` of a connected multigraph.
pub fn surplus(g: &Multigraph) -> Result<usize> {
    g.require_connected()?;
    Ok(g.num_edges() + 1 - g.n())
}

/// Bridge flags per edge position (linear-time low-link, parallel edges and
/// loops handled by edge position rather than by parent vertex).
pub fn bridges(g: &Multigraph) -> Vec<bool> {
    let n = g.n();
    let adj = g.adjacency();
    let mut is_bridge = vec![false; g.num_edges()];
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    // (vertex, edge position used to enter, next incidence index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (x, via, ref mut next)) = stack.last_mut() {
            if *next < adj[x].len() {
                let (pos, y) = adj[x][*next];
                *next += 1;
                if pos == via {
                    continue;
                }
                if disc[y] == usize::MAX {
                    disc[y] = time;
                    low[y] = time;
                    time += 1;
                    stack.push((y, pos, 0));
                } else {
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[x]);
                    if low[x] > disc[p] {
                        is_bridge[via] = true;
                    }
                }
            }
        }
    }
    is_bridge
}

/// Ids of the edges whose removal keeps `g` connected.
pub fn conn_edges(g: &Multigraph) -> Result<Vec<usize>> {
    g.require_connected()?;
    let b = bridges(g);
    Ok(g.edges().iter().zip(b).filter(|(_, br)| !br).map(|(e, _)| e.id).collect())
}

/// Total length of the non-bridge edges.
pub fn conn_length(g: &EdgeLengthGraph) -> Result<f64> {
    g.graph().require_connected()?;
    let b = bridges(g.graph());
    Ok(g.lengths().iter().zip(b).filter(|(_, br)| !br).map(|(l, _)| l).sum())
}

/// The core: maximal subgraph of minimum degree two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Core {
    /// Vertices of the core, ascending.
    pub vertices: Vec<usize>,
    /// Edge ids of the core, in the parent graph's edge order.
    pub edges: Vec<usize>,
}

fn core_flags(g: &Multigraph) -> (Vec<bool>, Vec<bool>, Vec<usize>) {
    let adj = g.adjacency();
    let mut deg = g.degrees();
    let mut vertex_alive = vec![true; g.n()];
    let mut edge_alive = vec![true; g.num_edges()];
    let mut queue: VecDeque<usize> = (0..g.n()).filter(|&v| deg[v] <= 1).collect();
    while let Some(x) = queue.pop_front() {
        if !vertex_alive[x] {
            continue;
        }
        vertex_alive[x] = false;
        for &(pos, y) in &adj[x] {
            if edge_alive[pos] {
                edge_alive[pos] = false;
                deg[y] -= 1;
                if y != x && vertex_alive[y] && deg[y] <= 1 {
                    queue.push_back(y);
                }
            }
        }
    }
    (vertex_alive, edge_alive, deg)
}

/// Strips degree-≤1 vertices until none remain.
///
/// Errors with [`Error::EmptyCore`] on trees.
pub fn core(g: &Multigraph) -> Result<Core> {
    g.require_connected()?;
    let (va, ea, _) = core_flags(g);
    let vertices: Vec<usize> = (0..g.n()).filter(|&v| va[v]).collect();
    if vertices.is_empty() {
        return Err(Error::EmptyCore);
    }
    let edges = g.edges().iter().zip(ea).filter(|(_, a)| *a).map(|(e, _)| e.id).collect();
    Ok(Core { vertices, edges })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelEdge {
    /// Kernel endpoints as vertex ids of the original graph. For the
    /// unicyclic convention both ends are the smallest cycle vertex.
    pub ends: (usize, usize),
    pub length: f64,
    /// Edge ids of the original graph along the path, in order from `ends.0`.
    pub path: Vec<usize>,
}

/// Core/kernel decomposition of a connected graph with edge lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelDecomposition {
    pub surplus: usize,
    /// Kernel vertices (core vertices of degree ≥ 3), ascending. Empty when
    /// the surplus is at most 1.
    pub vertices: Vec<usize>,
    /// Kernel edges; for surplus 1 the unique cycle, for surplus 0 none.
    pub edges: Vec<KernelEdge>,
    /// For each core vertex with something hanging off it, the edge ids of
    /// the pendant tree attached there.
    pub pendant_forest: Vec<(usize, Vec<usize>)>,
    /// Minimal kernel edge length; the cycle length for surplus 1; `∞` for trees.
    pub r: f64,
}

impl KernelDecomposition {
    pub fn core_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// The kernel as a standalone graph on `0..k`, kernel vertices relabelled
    /// in ascending order. The unicyclic convention is rendered as one vertex
    /// carrying a loop; a tree gives the empty graph.
    pub fn kernel_graph(&self) -> EdgeLengthGraph {
        if self.surplus == 0 {
            return EdgeLengthGraph::new(0);
        }
        if self.vertices.is_empty() {
            let mut g = EdgeLengthGraph::new(1);
            g.add_edge(0, 0, self.edges[0].length).expect("positive cycle length");
            return g;
        }
        let relabel = |v: usize| self.vertices.binary_search(&v).expect("kernel endpoint is a kernel vertex");
        let mut g = EdgeLengthGraph::new(self.vertices.len());
        for e in &self.edges {
            g.add_edge(relabel(e.ends.0), relabel(e.ends.1), e.length).expect("positive kernel length");
        }
        g
    }

    /// Kernel degree of each kernel vertex (loops twice), in `vertices` order.
    pub fn kernel_degrees(&self) -> Vec<usize> {
        self.kernel_graph().graph().degrees()
    }
}

/// Core, kernel and pendant forest of a connected graph with edge lengths.
///
/// Kernel vertices are the core vertices of core degree at least 3; kernel
/// edges are maximal core paths through degree-2 vertices, with the sum of
/// their lengths.
pub fn kernel(g: &EdgeLengthGraph) -> Result<KernelDecomposition> {
    let mg = g.graph();
    mg.require_connected()?;
    let s = mg.num_edges() + 1 - mg.n();
    let (va, ea, core_deg) = core_flags(mg);
    let adj = mg.adjacency();

    let pendant_forest = pendant_trees(mg, &va, &ea, &adj);

    if s == 0 {
        return Ok(KernelDecomposition {
            surplus: 0,
            vertices: vec![],
            edges: vec![],
            pendant_forest,
            r: f64::INFINITY,
        });
    }

    let lengths = g.lengths();
    let core_adj: Vec<Vec<(usize, usize)>> =
        adj.iter().map(|inc| inc.iter().copied().filter(|&(pos, _)| ea[pos]).collect()).collect();

    if s == 1 {
        // the core is one cycle; walk it from its smallest vertex
        let start = (0..mg.n()).find(|&v| va[v]).expect("surplus 1 has a nonempty core");
        let mut path = Vec::new();
        let mut used = vec![false; mg.num_edges()];
        let mut cur = start;
        loop {
            let next = core_adj[cur].iter().find(|&&(pos, _)| !used[pos]);
            let Some(&(pos, y)) = next else { break };
            used[pos] = true;
            path.push(pos);
            cur = y;
            if cur == start {
                break;
            }
        }
        let length: f64 = path.iter().map(|&p| lengths[p]).sum();
        let ids = path.iter().map(|&p| mg.edges()[p].id).collect();
        return Ok(KernelDecomposition {
            surplus: 1,
            vertices: vec![],
            edges: vec![KernelEdge { ends: (start, start), length, path: ids }],
            pendant_forest,
            r: length,
        });
    }

    let is_kernel: Vec<bool> = (0..mg.n()).map(|v| va[v] && core_deg[v] >= 3).collect();
    let vertices: Vec<usize> = (0..mg.n()).filter(|&v| is_kernel[v]).collect();
    let mut used = vec![false; mg.num_edges()];
    let mut edges = Vec::new();
    for &kv in &vertices {
        for &(pos0, y0) in &core_adj[kv] {
            if used[pos0] {
                continue;
            }
            used[pos0] = true;
            let mut path = vec![pos0];
            let mut prev_pos = pos0;
            let mut cur = y0;
            while !is_kernel[cur] {
                let &(pos, y) = core_adj[cur]
                    .iter()
                    .find(|&&(pos, _)| pos != prev_pos)
                    .expect("degree-2 core vertex continues the path");
                used[pos] = true;
                path.push(pos);
                prev_pos = pos;
                cur = y;
            }
            let length = path.iter().map(|&p| lengths[p]).sum();
            let ids = path.iter().map(|&p| mg.edges()[p].id).collect();
            edges.push(KernelEdge { ends: (kv, cur), length, path: ids });
        }
    }
    let r = edges.iter().map(|e| e.length).fold(f64::INFINITY, f64::min);
    Ok(KernelDecomposition { surplus: s, vertices, edges, pendant_forest, r })
}

fn pendant_trees(
    g: &Multigraph,
    core_vertex: &[bool],
    core_edge: &[bool],
    adj: &[Vec<(usize, usize)>],
) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    let mut seen_edge = vec![false; g.num_edges()];
    for c in (0..g.n()).filter(|&v| core_vertex[v]) {
        let mut ids = Vec::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            for &(pos, y) in &adj[x] {
                if core_edge[pos] || seen_edge[pos] {
                    continue;
                }
                seen_edge[pos] = true;
                ids.push(g.edges()[pos].id);
                stack.push(y);
            }
        }
        if !ids.is_empty() {
            out.push((c, ids));
        }
    }
    out
}

/// Membership in the class of graphs with minimal kernel edge length ≥ `r`,
/// total core length ≤ `1/r` and surplus ≤ `1/r`.
pub fn in_class_ar(g: &EdgeLengthGraph, r: f64) -> Result<bool> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("r must be positive, got {r}")));
    }
    let k = kernel(g)?;
    Ok(k.r >= r && k.core_length() <= 1.0 / r && (k.surplus as f64) <= 1.0 / r)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn unit(g: &Multigraph) -> EdgeLengthGraph {
        EdgeLengthGraph::from_multigraph(g.clone(), vec![1.0; g.num_edges()]).unwrap()
    }

    #[test]
    fn surplus_examples() {
        assert_eq!(surplus(path(&[1.0, 1.0]).graph()).unwrap(), 0);
        assert_eq!(surplus(&complete(4)).unwrap(), 3);
        assert_eq!(surplus(figure_eight().graph()).unwrap(), 2);
        let disc = Multigraph::from_pairs(3, &[(0, 1)]).unwrap();
        assert_eq!(surplus(&disc), Err(Error::Disconnected));
    }

    #[test]
    fn core_examples() {
        let c = core(triangle_with_pendant().graph()).unwrap();
        assert_eq!(c.vertices, vec![0, 1, 2]);
        assert_eq!(c.edges, vec![0, 1, 2]);
        let cyc = cycle(5, 1.0);
        assert_eq!(core(cyc.graph()).unwrap().edges.len(), 5);
        assert_eq!(core(path(&[1.0, 2.0]).graph()), Err(Error::EmptyCore));
    }

    #[test]
    fn conn_examples() {
        assert_eq!(conn_edges(triangle_with_pendant().graph()).unwrap(), vec![0, 1, 2]);
        assert!(conn_edges(path(&[1.0, 1.0, 1.0]).graph()).unwrap().is_empty());
        assert_eq!(conn_edges(figure_eight().graph()).unwrap().len(), 6);
        assert_eq!(conn_length(&triangle_with_pendant()).unwrap(), 3.0);
        assert_eq!(conn_length(&path(&[1.0, 2.0])).unwrap(), 0.0);
        assert_eq!(conn_length(&figure_eight()).unwrap(), 6.0);
    }

    #[test]
    fn parallel_edges_and_loops_are_not_bridges() {
        let g = Multigraph::from_pairs(3, &[(0, 1), (0, 1), (1, 2), (2, 2)]).unwrap();
        assert_eq!(bridges(&g), vec![false, false, true, false]);
    }

    #[test]
    fn kernel_figure_eight() {
        // two triangles of unit edges sharing vertex 0 -> one vertex with two loops of length 3
        let k = kernel(&figure_eight()).unwrap();
        assert_eq!(k.vertices, vec![0]);
        assert_eq!(k.edges.len(), 2);
        assert!(k.edges.iter().all(|e| e.ends == (0, 0) && e.length == 3.0));
        assert_eq!(k.r, 3.0);
        assert_eq!(k.kernel_degrees(), vec![4]);
    }

    #[test]
    fn kernel_theta_subdivided() {
        // theta with each branch split into three unit edges
        let mut g = EdgeLengthGraph::new(2);
        for _ in 0..3 {
            let a = g.add_vertex(0.0);
            let b = g.add_vertex(0.0);
            g.add_edge(0, a, 1.0).unwrap();
            g.add_edge(a, b, 1.0).unwrap();
            g.add_edge(b, 1, 1.0).unwrap();
        }
        let k = kernel(&g).unwrap();
        assert_eq!(k.vertices, vec![0, 1]);
        let mut lens: Vec<f64> = k.edges.iter().map(|e| e.length).collect();
        lens.sort_by(f64::total_cmp);
        assert_eq!(lens, vec![3.0, 3.0, 3.0]);
        assert!(is_isomorphic_theta(&k.kernel_graph()));
    }

    fn is_isomorphic_theta(g: &EdgeLengthGraph) -> bool {
        let theta = Multigraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        super::super::is_isomorphic(g.graph(), &theta)
    }

    #[test]
    fn kernel_conventions() {
        let tri = triangle_with_pendant();
        let k = kernel(&tri).unwrap();
        assert_eq!(k.surplus, 1);
        assert!(k.vertices.is_empty());
        assert_eq!(k.edges.len(), 1);
        assert_eq!(k.r, 3.0);
        assert_eq!(k.pendant_forest, vec![(2, vec![3])]);
        let t = kernel(&path(&[1.0, 2.0])).unwrap();
        assert_eq!(t.r, f64::INFINITY);
        assert!(t.edges.is_empty());
        assert!(kernel(&EdgeLengthGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap()).is_err());
    }

    #[test]
    fn class_ar_examples() {
        assert!(in_class_ar(&theta([1.0, 1.0, 1.0]), 0.3).unwrap());
        assert!(in_class_ar(&path(&[1.0, 1.0]), 0.5).unwrap());
        assert!(!in_class_ar(&theta([0.1, 1.0, 1.0]), 0.3).unwrap());
    }

    /// Random connected multigraph: a random tree plus `extra` random edges (loops allowed).
    pub(crate) fn random_connected(n: usize, extra: usize, picks: &[usize]) -> Multigraph {
        let mut it = picks.iter().copied().cycle();
        let mut g = Multigraph::new(n);
        for v in 1..n {
            let u = it.next().unwrap() % v;
            g.add_edge(u, v).unwrap();
        }
        for _ in 0..extra {
            let a = it.next().unwrap() % n;
            let b = it.next().unwrap() % n;
            g.add_edge(a, b).unwrap();
        }
        g
    }

    proptest! {
        #[test]
        fn kernel_invariants(n in 1usize..12, extra in 0usize..8, picks in proptest::collection::vec(0usize..1000, 40)) {
            let g = random_connected(n, extra, &picks);
            let lg = unit(&g);
            let s = surplus(&g).unwrap();
            let k = kernel(&lg).unwrap();
            prop_assert_eq!(k.surplus, s);
            if s >= 1 {
                let c = core(&g).unwrap();
                let cg = Multigraph::from_pairs(
                    g.n(),
                    &c.edges.iter().map(|&id| { let e = g.edge(id).unwrap(); (e.u, e.v) }).collect::<Vec<_>>(),
                ).unwrap();
                // surplus of the core (on its own vertex set)
                prop_assert_eq!(c.edges.len() + 1 - c.vertices.len(), s);
                let core_len: f64 = c.edges.len() as f64;
                prop_assert!((k.core_length() - core_len).abs() < 1e-9);
                prop_assert!(cg.degrees().iter().enumerate().all(|(v, &d)| !c.vertices.contains(&v) || d >= 2));
            }
            if s >= 2 {
                let kd = k.kernel_degrees();
                prop_assert!(kd.iter().all(|&d| d >= 3));
                let kg = k.kernel_graph();
                prop_assert_eq!(surplus(kg.graph()).unwrap(), s);
                prop_assert!(kg.graph().n() <= 2 * s - 2);
                let regular = kd.iter().all(|&d| d == 3);
                prop_assert_eq!(kg.graph().n() == 2 * s - 2, regular);
            }
            // conn edges are exactly the core edges minus bridges
            let conn = conn_edges(&g).unwrap();
            prop_assert_eq!(conn.is_empty(), s == 0);
        }
    }
}
