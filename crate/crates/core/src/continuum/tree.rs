use super::Excursion;
use crate::rgraph::EdgeLengthGraph;

/// The R-tree coded by an excursion, discretised on its grid.
///
/// Vertex `v` sits at distance `height[v]` from the root `tau[0]`; the
/// distance between `tau[i]` and `tau[j]` is
/// `2ε(i) + 2ε(j) - 4 min_{i≤k≤j} ε(k)` exactly (up to rounding).
#[derive(Debug, Clone)]
pub struct ExcursionTree {
    /// The tree, carrying mass `h` for each grid index but the last.
    pub graph: EdgeLengthGraph,
    /// Grid index → vertex.
    pub tau: Vec<usize>,
    /// Parent vertex (`usize::MAX` at the root).
    pub parent: Vec<usize>,
    /// Edge id towards the parent (`usize::MAX` at the root).
    pub parent_edge: Vec<usize>,
    pub height: Vec<f64>,
}

impl ExcursionTree {
    pub fn root(&self) -> usize {
        self.tau[0]
    }

    /// Largest distance from the root.
    pub fn max_height(&self) -> f64 {
        self.height.iter().copied().fold(0.0, f64::max)
    }

    /// Splits the edge above `child` by a new massless vertex at height `at`,
    /// which must lie strictly between the heights of `child` and its parent.
    pub fn insert_above(&mut self, child: usize, at: f64) -> usize {
        let p = self.parent[child];
        debug_assert!(self.height[p] < at && at < self.height[child]);
        self.graph.remove_edge(self.parent_edge[child]).expect("parent edge exists");
        let w = self.graph.add_vertex(0.0);
        let lower = self.graph.add_edge(child, w, self.height[child] - at).expect("positive length");
        let upper = self.graph.add_edge(w, p, at - self.height[p]).expect("positive length");
        self.parent.push(p);
        self.parent_edge.push(upper);
        self.height.push(at);
        self.parent[child] = w;
        self.parent_edge[child] = lower;
        w
    }

    /// The point at height `at` on the path from `v` to the root, creating a
    /// vertex there if needed.
    pub fn ancestor_at(&mut self, v: usize, at: f64) -> usize {
        let mut a = v;
        while self.height[a] > at {
            let p = self.parent[a];
            if self.height[p] < at {
                return self.insert_above(a, at);
            }
            a = p;
        }
        a
    }
}

/// Builds the tree coded by `2ε` with a stack over the grid (a Cartesian tree
/// of the minima). Grid indices at the same height with nothing lower in
/// between share a vertex.
pub fn tree_from_excursion(e: &Excursion) -> ExcursionTree {
    let m = e.values.len();
    let mut graph = EdgeLengthGraph::new(0);
    let mut height: Vec<f64> = Vec::new();
    let mut tau = Vec::with_capacity(m);
    let mut stack: Vec<usize> = Vec::new();
    let new_vertex = |graph: &mut EdgeLengthGraph, height: &mut Vec<f64>, hgt: f64| {
        height.push(hgt);
        graph.add_vertex(0.0)
    };
    let mut links = Vec::new();
    for &val in &e.values {
        let hgt = 2.0 * val;
        while let Some(&top) = stack.last() {
            if height[top] <= hgt {
                break;
            }
            stack.pop();
            let up = match stack.last() {
                Some(&below) if height[below] >= hgt => below,
                _ => {
                    let y = new_vertex(&mut graph, &mut height, hgt);
                    stack.push(y);
                    y
                }
            };
            links.push((top, up));
        }
        let v = match stack.last() {
            Some(&top) if height[top] == hgt => top,
            _ => {
                let y = new_vertex(&mut graph, &mut height, hgt);
                stack.push(y);
                y
            }
        };
        tau.push(v);
    }
    let mut masses = vec![0.0; graph.n()];
    for &v in &tau[..m - 1] {
        masses[v] += e.h;
    }
    graph.set_masses(masses).expect("one mass per vertex");
    let mut parent = vec![usize::MAX; graph.n()];
    let mut parent_edge = vec![usize::MAX; graph.n()];
    for (child, up) in links {
        parent[child] = up;
        parent_edge[child] = graph.add_edge(child, up, height[child] - height[up]).expect("strictly lower parent");
    }
    ExcursionTree { graph, tau, parent, parent_edge, height }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rgraph::surplus;

    fn exc(values: &[f64]) -> Excursion {
        Excursion::new(1.0, values.to_vec()).unwrap()
    }

    fn tree_distance(t: &ExcursionTree, a: usize, b: usize) -> f64 {
        let depth = |mut v: usize| {
            let mut path = vec![v];
            while t.parent[v] != usize::MAX {
                v = t.parent[v];
                path.push(v);
            }
            path
        };
        let (pa, pb) = (depth(a), depth(b));
        let lca = *pa.iter().find(|v| pb.contains(v)).unwrap();
        t.height[a] + t.height[b] - 2.0 * t.height[lca]
    }

    #[test]
    fn tent_is_a_segment() {
        let t = tree_from_excursion(&exc(&[0.0, 1.0, 0.0]));
        assert_eq!(t.graph.n(), 2);
        assert_eq!(t.graph.lengths(), &[2.0]);
        assert_eq!(t.tau[0], t.tau[2]);
        assert_eq!(t.graph.total_mass(), 2.0);
    }

    #[test]
    fn branch_example() {
        let t = tree_from_excursion(&exc(&[0.0, 2.0, 1.0, 2.0, 0.0]));
        assert_eq!(t.graph.n(), 4);
        assert_eq!(surplus(t.graph.graph()).unwrap(), 0);
        assert_eq!(tree_distance(&t, t.tau[1], t.tau[3]), 4.0);
        assert_eq!(tree_distance(&t, t.tau[2], t.tau[0]), 2.0);
        assert_eq!(tree_distance(&t, t.tau[1], t.tau[2]), 2.0);
        assert_eq!(t.tau[0], t.tau[4]);
    }

    #[test]
    fn degenerate_excursion_is_a_point() {
        let t = tree_from_excursion(&exc(&[0.0, 0.0]));
        assert_eq!(t.graph.n(), 1);
        assert_eq!(t.graph.total_mass(), 1.0);
    }

    #[test]
    fn ancestor_insertion() {
        let mut t = tree_from_excursion(&exc(&[0.0, 2.0, 1.0, 2.0, 0.0]));
        let leaf = t.tau[1];
        let w = t.ancestor_at(leaf, 1.0);
        assert_eq!(t.height[w], 1.0);
        assert_eq!(tree_distance(&t, leaf, w), 3.0);
        assert_eq!(t.ancestor_at(leaf, 2.0), t.tau[2]);
        assert_eq!(surplus(t.graph.graph()).unwrap(), 0);
        assert_eq!(t.graph.total_length(), 6.0);
    }
}
