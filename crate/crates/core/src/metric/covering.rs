//! Covering numbers of the vertex set of a graph with edge lengths.
//!
//! Balls are closed, centred at vertices, with radius `r + 1e-9`, so a
//! radius equal to a distance between vertices is never on a knife edge.
//! Covering a metric graph (edge interiors included) is done by first
//! subdividing it finely with [`crate::rgraph::subdivide`].

use std::collections::BinaryHeap;

use super::paths::dijkstra_tree;
use super::realize_capped;
use crate::rgraph::EdgeLengthGraph;
use crate::{Error, Result};

const JITTER: f64 = 1e-9;
const EXACT_CAP: usize = 128;

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Greedy covers of one graph, reused across radii.
///
/// On trees the deepest uncovered vertex gets a ball centred at its highest
/// ancestor within distance `r`; this is exact. Elsewhere a farthest-point
/// `r`-net is grown by multi-source relaxation: its centres are pairwise more
/// than `r` apart, so `N(r) ≤ count ≤ N(r/2)`.
pub struct GreedyCover {
    adj: Vec<Vec<(usize, usize, f64)>>,
    tree: Option<RootedTree>,
}

struct RootedTree {
    depth: Vec<f64>,
    parent: Vec<usize>,
    order: Vec<usize>,
}

impl GreedyCover {
    pub fn new(g: &EdgeLengthGraph) -> Result<Self> {
        if g.n() == 0 || !g.graph().is_connected() {
            return Err(Error::Disconnected);
        }
        let adj = g.weighted_adjacency();
        let tree = (g.graph().num_edges() + 1 == g.n()).then(|| {
            let (depth, parent) = dijkstra_tree(&adj, &[0]);
            let mut order: Vec<usize> = (0..g.n()).collect();
            order.sort_by(|&a, &b| depth[b].total_cmp(&depth[a]).then(a.cmp(&b)));
            RootedTree { depth, parent, order }
        });
        Ok(GreedyCover { adj, tree })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.tree.is_some()
    }

    pub fn count(&self, r: f64) -> usize {
        let r = r + JITTER;
        match &self.tree {
            Some(t) => self.leaf_first(t, r),
            None => self.farthest_point_net(r),
        }
    }

    fn leaf_first(&self, t: &RootedTree, r: f64) -> usize {
        let mut covered = vec![false; self.len()];
        let mut local = vec![f64::INFINITY; self.len()];
        let mut touched = Vec::new();
        let mut heap = BinaryHeap::new();
        let mut centers = 0;
        for &v in &t.order {
            if covered[v] {
                continue;
            }
            let mut c = v;
            while t.parent[c] != usize::MAX && t.depth[v] - t.depth[t.parent[c]] <= r {
                c = t.parent[c];
            }
            centers += 1;
            for &x in &touched {
                local[x] = f64::INFINITY;
            }
            touched.clear();
            local[c] = 0.0;
            touched.push(c);
            heap.push(Item(0.0, c));
            while let Some(Item(dx, x)) = heap.pop() {
                if dx > local[x] {
                    continue;
                }
                covered[x] = true;
                for &(_, y, l) in &self.adj[x] {
                    let nd = dx + l;
                    if nd <= r && nd < local[y] {
                        local[y] = nd;
                        touched.push(y);
                        heap.push(Item(nd, y));
                    }
                }
            }
        }
        centers
    }

    fn farthest_point_net(&self, r: f64) -> usize {
        let mut d = vec![f64::INFINITY; self.len()];
        // lazy max-heap of (distance to the net, vertex)
        let mut far: BinaryHeap<(Far, usize)> = BinaryHeap::new();
        let mut heap = BinaryHeap::new();
        let mut centers = 0;
        let mut next = Some(0);
        while let Some(c) = next {
            centers += 1;
            d[c] = 0.0;
            heap.push(Item(0.0, c));
            while let Some(Item(dx, x)) = heap.pop() {
                if dx > d[x] {
                    continue;
                }
                for &(_, y, l) in &self.adj[x] {
                    let nd = dx + l;
                    if nd < d[y] {
                        d[y] = nd;
                        heap.push(Item(nd, y));
                        if nd > r {
                            far.push((Far(nd), y));
                        }
                    }
                }
            }
            next = None;
            while let Some(&(Far(dx), x)) = far.peek() {
                if dx == d[x] {
                    next = Some(x);
                    break;
                }
                far.pop();
            }
        }
        centers
    }
}

struct Far(f64);

impl PartialEq for Far {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Far {}

impl PartialOrd for Far {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Far {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Size of a greedy cover of the vertices by closed balls of radius `r`;
/// see [`GreedyCover`].
pub fn covering_number_greedy(g: &EdgeLengthGraph, r: f64) -> Result<usize> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    Ok(GreedyCover::new(g)?.count(r))
}

/// Minimum number of balls covering all vertices, by branch and bound over
/// bitsets. At most 128 vertices.
pub fn covering_number_exact(g: &EdgeLengthGraph, r: f64) -> Result<usize> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("radius must be positive, got {r}")));
    }
    let s = realize_capped(g, EXACT_CAP)?;
    let n = s.len();
    let r = r + JITTER;
    let mut balls: Vec<u128> = (0..n)
        .map(|c| (0..n).filter(|&v| s.dist(c, v) <= r).fold(0u128, |m, v| m | (1 << v)))
        .collect();
    balls.sort_unstable_by_key(|b| std::cmp::Reverse(b.count_ones()));
    balls.dedup();
    let dominated: Vec<bool> =
        (0..balls.len()).map(|i| (0..i).any(|j| balls[i] & !balls[j] == 0)).collect();
    let balls: Vec<u128> = balls.into_iter().zip(dominated).filter(|(_, d)| !d).map(|(b, _)| b).collect();
    let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut best = GreedyCover::new(g)?.count(r - JITTER);
    search_cover(&balls, full, 0, &mut best);
    Ok(best)
}

fn search_cover(balls: &[u128], uncovered: u128, used: usize, best: &mut usize) {
    if uncovered == 0 {
        *best = (*best).min(used);
        return;
    }
    let largest = balls.iter().map(|b| (b & uncovered).count_ones()).max().unwrap_or(0) as usize;
    let bound = used + (uncovered.count_ones() as usize).div_ceil(largest.max(1));
    if bound >= *best {
        return;
    }
    // branch on the uncovered vertex lying in the fewest balls
    let mut pick = 0;
    let mut fewest = usize::MAX;
    let mut rest = uncovered;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        let k = balls.iter().filter(|b| *b & (1 << v) != 0).count();
        if k < fewest {
            fewest = k;
            pick = v;
        }
    }
    let mut options: Vec<u128> = balls.iter().copied().filter(|b| b & (1 << pick) != 0).collect();
    options.sort_unstable_by_key(|b| std::cmp::Reverse((b & uncovered).count_ones()));
    for b in options {
        search_cover(balls, uncovered & !b, used + 1, best);
    }
}

/// Least-squares fit of `log N(r)` against `log(1/r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Every `(r, N)` evaluated.
    pub counts: Vec<(f64, usize)>,
    /// The pairs kept for the fit: `10 ≤ N ≤ |V|/10`.
    pub used: Vec<(f64, usize)>,
}

/// Radii `r_max, r_max/√2, r_max/2, …` (`count` of them).
pub fn geometric_radii(r_max: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| r_max * std::f64::consts::FRAC_1_SQRT_2.powi(i as i32)).collect()
}

/// Box-counting slope from greedy covers at the given radii, fitted only
/// where `10 ≤ N ≤ |V|/10`.
pub fn minkowski_slope(g: &EdgeLengthGraph, radii: &[f64]) -> Result<SlopeFit> {
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::Parameter("radii must be positive".into()));
    }
    let tree = GreedyCover::new(g)?;
    let counts: Vec<(f64, usize)> = radii.iter().map(|&r| (r, tree.count(r))).collect();
    let cap = tree.len() / 10;
    let used: Vec<(f64, usize)> = counts.iter().copied().filter(|&(_, k)| k >= 10 && k <= cap).collect();
    if used.len() < 3 {
        return Err(Error::Parameter(format!("only {} radii fall in the fitting range 10 ≤ N ≤ {cap}", used.len())));
    }
    let xs: Vec<f64> = used.iter().map(|&(r, _)| (1.0 / r).ln()).collect();
    let ys: Vec<f64> = used.iter().map(|&(_, k)| (k as f64).ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(SlopeFit { slope, intercept: my - slope * mx, counts, used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rgraph::subdivide;

    fn cycle(len: f64) -> EdgeLengthGraph {
        EdgeLengthGraph::from_edges(1, &[(0, 0, len)]).unwrap()
    }

    fn segment(len: f64) -> EdgeLengthGraph {
        EdgeLengthGraph::from_edges(2, &[(0, 1, len)]).unwrap()
    }

    #[test]
    fn circle_and_segment() {
        let c = subdivide(&cycle(1.0), 1e-3).unwrap();
        assert_eq!(covering_number_greedy(&c, 0.125).unwrap(), 4);
        let s = subdivide(&segment(1.0), 1e-3).unwrap();
        assert_eq!(covering_number_greedy(&s, 0.125).unwrap(), 4);
        for r in [0.05f64, 0.1, 0.2, 0.3] {
            let expect = (1.0 / (2.0 * r)).ceil() as usize;
            let net = covering_number_greedy(&c, r).unwrap();
            assert!(expect <= net && net <= (1.0 / r).ceil() as usize, "cycle r={r}: {net}");
            assert_eq!(covering_number_greedy(&s, r).unwrap(), expect, "segment r={r}");
        }
    }

    #[test]
    fn exact_matches_analytic_on_coarse_shapes() {
        let c = subdivide(&cycle(1.0), 1.0 / 96.0).unwrap();
        assert_eq!(covering_number_exact(&c, 0.125).unwrap(), 4);
        let s = subdivide(&segment(1.0), 1.0 / 96.0).unwrap();
        assert_eq!(covering_number_exact(&s, 0.125).unwrap(), 4);
        // a star with three arms of length 1: tips are 2 apart, so radius 0.6 needs a ball per arm
        let star = EdgeLengthGraph::from_edges(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        let star = subdivide(&star, 0.1).unwrap();
        assert_eq!(covering_number_exact(&star, 1.0).unwrap(), 1);
        assert_eq!(covering_number_exact(&star, 0.6).unwrap(), 3);
    }

    #[test]
    fn exact_never_exceeds_greedy() {
        let g = EdgeLengthGraph::from_edges(
            4,
            &[(0, 1, 1.0), (1, 2, 0.7), (2, 0, 1.3), (2, 3, 0.9), (3, 3, 0.6)],
        )
        .unwrap();
        let g = subdivide(&g, 0.08).unwrap();
        for r in [0.1, 0.2, 0.35, 0.5, 0.8] {
            assert!(covering_number_exact(&g, r).unwrap() <= covering_number_greedy(&g, r).unwrap());
        }
    }

    #[test]
    fn segment_slope_is_one() {
        let s = subdivide(&segment(1.0), 1e-4).unwrap();
        let fit = minkowski_slope(&s, &geometric_radii(0.05, 12)).unwrap();
        assert!((fit.slope - 1.0).abs() < 0.1, "{fit:?}");
    }

    #[test]
    fn grid_slope_is_two() {
        let k = 200;
        let mut g = EdgeLengthGraph::new(k * k);
        for i in 0..k {
            for j in 0..k {
                let v = i * k + j;
                if i + 1 < k {
                    g.add_edge(v, v + k, 1.0 / k as f64).unwrap();
                }
                if j + 1 < k {
                    g.add_edge(v, v + 1, 1.0 / k as f64).unwrap();
                }
            }
        }
        let fit = minkowski_slope(&g, &geometric_radii(0.3, 10)).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.2, "{fit:?}");
    }
}
