//! Cycle breaking.
//!
//! The discrete kernel `K` removes a uniform non-disconnecting edge; its
//! iterate `K^∞` ends in a spanning tree whose law is that of the minimum
//! spanning tree under exchangeable distinct weights. The continuum kernel
//! `𝒦` cuts a graph with edge lengths at a point sampled from the length
//! measure on its non-bridge edges.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use rand::Rng;

use crate::rgraph::{bridges, canonical_form, cut_at_point, EdgeLengthGraph, Multigraph};
use crate::{Error, Result, UnionFind};

/// Exact probability.
pub type Prob = Ratio<i128>;

/// A law over spanning trees, keyed by the ascending ids of the kept edges.
pub type TreeLaw = BTreeMap<Vec<usize>, Prob>;

const MST_ENUMERATION_CAP: usize = 9;
const RECURSION_CAP: usize = 24;

/// One step of `K`: removes a uniform non-bridge edge, or returns `g` for a tree.
pub fn k_step<R: Rng + ?Sized>(g: &Multigraph, rng: &mut R) -> Result<Multigraph> {
    g.require_connected()?;
    let b = bridges(g);
    let candidates: Vec<usize> = (0..g.num_edges()).filter(|&p| !b[p]).collect();
    let mut out = g.clone();
    if !candidates.is_empty() {
        let pos = candidates[rng.random_range(0..candidates.len())];
        out.remove_edge(g.edges()[pos].id)?;
    }
    Ok(out)
}

/// `K^∞`: applies `K` until a spanning tree remains.
pub fn k_infinity<R: Rng + ?Sized>(g: &Multigraph, rng: &mut R) -> Result<Multigraph> {
    let mut cur = g.clone();
    for _ in 0..(g.num_edges() + 1).saturating_sub(g.n()) {
        cur = k_step(&cur, rng)?;
    }
    Ok(cur)
}

fn kruskal_mask(g: &Multigraph, order: &[usize]) -> u32 {
    let mut uf = UnionFind::new(g.n());
    let mut mask = 0u32;
    for &pos in order {
        let e = g.edges()[pos];
        if uf.union(e.u, e.v) {
            mask |= 1 << pos;
        }
    }
    mask
}

fn mask_to_ids(g: &Multigraph, mask: u32) -> Vec<usize> {
    let mut ids: Vec<usize> =
        (0..g.num_edges()).filter(|&p| mask & (1 << p) != 0).map(|p| g.edges()[p].id).collect();
    ids.sort_unstable();
    ids
}

/// Law of the minimum spanning tree under uniformly random weight orderings,
/// by running Kruskal on all `|E|!` orders.
pub fn mst_law_exact(g: &Multigraph) -> Result<TreeLaw> {
    g.require_connected()?;
    let m = g.num_edges();
    if m > MST_ENUMERATION_CAP {
        return Err(Error::SizeCap(format!("{m} edges exceed the enumeration cap of {MST_ENUMERATION_CAP}")));
    }
    let mut counts: HashMap<u32, i128> = HashMap::new();
    let mut order: Vec<usize> = (0..m).collect();
    // Heap's algorithm
    let mut c = vec![0usize; m];
    *counts.entry(kruskal_mask(g, &order)).or_default() += 1;
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            *counts.entry(kruskal_mask(g, &order)).or_default() += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let total: i128 = (1..=m as i128).product();
    Ok(counts.into_iter().map(|(mask, k)| (mask_to_ids(g, mask), Prob::new(k, total))).collect())
}

fn non_bridges_in(g: &Multigraph, mask: u32) -> Vec<usize> {
    let mut sub = Multigraph::new(g.n());
    let positions: Vec<usize> = (0..g.num_edges()).filter(|&p| mask & (1 << p) != 0).collect();
    for &p in &positions {
        let e = g.edges()[p];
        sub.add_edge(e.u, e.v).expect("endpoints exist");
    }
    let b = bridges(&sub);
    positions.into_iter().zip(b).filter(|(_, br)| !br).map(|(p, _)| p).collect()
}

fn law_rec(g: &Multigraph, mask: u32, memo: &mut HashMap<u32, BTreeMap<u32, Prob>>) -> BTreeMap<u32, Prob> {
    if let Some(l) = memo.get(&mask) {
        return l.clone();
    }
    let candidates = non_bridges_in(g, mask);
    let law = if candidates.is_empty() {
        BTreeMap::from([(mask, Prob::from_integer(1))])
    } else {
        let w = Prob::new(1, candidates.len() as i128);
        let mut acc: BTreeMap<u32, Prob> = BTreeMap::new();
        for p in candidates {
            for (t, q) in law_rec(g, mask & !(1 << p), memo) {
                *acc.entry(t).or_insert_with(|| Prob::from_integer(0)) += q * w;
            }
        }
        acc
    };
    memo.insert(mask, law.clone());
    law
}

/// Exact law of `K^∞(g, ·)` by memoised recursion over the remaining edge set.
pub fn k_infinity_law_exact(g: &Multigraph) -> Result<TreeLaw> {
    g.require_connected()?;
    let m = g.num_edges();
    if m > RECURSION_CAP {
        return Err(Error::SizeCap(format!("{m} edges exceed the recursion cap of {RECURSION_CAP}")));
    }
    let full = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut memo = HashMap::new();
    Ok(law_rec(g, full, &mut memo).into_iter().map(|(mask, q)| (mask_to_ids(g, mask), q)).collect())
}

/// Total variation distance between an exact law and empirical counts.
pub fn tv_to_law(law: &TreeLaw, counts: &BTreeMap<Vec<usize>, u64>) -> f64 {
    let total: u64 = counts.values().sum();
    let to_f = |q: &Prob| *q.numer() as f64 / *q.denom() as f64;
    let mut tv = 0.0;
    for (k, q) in law {
        let emp = counts.get(k).copied().unwrap_or(0) as f64 / total as f64;
        tv += (to_f(q) - emp).abs();
    }
    for (k, &c) in counts {
        if !law.contains_key(k) {
            tv += c as f64 / total as f64;
        }
    }
    tv / 2.0
}

/// Samples the cut point of `𝒦`: a non-bridge edge with probability
/// proportional to its length, and a uniform interior offset. `None` for trees.
pub fn sample_cut_point<R: Rng + ?Sized>(g: &EdgeLengthGraph, rng: &mut R) -> Result<Option<(usize, f64)>> {
    g.graph().require_connected()?;
    let b = bridges(g.graph());
    let total: f64 = g.lengths().iter().zip(&b).filter(|(_, br)| !**br).map(|(l, _)| l).sum();
    if total == 0.0 {
        return Ok(None);
    }
    let candidates: Vec<usize> = (0..b.len()).filter(|&p| !b[p]).collect();
    let mut x = rng.random::<f64>() * total;
    let mut pos = *candidates.last().expect("a positive conn length has a candidate");
    for &p in &candidates {
        if x < g.lengths()[p] {
            pos = p;
            break;
        }
        x -= g.lengths()[p];
    }
    let len = g.lengths()[pos];
    loop {
        let t = rng.random::<f64>() * len;
        if t > 0.0 && t < len {
            return Ok(Some((g.edges()[pos].id, t)));
        }
    }
}

/// One step of `𝒦`.
pub fn continuum_k_step<R: Rng + ?Sized>(g: &EdgeLengthGraph, rng: &mut R) -> Result<EdgeLengthGraph> {
    match sample_cut_point(g, rng)? {
        Some((id, t)) => cut_at_point(g, id, t),
        None => Ok(g.clone()),
    }
}

#[derive(Debug, Clone)]
pub struct CutStep {
    /// Edge id in the graph before this step.
    pub edge: usize,
    pub t: f64,
    /// The same point in the input graph: original edge id and offset from its `u` end.
    pub origin: (usize, f64),
    /// Surplus left after this step.
    pub surplus: usize,
}

/// The points removed by `𝒦^∞`, one step per unit of surplus.
#[derive(Debug, Clone, Default)]
pub struct CutTrace {
    pub steps: Vec<CutStep>,
}

/// `cut(X)`: applies `𝒦` until no cycle is left.
pub fn cut<R: Rng + ?Sized>(g: &EdgeLengthGraph, rng: &mut R) -> Result<(EdgeLengthGraph, CutTrace)> {
    g.graph().require_connected()?;
    // current edge id -> (original edge id, offset of its u end along the original)
    let mut origin: HashMap<usize, (usize, f64)> = g.edges().iter().map(|e| (e.id, (e.id, 0.0))).collect();
    let mut cur = g.clone();
    let mut trace = CutTrace::default();
    while let Some((id, t)) = sample_cut_point(&cur, rng)? {
        let next_id = cur.graph().next_id();
        let next = cut_at_point(&cur, id, t)?;
        let (orig, start) = origin[&id];
        origin.insert(next_id, (orig, start + t));
        let left = next.graph().num_edges() + 1 - next.n();
        trace.steps.push(CutStep { edge: id, t, origin: (orig, start + t), surplus: left });
        cur = next;
    }
    Ok((cur, trace))
}

/// All connected multigraphs with at most `max_edges` edges, one per
/// isomorphism class, in order of edge count.
pub fn connected_multigraphs(max_edges: usize) -> Vec<Multigraph> {
    let mut all = vec![Multigraph::new(1)];
    let mut level = vec![Multigraph::new(1)];
    for _ in 0..max_edges {
        let mut seen = BTreeMap::new();
        for g in &level {
            let n = g.n();
            let mut push = |h: Multigraph| {
                seen.entry(canonical_form(&h)).or_insert(h);
            };
            for u in 0..n {
                for v in u..n {
                    let mut h = g.clone();
                    h.add_edge(u, v).expect("endpoints exist");
                    push(h);
                }
                let mut h = g.clone();
                let w = h.add_vertex();
                h.add_edge(u, w).expect("endpoints exist");
                push(h);
            }
        }
        level = seen.into_values().collect();
        all.extend(level.iter().cloned());
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rgraph::{conn_length, surplus};
    use crate::rng::rng_from_seed;

    fn theta() -> Multigraph {
        Multigraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    fn figure_eight() -> Multigraph {
        Multigraph::from_pairs(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn k_step_on_tree_is_identity() {
        let t = Multigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let mut rng = rng_from_seed(1);
        assert_eq!(k_step(&t, &mut rng).unwrap(), t);
        assert_eq!(k_infinity(&t, &mut rng).unwrap(), t);
        assert!(k_step(&Multigraph::from_pairs(3, &[(0, 1)]).unwrap(), &mut rng).is_err());
    }

    #[test]
    fn theta_laws_are_uniform() {
        let third = Prob::new(1, 3);
        let mst = mst_law_exact(&theta()).unwrap();
        assert_eq!(mst.len(), 3);
        assert!(mst.values().all(|q| *q == third));
        assert_eq!(k_infinity_law_exact(&theta()).unwrap(), mst);
    }

    #[test]
    fn triangle_law_is_uniform() {
        let tri = Multigraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let law = mst_law_exact(&tri).unwrap();
        assert_eq!(law.len(), 3);
        assert!(law.values().all(|q| *q == Prob::new(1, 3)));
    }

    #[test]
    fn figure_eight_law_is_product_of_triangles() {
        let law = mst_law_exact(&figure_eight()).unwrap();
        assert_eq!(law.len(), 9);
        assert!(law.values().all(|q| *q == Prob::new(1, 9)));
    }

    #[test]
    fn enumeration_cap() {
        let big = Multigraph::from_pairs(2, &[(0, 1); 10]).unwrap();
        assert!(matches!(mst_law_exact(&big), Err(Error::SizeCap(_))));
        assert!(k_infinity_law_exact(&big).is_ok());
    }

    #[test]
    fn exhaustive_small_graph_counts() {
        // connected multigraphs with loops: 1, 2, 4, 11 classes with 0..=3 edges
        let all = connected_multigraphs(3);
        let by_edges: Vec<usize> = (0..=3).map(|m| all.iter().filter(|g| g.num_edges() == m).count()).collect();
        assert_eq!(by_edges, vec![1, 2, 4, 11]);
    }

    #[test]
    fn k_infinity_matches_mst_law_up_to_four_edges() {
        for g in connected_multigraphs(4) {
            assert_eq!(k_infinity_law_exact(&g).unwrap(), mst_law_exact(&g).unwrap());
        }
    }

    #[test]
    fn continuum_step_respects_lengths() {
        let g = EdgeLengthGraph::from_edges(2, &[(0, 1, 1.0), (0, 1, 2.0), (0, 1, 3.0)]).unwrap();
        let mut rng = rng_from_seed(5);
        let mut hits = [0u32; 3];
        let n = 60_000;
        for _ in 0..n {
            let (id, t) = sample_cut_point(&g, &mut rng).unwrap().unwrap();
            assert!(t > 0.0 && t < g.length_of(id).unwrap());
            hits[id] += 1;
        }
        for (k, h) in hits.iter().enumerate() {
            let p = (k + 1) as f64 / 6.0;
            assert!((*h as f64 / n as f64 - p).abs() < 0.01);
        }
    }

    #[test]
    fn cut_trace_records_every_unit_of_surplus() {
        let g = EdgeLengthGraph::from_edges(
            4,
            &[(0, 1, 1.0), (1, 2, 1.5), (2, 0, 0.5), (0, 3, 2.0), (3, 1, 1.0), (2, 2, 0.7)],
        )
        .unwrap();
        let mut rng = rng_from_seed(9);
        for _ in 0..200 {
            let (c, trace) = cut(&g, &mut rng).unwrap();
            assert_eq!(trace.steps.len(), 3);
            assert_eq!(surplus(c.graph()).unwrap(), 0);
            assert_eq!(conn_length(&c).unwrap(), 0.0);
            for (i, step) in trace.steps.iter().enumerate() {
                assert_eq!(step.surplus, 2 - i);
                let (orig, off) = step.origin;
                assert!(off > 0.0 && off < g.length_of(orig).unwrap());
            }
            assert!((c.total_length() - g.total_length()).abs() < 1e-12);
        }
    }
}
