//! The weight-coupled random graph process on `K_n`.
//!
//! Every edge of the complete graph carries an i.i.d. Uniform(0,1] weight.
//! Keeping the edges of weight at most `p` gives `G(n, p)`; running Kruskal on
//! the same edges gives the minimum spanning forest `M(n, p)`, whose edges are
//! exactly the MST edges of weight at most `p`. Both share their component
//! vertex sets.
//!
//! Two regimes are supported. Window studies materialise only the edges below
//! a threshold `p_max` ([`sample_window`], [`sample_threshold`]) and scale to
//! `n = 10^7`. Exact full-MST work uses implicit counter-based weights
//! ([`prim_mst`]) in `O(n)` memory and `O(n^2)` time, practical up to
//! `n ≈ 3×10^4`; [`sparse_mst`] reaches larger `n` by growing the threshold
//! until the forest spans.

use rand::seq::index;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::rng::{edge_key, key_to_unit, rng_from_seed, split_seed, LabRng};
use crate::{Error, Result, UnionFind};

/// Number of edges of `K_n`.
#[inline]
pub fn num_pairs(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

#[inline]
fn row_start(i: u64, n: u64) -> u64 {
    // pairs (i', j) with i' < i
    i * (2 * n - i - 1) / 2
}

/// Lexicographic index of the pair `i < j` among the edges of `K_n`.
pub fn pair_to_index(i: usize, j: usize, n: usize) -> Result<u64> {
    if i >= j || j >= n {
        return Err(Error::Domain(format!("need 0 <= i < j < n, got ({i}, {j}) with n = {n}")));
    }
    let (i, j, n) = (i as u64, j as u64, n as u64);
    Ok(row_start(i, n) + (j - i - 1))
}

/// Inverse of [`pair_to_index`].
pub fn edge_index_to_pair(k: u64, n: usize) -> Result<(usize, usize)> {
    let total = num_pairs(n);
    if k >= total {
        return Err(Error::Domain(format!("edge index {k} out of range for K_{n} ({total} edges)")));
    }
    let nn = n as u64;
    // Solve row_start(i) <= k for the largest i, starting from the float estimate.
    let b = 2.0 * nn as f64 - 1.0;
    let disc = (b * b - 8.0 * k as f64).max(0.0);
    let mut i = (((b - disc.sqrt()) / 2.0).floor() as u64).min(nn - 2);
    while i > 0 && row_start(i, nn) > k {
        i -= 1;
    }
    while i + 1 < nn - 1 && row_start(i + 1, nn) <= k {
        i += 1;
    }
    let j = i + 1 + (k - row_start(i, nn));
    Ok((i as usize, j as usize))
}

/// `p = 1/n + λ n^{-4/3}`.
#[inline]
pub fn window_p(n: usize, lambda: f64) -> f64 {
    let nf = n as f64;
    1.0 / nf + lambda * nf.powf(-4.0 / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEdge {
    pub index: u64,
    pub weight: f64,
}

/// The edges of `K_n` whose weight does not exceed `p_max`, sorted by weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEdgeList {
    n: usize,
    p_max: f64,
    seed: u64,
    entries: Vec<WeightedEdge>,
}

impl WeightedEdgeList {
    /// Builds a list from explicit entries; sorts them and checks the invariants.
    pub fn from_entries(n: usize, p_max: f64, seed: u64, mut entries: Vec<WeightedEdge>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
        }
        if !(p_max > 0.0 && p_max <= 1.0) {
            return Err(Error::Parameter(format!("p_max must lie in (0, 1], got {p_max}")));
        }
        let total = num_pairs(n);
        entries.sort_by(|a, b| a.weight.total_cmp(&b.weight));
        for e in &entries {
            if e.index >= total {
                return Err(Error::Domain(format!("edge index {} out of range", e.index)));
            }
            if !(e.weight > 0.0 && e.weight <= p_max) {
                return Err(Error::Domain(format!("weight {} outside (0, {p_max}]", e.weight)));
            }
        }
        if entries.windows(2).any(|w| w[0].weight >= w[1].weight) {
            return Err(Error::Domain("edge weights must be distinct".into()));
        }
        let mut idx: Vec<u64> = entries.iter().map(|e| e.index).collect();
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("duplicate edge index".into()));
        }
        Ok(WeightedEdgeList { n, p_max, seed, entries })
    }

    /// All edges of `K_n` with the counter-based weights of `seed`.
    ///
    /// These are the weights [`prim_mst`] sees, so Kruskal on this list and
    /// Prim agree edge for edge.
    pub fn complete(n: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
        }
        let mut keyed = Vec::with_capacity(num_pairs(n) as usize);
        for i in 0..n {
            for j in i + 1..n {
                let key = edge_key(seed, i as u32, j as u32);
                keyed.push((key, pair_to_index(i, j, n)?));
            }
        }
        keyed.sort_unstable();
        let entries = keyed
            .into_iter()
            .map(|(key, index)| WeightedEdge { index, weight: key_to_unit(key) })
            .collect();
        Self::from_entries(n, 1.0, seed, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn entries(&self) -> &[WeightedEdge] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries with weight at most `p` (a prefix of the sorted list).
    pub fn below(&self, p: f64) -> &[WeightedEdge] {
        let cut = self.entries.partition_point(|e| e.weight <= p);
        &self.entries[..cut]
    }

    pub fn endpoints(&self, e: &WeightedEdge) -> (usize, usize) {
        edge_index_to_pair(e.index, self.n).expect("indices validated on construction")
    }

    fn check_threshold(&self, p: f64) -> Result<()> {
        if !(p > 0.0) {
            return Err(Error::Parameter(format!("threshold must be positive, got {p}")));
        }
        if p > self.p_max {
            return Err(Error::OutOfCoupling { p, p_max: self.p_max });
        }
        Ok(())
    }

    /// Raises the threshold to `p_new`, adding the edges with weight in
    /// `(p_max, p_new]`. The result is an exact sample of the process up to
    /// `p_new`, consistent with `self` below `p_max`.
    pub fn extend_to(&self, p_new: f64) -> Result<Self> {
        if !(p_new > self.p_max && p_new <= 1.0) {
            return Err(Error::Parameter(format!("new threshold {p_new} must lie in ({}, 1]", self.p_max)));
        }
        let mut rng = rng_from_seed(split_seed(self.seed, p_new.to_bits()));
        let total = num_pairs(self.n);
        let absent = total - self.entries.len() as u64;
        let q = if self.p_max >= 1.0 { 0.0 } else { ((p_new - self.p_max) / (1.0 - self.p_max)).min(1.0) };
        let count = binomial(&mut rng, absent, q)?;
        // Draw ranks among the absent edges, then translate ranks into indices.
        let mut ranks: Vec<u64> = index::sample(&mut rng, absent as usize, count as usize)
            .into_iter()
            .map(|r| r as u64)
            .collect();
        ranks.sort_unstable();
        let mut present: Vec<u64> = self.entries.iter().map(|e| e.index).collect();
        present.sort_unstable();
        let mut added = Vec::with_capacity(ranks.len());
        let mut skipped = 0usize;
        for r in ranks {
            // index = r + #present indices <= index
            let mut idx = r + skipped as u64;
            while skipped < present.len() && present[skipped] <= idx {
                skipped += 1;
                idx = r + skipped as u64;
            }
            added.push(idx);
        }
        let lo = self.p_max;
        let mut fresh = draw_weights(&mut rng, added, |u| lo + (p_new - lo) * (1.0 - u));
        let mut entries = self.entries.clone();
        entries.append(&mut fresh);
        Self::from_entries(self.n, p_new, self.seed, entries)
    }
}

fn binomial(rng: &mut LabRng, trials: u64, p: f64) -> Result<u64> {
    if trials == 0 || p <= 0.0 {
        return Ok(0);
    }
    if p >= 1.0 {
        return Ok(trials);
    }
    let dist = Binomial::new(trials, p).map_err(|e| Error::Parameter(e.to_string()))?;
    Ok(dist.sample(rng))
}

/// Attaches i.i.d. weights `transform(U)` to the given indices and sorts by
/// weight. Exact ties (probability ~ count²/2^53) are redrawn.
fn draw_weights(rng: &mut LabRng, indices: Vec<u64>, transform: impl Fn(f64) -> f64) -> Vec<WeightedEdge> {
    let mut entries: Vec<WeightedEdge> = indices
        .into_iter()
        .map(|index| WeightedEdge { index, weight: transform(rng.random::<f64>()) })
        .collect();
    loop {
        entries.sort_by(|a, b| a.weight.total_cmp(&b.weight));
        let mut tied = false;
        for k in 1..entries.len() {
            if entries[k].weight == entries[k - 1].weight {
                entries[k].weight = transform(rng.random::<f64>());
                tied = true;
            }
        }
        if !tied {
            return entries;
        }
    }
}

/// Samples every edge of `K_n` independently with probability `p_max`, with
/// weight Uniform(0, p_max].
///
/// Draws a Binomial edge count and then that many distinct indices, so the
/// work is proportional to the expected number of edges.
pub fn sample_threshold(n: usize, p_max: f64, seed: u64) -> Result<WeightedEdgeList> {
    if n < 2 {
        return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
    }
    if !(p_max > 0.0 && p_max <= 1.0) {
        return Err(Error::Parameter(format!("threshold p_max must lie in (0, 1], got {p_max}")));
    }
    let mut rng = rng_from_seed(seed);
    let total = num_pairs(n);
    let count = binomial(&mut rng, total, p_max)?;
    let indices: Vec<u64> = index::sample(&mut rng, total as usize, count as usize)
        .into_iter()
        .map(|k| k as u64)
        .collect();
    let entries = draw_weights(&mut rng, indices, |u| p_max * (1.0 - u));
    WeightedEdgeList::from_entries(n, p_max, seed, entries)
}

/// Samples the process on `K_n` up to `p_max = 1/n + lambda_max · n^{-4/3}`.
pub fn sample_window(n: usize, lambda_max: f64, seed: u64) -> Result<WeightedEdgeList> {
    if n < 2 {
        return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
    }
    let p_max = window_p(n, lambda_max);
    if p_max > 1.0 || p_max <= 0.0 {
        return Err(Error::Parameter(format!(
            "window threshold 1/n + λ n^(-4/3) = {p_max} is not in (0, 1] (n = {n}, λ = {lambda_max})"
        )));
    }
    sample_threshold(n, p_max, seed)
}

/// A spanning forest of `K_n` (vertices `0..n`).
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    labels: Vec<usize>,
}

impl Forest {
    fn new(n: usize, edges: Vec<(usize, usize, f64)>, uf: &mut UnionFind) -> Self {
        let labels = uf.min_labels();
        Forest { n, edges, labels }
    }

    /// Builds a forest from explicit edges; fails if they contain a cycle.
    pub fn from_edges(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut uf = UnionFind::new(n);
        for &(u, v, _) in &edges {
            if u >= n || v >= n {
                return Err(Error::Domain(format!("vertex out of range in edge ({u}, {v})")));
            }
            if !uf.union(u, v) {
                return Err(Error::Domain("edges contain a cycle".into()));
            }
        }
        Ok(Forest::new(n, edges, &mut uf))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges in insertion order as `(u, v, weight)`.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Sorted list of normalised `(min, max)` endpoint pairs.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut s: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v, _)| (u.min(v), u.max(v))).collect();
        s.sort_unstable();
        s
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn num_components(&self) -> usize {
        self.n - self.edges.len()
    }

    /// Each vertex mapped to the smallest vertex of its component.
    pub fn partition(&self) -> &[usize] {
        &self.labels
    }

    pub fn is_spanning_tree(&self) -> bool {
        self.edges.len() + 1 == self.n
    }

    pub fn components(&self) -> ComponentSequence {
        let edges: Vec<(usize, usize, f64)> = self.edges.clone();
        ComponentSequence::from_edges(self.n, &edges)
    }
}

/// Kruskal's algorithm on the edges of weight at most `p`: the minimum
/// spanning forest `M(n, p)`.
pub fn kruskal_forest(wel: &WeightedEdgeList, p: f64) -> Result<Forest> {
    wel.check_threshold(p)?;
    let n = wel.n;
    let mut uf = UnionFind::new(n);
    let mut edges = Vec::new();
    for e in wel.below(p) {
        let (u, v) = wel.endpoints(e);
        if uf.union(u, v) {
            edges.push((u, v, e.weight));
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    Ok(Forest::new(n, edges, &mut uf))
}

/// Prim's algorithm on `K_n` with the implicit weights of `seed`.
///
/// `O(n^2)` time and `O(n)` memory: weights are recomputed from
/// [`edge_key`] rather than stored.
pub fn prim_mst(n: usize, seed: u64) -> Result<Forest> {
    if n < 2 {
        return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
    }
    if n > u32::MAX as usize {
        return Err(Error::Parameter("n exceeds 2^32".into()));
    }
    let mut best = vec![u64::MAX; n];
    let mut from = vec![0u32; n];
    let mut in_tree = vec![false; n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut uf = UnionFind::new(n);
    let mut current = 0usize;
    in_tree[0] = true;
    for _ in 1..n {
        let c = current as u32;
        let mut next = usize::MAX;
        let mut next_key = u64::MAX;
        for w in 0..n {
            if in_tree[w] {
                continue;
            }
            let k = edge_key(seed, c, w as u32);
            if k < best[w] {
                best[w] = k;
                from[w] = c;
            }
            if best[w] < next_key || (best[w] == next_key && w < next) {
                next_key = best[w];
                next = w;
            }
        }
        in_tree[next] = true;
        let u = from[next] as usize;
        edges.push((u, next, key_to_unit(next_key)));
        uf.union(u, next);
        current = next;
    }
    Ok(Forest::new(n, edges, &mut uf))
}

/// Minimum spanning tree of `K_n` with i.i.d. uniform weights, for `n` beyond
/// the reach of [`prim_mst`].
///
/// Samples the edges below `2 ln n / n` and runs Kruskal; if the forest does
/// not span, the threshold is doubled with [`WeightedEdgeList::extend_to`].
/// The MST edges all lie below the final threshold, so the output is the
/// exact MST of the sampled weights.
pub fn sparse_mst(n: usize, seed: u64) -> Result<Forest> {
    if n < 2 {
        return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
    }
    let nf = n as f64;
    let mut p = (2.0 * nf.ln().max(1.0) / nf).min(1.0);
    let mut wel = sample_threshold(n, p, seed)?;
    loop {
        let forest = kruskal_forest(&wel, p)?;
        if forest.is_spanning_tree() {
            return Ok(forest);
        }
        p = (2.0 * p).min(1.0);
        wel = wel.extend_to(p)?;
    }
}

/// Connected components in canonical order: decreasing size, ties broken by
/// increasing smallest vertex label. Stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSequence {
    n: usize,
    vertex_offsets: Vec<usize>,
    vertices: Vec<usize>,
    edge_offsets: Vec<usize>,
    edges: Vec<(usize, usize, f64)>,
}

impl ComponentSequence {
    /// Components of the graph on `0..n` with the given edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut uf = UnionFind::new(n);
        for &(u, v, _) in edges {
            uf.union(u, v);
        }
        let labels = uf.min_labels();
        // component id per min label
        let mut size_of_label = vec![0usize; n];
        for &l in &labels {
            size_of_label[l] += 1;
        }
        let mut order: Vec<usize> = (0..n).filter(|&v| labels[v] == v).collect();
        order.sort_by(|&a, &b| size_of_label[b].cmp(&size_of_label[a]).then(a.cmp(&b)));
        let mut comp_of_label = vec![usize::MAX; n];
        for (c, &l) in order.iter().enumerate() {
            comp_of_label[l] = c;
        }
        let k = order.len();
        let mut vertex_offsets = vec![0usize; k + 1];
        for (c, &l) in order.iter().enumerate() {
            vertex_offsets[c + 1] = vertex_offsets[c] + size_of_label[l];
        }
        let mut fill = vertex_offsets.clone();
        let mut vertices = vec![0usize; n];
        for v in 0..n {
            let c = comp_of_label[labels[v]];
            vertices[fill[c]] = v;
            fill[c] += 1;
        }
        let mut edge_count = vec![0usize; k];
        for &(u, _, _) in edges {
            edge_count[comp_of_label[labels[u]]] += 1;
        }
        let mut edge_offsets = vec![0usize; k + 1];
        for c in 0..k {
            edge_offsets[c + 1] = edge_offsets[c] + edge_count[c];
        }
        let mut fill = edge_offsets.clone();
        let mut flat = vec![(0usize, 0usize, 0.0f64); edges.len()];
        for &e in edges {
            let c = comp_of_label[labels[e.0]];
            flat[fill[c]] = e;
            fill[c] += 1;
        }
        ComponentSequence { n, vertex_offsets, vertices, edge_offsets, edges: flat }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vertex_offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Vertices of component `i`, ascending.
    pub fn vertices(&self, i: usize) -> &[usize] {
        &self.vertices[self.vertex_offsets[i]..self.vertex_offsets[i + 1]]
    }

    /// Edges of component `i` as `(u, v, weight)`.
    pub fn edges(&self, i: usize) -> &[(usize, usize, f64)] {
        &self.edges[self.edge_offsets[i]..self.edge_offsets[i + 1]]
    }

    pub fn size(&self, i: usize) -> usize {
        self.vertex_offsets[i + 1] - self.vertex_offsets[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.size(i)).collect()
    }

    /// `|E| - |V| + 1` of component `i`.
    pub fn surplus(&self, i: usize) -> usize {
        (self.edges(i).len() + 1) - self.size(i)
    }
}

/// Components of the minimum spanning forest at `p = 1/n + λ n^{-4/3}`.
pub fn msf_components(wel: &WeightedEdgeList, lambda: f64) -> Result<ComponentSequence> {
    let p = window_p(wel.n, lambda);
    Ok(kruskal_forest(wel, p)?.components())
}

/// Components of the graph with every sampled edge of weight at most `p`.
pub fn threshold_components(wel: &WeightedEdgeList, p: f64) -> Result<ComponentSequence> {
    wel.check_threshold(p)?;
    let edges: Vec<(usize, usize, f64)> = wel
        .below(p)
        .iter()
        .map(|e| {
            let (u, v) = wel.endpoints(e);
            (u, v, e.weight)
        })
        .collect();
    Ok(ComponentSequence::from_edges(wel.n, &edges))
}

/// Components of `G(n, 1/n + λ n^{-4/3})`, cycle edges included.
pub fn gnp_components(n: usize, lambda: f64, seed: u64) -> Result<ComponentSequence> {
    let wel = sample_window(n, lambda, seed)?;
    threshold_components(&wel, wel.p_max())
}
