use mstlab_core::graph_process::{
    kruskal_forest, pair_to_index, prim_mst, sample_threshold, threshold_components, WeightedEdge,
    WeightedEdgeList,
};
use mstlab_core::rng::rng_from_seed;
use mstlab_core::UnionFind;
use rand::Rng;

/// Minimum-weight spanning tree by enumerating every `(n-1)`-subset of edges.
fn brute_force_mst(n: usize, edges: &[(usize, usize, f64)]) -> Vec<(usize, usize)> {
    let m = edges.len();
    let k = n - 1;
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let mut uf = UnionFind::new(n);
        if pick.iter().all(|&i| uf.union(edges[i].0, edges[i].1)) {
            let w: f64 = pick.iter().map(|&i| edges[i].2).sum();
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, pick.clone()));
            }
        }
        // next k-combination of 0..m
        let mut i = k;
        while i > 0 && pick[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        pick[i - 1] += 1;
        for j in i..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    let mut out: Vec<(usize, usize)> = best.unwrap().1.iter().map(|&i| (edges[i].0, edges[i].1)).collect();
    out.sort_unstable();
    out
}

fn all_edges(wel: &WeightedEdgeList) -> Vec<(usize, usize, f64)> {
    wel.entries()
        .iter()
        .map(|e| {
            let (u, v) = wel.endpoints(e);
            (u, v, e.weight)
        })
        .collect()
}

#[test]
fn kruskal_matches_enumeration() {
    let mut rng = rng_from_seed(101);
    for trial in 0..300 {
        let n = 2 + trial % 6;
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                entries.push(WeightedEdge { index: pair_to_index(i, j, n).unwrap(), weight: rng.random_range(1e-9..1.0) });
            }
        }
        let wel = WeightedEdgeList::from_entries(n, 1.0, 0, entries).unwrap();
        let expect = brute_force_mst(n, &all_edges(&wel));
        assert_eq!(kruskal_forest(&wel, 1.0).unwrap().edge_set(), expect, "trial {trial}");
    }
}

#[test]
fn prim_matches_enumeration() {
    for seed in 0..300u64 {
        let n = 2 + (seed as usize) % 6;
        let wel = WeightedEdgeList::complete(n, seed).unwrap();
        let expect = brute_force_mst(n, &all_edges(&wel));
        assert_eq!(prim_mst(n, seed).unwrap().edge_set(), expect, "seed {seed}");
    }
}

#[test]
fn forest_and_graph_share_components() {
    for seed in 0..10u64 {
        let n = 200;
        let wel = sample_threshold(n, 1.0, seed).unwrap();
        let mst = kruskal_forest(&wel, 1.0).unwrap();
        for step in 1..=20 {
            let p = step as f64 * 0.0005;
            let forest = kruskal_forest(&wel, p).unwrap();
            let graph = threshold_components(&wel, p).unwrap();
            assert_eq!(forest.components().sizes(), graph.sizes());
            for i in 0..graph.len() {
                assert_eq!(forest.components().vertices(i), graph.vertices(i));
            }
            let mut below: Vec<(usize, usize)> =
                mst.edges().iter().filter(|e| e.2 <= p).map(|&(u, v, _)| (u.min(v), u.max(v))).collect();
            below.sort_unstable();
            assert_eq!(forest.edge_set(), below);
        }
    }
}
