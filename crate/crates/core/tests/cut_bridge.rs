use std::collections::BTreeMap;

use mstlab_core::cycle_breaking::{cut, mst_law_exact, tv_to_law};
use mstlab_core::rgraph::{graph_of, is_isomorphic, EdgeLengthGraph};
use mstlab_core::rng::rng_from_seed;

/// A theta with lengths 1, 2, 2, one of the long edges split at a real point,
/// and a pendant path of length 1.5 at a branch point.
fn integer_theta() -> EdgeLengthGraph {
    EdgeLengthGraph::from_edges(
        5,
        &[(0, 1, 1.0), (0, 1, 2.0), (0, 2, 0.37), (2, 1, 1.63), (1, 3, 0.9), (3, 4, 0.6)],
    )
    .unwrap()
}

#[test]
fn graph_of_integer_theta() {
    let g = graph_of(&integer_theta()).unwrap();
    // 1 + 2 + 2 unit edges in the core, one on the pendant path
    assert_eq!(g.graph.num_edges(), 6);
    assert_eq!(g.graph.n(), 5);
}

#[test]
fn cut_lands_on_a_spanning_tree_with_the_mst_law() {
    let x = integer_theta();
    let gx = graph_of(&x).unwrap();
    let law = mst_law_exact(&gx.graph).unwrap();
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut rng = rng_from_seed(2024);
    for _ in 0..20_000 {
        let (c, trace) = cut(&x, &mut rng).unwrap();
        let mut kept = gx.graph.clone();
        for step in &trace.steps {
            let (edge, offset) = step.origin;
            let id = gx.locate(edge, offset).expect("cut points avoid v(X)");
            kept.remove_edge(id).unwrap();
        }
        assert!(is_isomorphic(&graph_of(&c).unwrap().graph, &kept));
        let mut ids: Vec<usize> = kept.edges().iter().map(|e| e.id).collect();
        ids.sort_unstable();
        *counts.entry(ids).or_default() += 1;
    }
    assert!(law.keys().all(|t| t.len() + 1 == gx.graph.n()));
    let tv = tv_to_law(&law, &counts);
    assert!(tv < 0.02, "tv {tv}");
}
