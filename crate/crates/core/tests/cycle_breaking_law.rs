use std::collections::BTreeMap;

use mstlab_core::cycle_breaking::{connected_multigraphs, k_infinity, k_infinity_law_exact, mst_law_exact, tv_to_law};
use mstlab_core::rgraph::Multigraph;
use mstlab_core::rng::rng_from_seed;

#[test]
fn class_counts() {
    let counts: Vec<usize> =
        (0..=4).map(|m| connected_multigraphs(4).iter().filter(|g| g.num_edges() == m).count()).collect();
    // connected multigraphs with loops allowed, by number of edges (brute force over labelled edge multisets)
    assert_eq!(counts, vec![1, 2, 4, 11, 30]);
}

#[test]
fn cycle_breaking_law_is_mst_law_up_to_six_edges() {
    let all = connected_multigraphs(6);
    assert!(all.len() > 200);
    for g in &all {
        assert_eq!(k_infinity_law_exact(g).unwrap(), mst_law_exact(g).unwrap(), "{g:?}");
    }
}

#[test]
fn sampled_k_infinity_on_the_figure_eight_with_a_chord() {
    let g = Multigraph::from_pairs(3, &[(0, 0), (0, 1), (1, 2), (2, 0), (1, 2), (2, 2)]).unwrap();
    let law = mst_law_exact(&g).unwrap();
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut rng = rng_from_seed(5);
    for _ in 0..40_000 {
        let t = k_infinity(&g, &mut rng).unwrap();
        let mut ids: Vec<usize> = t.edges().iter().map(|e| e.id).collect();
        ids.sort_unstable();
        *counts.entry(ids).or_default() += 1;
    }
    assert!(tv_to_law(&law, &counts) < 0.02);
}
