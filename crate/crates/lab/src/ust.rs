use mstlab_core::graph_process::Forest;
use mstlab_core::rng::rng_from_seed;
use mstlab_core::{Error, Result};
use rand::Rng;

/// Uniform spanning tree of `K_n` by the Aldous–Broder walk: run a simple
/// random walk until every vertex is visited, keeping the edge of first entry
/// into each vertex. Edge weights are set to 1.
pub fn aldous_broder_ust(n: usize, seed: u64) -> Result<Forest> {
    if n < 2 {
        return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut seen = vec![false; n];
    let mut cur = rng.random_range(0..n);
    seen[cur] = true;
    let mut edges = Vec::with_capacity(n - 1);
    while edges.len() + 1 < n {
        let mut next = rng.random_range(0..n - 1);
        if next >= cur {
            next += 1;
        }
        if !seen[next] {
            seen[next] = true;
            edges.push((cur, next, 1.0));
        }
        cur = next;
    }
    Forest::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn chi_square(n: usize, samples: u64) -> (f64, usize) {
        let mut counts: BTreeMap<Vec<(usize, usize)>, u64> = BTreeMap::new();
        for s in 0..samples {
            *counts.entry(aldous_broder_ust(n, s).unwrap().edge_set()).or_default() += 1;
        }
        // Cayley: n^(n-2) labelled trees
        let trees = n.pow(n as u32 - 2);
        let expect = samples as f64 / trees as f64;
        let stat = counts.values().map(|&c| (c as f64 - expect).powi(2) / expect).sum::<f64>()
            + (trees - counts.len()) as f64 * expect;
        (stat, trees)
    }

    #[test]
    fn uniform_on_three_and_four_vertices() {
        let (stat, trees) = chi_square(3, 10_000);
        assert_eq!(trees, 3);
        // 0.999 quantile of χ² with 2 degrees of freedom
        assert!(stat < 13.82, "χ² = {stat}");
        let (stat, trees) = chi_square(4, 32_000);
        assert_eq!(trees, 16);
        // 0.999 quantile of χ² with 15 degrees of freedom
        assert!(stat < 37.70, "χ² = {stat}");
    }

    #[test]
    fn always_spanning() {
        for s in 0..50 {
            let t = aldous_broder_ust(2 + s as usize, s).unwrap();
            assert!(t.is_spanning_tree());
            assert!(t.partition().iter().all(|&l| l == 0));
        }
        assert!(aldous_broder_ust(1, 0).is_err());
    }
}
