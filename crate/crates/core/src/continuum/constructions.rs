//! Two descriptions of the largest component of `𝒢_λ` given its mass `σ`,
//! surplus `k` and kernel `K` (3-regular with `3k - 3` edges).

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use super::{sample_crt, ContinuumComponent};
use crate::rgraph::{glue, EdgeLengthGraph, Multigraph};
use crate::rng::{rng_from_seed, split_seed};
use crate::{Error, Result};

/// Dirichlet sample by normalising independent Gamma(`alpha`, 1) variables.
pub fn dirichlet<R: Rng + ?Sized>(alpha: f64, dim: usize, rng: &mut R) -> Vec<f64> {
    let g: Vec<f64> = if alpha == 1.0 {
        (0..dim).map(|_| Exp1.sample(rng)).collect()
    } else {
        let gamma = Gamma::new(alpha, 1.0).expect("positive shape");
        (0..dim).map(|_| gamma.sample(rng)).collect()
    };
    let total: f64 = g.iter().sum();
    g.into_iter().map(|x| x / total).collect()
}

fn check_kernel(k: usize, kernel: &Multigraph) -> Result<()> {
    if k < 2 {
        return Err(Error::Parameter(format!("surplus must be at least 2, got {k}")));
    }
    if kernel.n() != 2 * (k - 1) || kernel.num_edges() != 3 * k - 3 || kernel.degrees().iter().any(|&d| d != 3) {
        return Err(Error::NotThreeRegular);
    }
    if !kernel.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Construction 1: `Γ ~ Gamma((3k-2)/2, rate 1/2)`, `Y ~ Dirichlet(1, …, 1)`,
/// edge `j` of `K` gets length `Y_j √(σΓ)`.
pub fn construction1_core(sigma: f64, k: usize, kernel: &Multigraph, seed: u64) -> Result<EdgeLengthGraph> {
    check_kernel(k, kernel)?;
    if !(sigma > 0.0) {
        return Err(Error::Parameter(format!("mass must be positive, got {sigma}")));
    }
    let mut rng = rng_from_seed(seed);
    let gamma: f64 = Gamma::new((3 * k - 2) as f64 / 2.0, 2.0).expect("valid gamma").sample(&mut rng);
    let y = dirichlet(1.0, 3 * k - 3, &mut rng);
    let total = (sigma * gamma).sqrt();
    EdgeLengthGraph::from_multigraph(kernel.clone(), y.into_iter().map(|yj| yj * total).collect())
}

/// Construction 2: `X ~ Dirichlet(1/2, …, 1/2)`, independent CRTs of masses
/// `σX_i` on `⌈1/h⌉` grid steps each, two mass-measure points per tree as
/// the ends of edge `i` of `K`, glued along `K`. A pair of points landing
/// on the same grid vertex is redrawn.
///
/// Seeds: Dirichlet and point choices use stream 0, tree `i` uses stream `i + 1`.
pub fn construction2_component(
    sigma: f64,
    k: usize,
    kernel: &Multigraph,
    h: f64,
    seed: u64,
) -> Result<ContinuumComponent> {
    check_kernel(k, kernel)?;
    if !(sigma > 0.0) {
        return Err(Error::Parameter(format!("mass must be positive, got {sigma}")));
    }
    let mut rng = rng_from_seed(split_seed(seed, 0));
    let x = dirichlet(0.5, 3 * k - 3, &mut rng);
    let mut union = EdgeLengthGraph::new(0);
    // ends[kernel vertex] = vertices of the union glued into it
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); kernel.n()];
    for (i, e) in kernel.edges().iter().enumerate() {
        let tree = sample_crt(sigma * x[i], h, split_seed(seed, i as u64 + 1))?;
        let grid = tree.tau.len() - 1;
        let (a, b) = loop {
            let a = tree.tau[rng.random_range(0..grid)];
            let b = tree.tau[rng.random_range(0..grid)];
            if a != b {
                break (a, b);
            }
        };
        let offset = union.n();
        for v in 0..tree.graph.n() {
            union.add_vertex(tree.graph.mass(v));
        }
        for (te, l) in tree.graph.edge_lengths() {
            union.add_edge(offset + te.u, offset + te.v, l)?;
        }
        ends[e.u].push(offset + a);
        ends[e.v].push(offset + b);
    }
    let pairs: Vec<(usize, usize)> =
        ends.iter().flat_map(|group| group.windows(2).map(|w| (w[0], w[1]))).collect();
    let graph = glue(&union, &pairs)?;
    let surplus = graph.graph().num_edges() + 1 - graph.n();
    Ok(ContinuumComponent { graph, sigma, surplus, start: 0.0 })
}

/// Uniform pairing of `6(k-1)` half-edges on `2(k-1)` vertices, redrawn
/// until connected. Loops and multiple edges are kept.
pub fn random_3regular_kernel(k: usize, seed: u64) -> Result<Multigraph> {
    if k < 2 {
        return Err(Error::Parameter(format!("surplus must be at least 2, got {k}")));
    }
    let n = 2 * (k - 1);
    let mut rng = rng_from_seed(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
    loop {
        stubs.shuffle(&mut rng);
        let pairs: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        let g = Multigraph::from_pairs(n, &pairs)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
}
