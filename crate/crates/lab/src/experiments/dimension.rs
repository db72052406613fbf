use mstlab_core::graph_process::{sparse_mst, Forest};
use mstlab_core::metric::{geometric_radii, minkowski_slope};
use mstlab_core::rgraph::EdgeLengthGraph;

use super::{Check, Ctx, Experiment, Outcome};
use crate::config::param;
use crate::stats::mean;
use crate::ust::aldous_broder_ust;
use crate::Result;

pub static DIMENSION_CONTRAST: Experiment = Experiment {
    name: "dimension_contrast",
    claim: "the rescaled MST of K_n looks 3-dimensional, the uniform spanning tree 2-dimensional",
    default_replicas: 1,
    params: &[
        param("n", "500000", "vertices"),
        param("r_max", "4", "largest covering radius"),
        param("radii", "24", "radii r_max 2^{-i/2}"),
        param("mst_lower", "2.5", "bracket for the MST slope"),
        param("mst_upper", "3.5", ""),
        param("ust_lower", "1.6", "bracket for the UST slope"),
        param("ust_upper", "2.4", ""),
    ],
    columns: &["mst_slope", "ust_slope"],
    run: dimension_contrast,
};

fn as_graph(t: &Forest, len: f64) -> Result<EdgeLengthGraph> {
    let edges: Vec<(usize, usize, f64)> = t.edges().iter().map(|&(u, v, _)| (u, v, len)).collect();
    Ok(EdgeLengthGraph::from_edges(t.n(), &edges)?)
}

fn dimension_contrast(ctx: &Ctx) -> Result<Outcome> {
    let n = ctx.params.usize("n")?;
    let radii = geometric_radii(ctx.params.positive("r_max")?, ctx.params.usize("radii")?);
    let nf = n as f64;
    let res = ctx.replicate(ctx.replicas, 0, |_, seed| {
        let mst = as_graph(&sparse_mst(n, seed)?, nf.powf(-1.0 / 3.0))?;
        let ust = as_graph(&aldous_broder_ust(n, mstlab_core::rng::split_seed(seed, 1))?, nf.powf(-0.5))?;
        Ok((minkowski_slope(&mst, &radii)?.slope, minkowski_slope(&ust, &radii)?.slope))
    })?;
    let mut out = Outcome::default();
    let mst: Vec<f64> = res.iter().map(|x| x.0).collect();
    let ust: Vec<f64> = res.iter().map(|x| x.1).collect();
    out.column("mst_slope", &mst);
    out.column("ust_slope", &ust);
    let (m, u) = (mean(&mst), mean(&ust));
    out.stat("mst_slope", m);
    out.stat("ust_slope", u);
    out.check(Check::within("mst_slope", m, ctx.params.f64("mst_lower"), ctx.params.f64("mst_upper")));
    out.check(Check::within("ust_slope", u, ctx.params.f64("ust_lower"), ctx.params.f64("ust_upper")));
    Ok(out)
}
