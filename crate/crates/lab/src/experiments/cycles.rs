use std::collections::{BTreeMap, HashMap};

use mstlab_core::cycle_breaking::{
    connected_multigraphs, cut, k_infinity, k_infinity_law_exact, mst_law_exact, tv_to_law, TreeLaw,
};
use mstlab_core::metric::{covering_number_exact, covering_number_greedy};
use mstlab_core::rgraph::{
    bridges, canonical_form, core, graph_of, kernel, subdivide, surplus, EdgeLengthGraph, Multigraph,
};
use mstlab_core::rng::rng_from_seed;
use mstlab_core::{Error, Result as CoreResult};
use rand::Rng;

use super::{Check, Ctx, Experiment, Outcome};
use crate::config::param;
use crate::{LabError, Result};

fn sorted_ids(g: &Multigraph) -> Vec<usize> {
    let mut ids: Vec<usize> = g.edges().iter().map(|e| e.id).collect();
    ids.sort_unstable();
    ids
}

fn law_to_f64(law: &TreeLaw) -> Vec<f64> {
    law.values().map(|q| *q.numer() as f64 / *q.denom() as f64).collect()
}

pub static CYCLE_BREAK_TV: Experiment = Experiment {
    name: "cycle_break_tv",
    claim: "breaking cycles at uniform non-disconnecting edges leaves a spanning tree with the law of the MST",
    default_replicas: 1,
    params: &[
        param("max_edges", "6", "exact comparison on every connected multigraph with at most this many edges"),
        param("samples", "100000", "Monte Carlo runs on the figure-eight"),
        param("tv_tolerance", "0.02", "allowed total variation"),
        param("max_mismatches", "0", "allowed exact-law disagreements"),
    ],
    columns: &["exact_mismatch", "tree_probability", "tree_frequency"],
    run: cycle_break_tv,
};

/// Two triangles sharing a vertex.
fn figure_eight() -> Multigraph {
    Multigraph::from_pairs(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).expect("valid pairs")
}

fn cycle_break_tv(ctx: &Ctx) -> Result<Outcome> {
    let max_edges = ctx.params.usize("max_edges")?;
    if max_edges > 9 {
        return Err(LabError::Config("max_edges is capped at 9 (|E|! orders)".into()));
    }
    let samples = ctx.params.usize("samples")?;
    let mut out = Outcome::default();
    let classes = connected_multigraphs(max_edges);
    let mut mismatches = 0.0;
    for (i, g) in classes.iter().enumerate() {
        let bad = (k_infinity_law_exact(g)? != mst_law_exact(g)?) as u8 as f64;
        out.row(i, "exact_mismatch", bad);
        mismatches += bad;
    }
    out.stat("classes", classes.len() as f64);
    out.stat("exact_mismatches", mismatches);
    out.check(Check::at_most("exact_mismatches", mismatches, ctx.params.f64("max_mismatches")));

    let g = figure_eight();
    let law = mst_law_exact(&g)?;
    let mut rng = rng_from_seed(ctx.replica_seed(0));
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for _ in 0..samples {
        *counts.entry(sorted_ids(&k_infinity(&g, &mut rng)?)).or_default() += 1;
    }
    for (t, (tree, q)) in law.keys().zip(law_to_f64(&law)).enumerate() {
        out.row(t, "tree_probability", q);
        out.row(t, "tree_frequency", *counts.get(tree).unwrap_or(&0) as f64 / samples as f64);
    }
    let tv = tv_to_law(&law, &counts);
    out.stat("figure_eight_tv", tv);
    out.check(Check::at_most("figure_eight_tv", tv, ctx.params.f64("tv_tolerance")));
    Ok(out)
}

/// A random R-graph with integer lengths: a kernel of minimum degree 3 from
/// `kernels`, integer edge lengths 1 or 2, some edges split at real points,
/// and up to two pendant paths of non-integer length attached at branch
/// points (kernel vertices or midpoints of length-2 edges). Redrawn until
/// `g(X)` has at most `max_g_edges` edges.
pub fn random_integer_rgraph<R: Rng + ?Sized>(kernels: &[Multigraph], max_g_edges: usize, rng: &mut R) -> EdgeLengthGraph {
    let real_offset = |rng: &mut R, len: f64| loop {
        let t = rng.random_range(0.02..len - 0.02);
        if (t - t.round()).abs() > 0.02 {
            return t;
        }
    };
    loop {
        let k = &kernels[rng.random_range(0..kernels.len())];
        let mut g = EdgeLengthGraph::new(k.n());
        let mut anchors: Vec<usize> = (0..k.n()).collect();
        let mut count = 0;
        for e in k.edges() {
            let len = rng.random_range(1..=2usize) as f64;
            count += len as usize;
            if len == 2.0 && rng.random_bool(0.25) {
                let mid = g.add_vertex(0.0);
                g.add_edge(e.u, mid, 1.0).expect("valid");
                g.add_edge(mid, e.v, 1.0).expect("valid");
                anchors.push(mid);
            } else if rng.random_bool(0.5) {
                let t = real_offset(rng, len);
                let w = g.add_vertex(0.0);
                g.add_edge(e.u, w, t).expect("valid");
                g.add_edge(w, e.v, len - t).expect("valid");
            } else {
                g.add_edge(e.u, e.v, len).expect("valid");
            }
        }
        for _ in 0..rng.random_range(0..=2) {
            let at = anchors[rng.random_range(0..anchors.len())];
            let len = real_offset(rng, 2.6);
            count += len.floor() as usize;
            let leaf = g.add_vertex(0.0);
            if rng.random_bool(0.5) {
                let t = rng.random_range(0.1..0.9) * len;
                let w = g.add_vertex(0.0);
                g.add_edge(at, w, t).expect("valid");
                g.add_edge(w, leaf, len - t).expect("valid");
            } else {
                g.add_edge(at, leaf, len).expect("valid");
            }
        }
        if count <= max_g_edges {
            return g;
        }
    }
}

/// Kernels with at most `max_edges` edges and minimum degree 3.
pub(crate) fn small_kernels(max_edges: usize) -> Vec<Multigraph> {
    connected_multigraphs(max_edges)
        .into_iter()
        .filter(|g| g.num_edges() > 0 && g.degrees().iter().all(|&d| d >= 3))
        .collect()
}

pub static CUT_VS_MST: Experiment = Experiment {
    name: "cut_vs_mst",
    claim: "for an R-graph X with integer lengths, g(cut(X)) is a spanning tree of g(X) with the law of the MST of g(X)",
    default_replicas: 100,
    params: &[
        param("kernel_edges", "6", "largest kernel"),
        param("max_g_edges", "9", "largest g(X) (exact laws enumerate |E|! orders)"),
        param("samples", "100000", "cuts per graph"),
        param("tv_tolerance", "0.02", "allowed total variation, every graph"),
        param("max_failures", "0", "allowed runs where g(cut(X)) is not the predicted spanning tree"),
    ],
    columns: &["g_edges", "spanning_trees", "tv", "failures", "near_integer_cuts"],
    run: cut_vs_mst,
};

fn cut_vs_mst(ctx: &Ctx) -> Result<Outcome> {
    let kernels = small_kernels(ctx.params.usize("kernel_edges")?);
    let max_g = ctx.params.usize("max_g_edges")?;
    if max_g > 9 {
        return Err(LabError::Config("max_g_edges is capped at 9".into()));
    }
    let samples = ctx.params.usize("samples")?;
    let res = ctx.replicate(ctx.replicas, 0, |_, seed| {
        let mut rng = rng_from_seed(seed);
        let x = random_integer_rgraph(&kernels, max_g, &mut rng);
        Ok(cut_vs_mst_one(&x, samples, &mut rng)?)
    })?;
    let mut out = Outcome::default();
    for (r, s) in res.iter().enumerate() {
        out.row(r, "g_edges", s.g_edges as f64);
        out.row(r, "spanning_trees", s.trees as f64);
        out.row(r, "tv", s.tv);
        out.row(r, "failures", s.failures as f64);
        out.row(r, "near_integer_cuts", s.near as f64);
    }
    let worst = res.iter().map(|s| s.tv).fold(0.0, f64::max);
    let failures = res.iter().map(|s| s.failures).sum::<u64>() as f64;
    out.stat("max_tv", worst);
    out.stat("mean_tv", res.iter().map(|s| s.tv).sum::<f64>() / res.len().max(1) as f64);
    out.stat("failures", failures);
    out.stat("near_integer_cuts", res.iter().map(|s| s.near).sum::<u64>() as f64);
    out.check(Check::at_most("failures", failures, ctx.params.f64("max_failures")));
    out.check(Check::at_most("max_tv", worst, ctx.params.f64("tv_tolerance")));
    Ok(out)
}

struct CutSummary {
    g_edges: usize,
    trees: usize,
    tv: f64,
    failures: u64,
    /// Runs with a cut point within 1e-7 of `v(X)`.
    near: u64,
}

/// Cuts `x` repeatedly. Each cut point is located on an edge of `g(X)`; the
/// edges of `g(X)` not hit must form a spanning tree isomorphic to
/// `g(cut(X))`, and their law is compared with the exact MST law.
fn cut_vs_mst_one<R: Rng + ?Sized>(x: &EdgeLengthGraph, samples: usize, rng: &mut R) -> CoreResult<CutSummary> {
    let gx = graph_of(x)?;
    let law = mst_law_exact(&gx.graph)?;
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut forms: HashMap<Vec<usize>, Vec<u32>> = HashMap::new();
    let (mut failures, mut near) = (0, 0);
    for _ in 0..samples {
        let (c, trace) = cut(x, rng)?;
        let mut kept = gx.graph.clone();
        let mut ok = true;
        for step in &trace.steps {
            let (edge, offset) = step.origin;
            match gx.locate(edge, offset).map(|id| kept.remove_edge(id)) {
                Some(Ok(_)) => {}
                _ => ok = false,
            }
        }
        let ids = sorted_ids(&kept);
        ok &= ids.len() + 1 == gx.graph.n() && kept.is_connected();
        let expect = forms.entry(ids.clone()).or_insert_with(|| canonical_form(&kept));
        ok &= match graph_of(&c) {
            Ok(gc) => canonical_form(&gc.graph) == *expect,
            Err(_) => false,
        };
        if !ok {
            failures += 1;
        }
        let gap = trace
            .steps
            .iter()
            .flat_map(|st| {
                let (e, o) = st.origin;
                gx.segments.iter().flatten().filter(move |sg| sg.edge == e).map(move |sg| (o - sg.a).abs().min((o - sg.b).abs()))
            })
            .fold(f64::INFINITY, f64::min);
        if gap < 1e-7 {
            near += 1;
        }
        *counts.entry(ids).or_default() += 1;
    }
    Ok(CutSummary { g_edges: gx.graph.num_edges(), trees: law.len(), tv: tv_to_law(&law, &counts), failures, near })
}

/// Splits vertex `v` of degree 2 into two leaves: one of its edges is moved
/// to a new vertex. This is the discretised space cut at the point `v`.
pub fn split_at_vertex(g: &EdgeLengthGraph, v: usize) -> CoreResult<EdgeLengthGraph> {
    let incident: Vec<usize> =
        g.edges().iter().enumerate().filter(|(_, e)| e.u == v || e.v == v).map(|(p, _)| p).collect();
    if incident.len() != 2 || g.edges()[incident[0]].is_loop() {
        return Err(Error::UnsafePoint(format!("vertex {v} does not have degree 2")));
    }
    let b = bridges(g.graph());
    if incident.iter().any(|&p| b[p]) {
        return Err(Error::UnsafePoint(format!("vertex {v} is not in conn")));
    }
    let e = g.edges()[incident[0]];
    let len = g.lengths()[incident[0]];
    let mut out = g.clone();
    out.remove_edge(e.id)?;
    let w = out.add_vertex(0.0);
    let other = e.other(v);
    out.add_edge_with_id(e.id, other, w, len)?;
    Ok(out)
}

pub static COVERING_SANDWICH: Experiment = Experiment {
    name: "covering_sandwich",
    claim: "cutting at a point of conn(X) raises the covering number by at most 2 and never lowers it",
    default_replicas: 1000,
    params: &[
        param("r_min", "0.2", "radius range"),
        param("r_max", "1.0", ""),
        param("points", "100", "subdivision points per graph (exact covers need ≤ 128 vertices)"),
        param("max_violations", "0", "allowed violations of the exact sandwich"),
    ],
    columns: &["radius", "n_exact", "n_cut_exact", "n_greedy", "n_cut_greedy"],
    run: covering_sandwich,
};

fn covering_sandwich(ctx: &Ctx) -> Result<Outcome> {
    let (r0, r1) = (ctx.params.positive("r_min")?, ctx.params.positive("r_max")?);
    let points = ctx.params.usize("points")?.max(10);
    if r1 < r0 {
        return Err(LabError::Config("need r_min ≤ r_max".into()));
    }
    let res = ctx.replicate(ctx.replicas, 0, |_, seed| {
        let mut rng = rng_from_seed(seed);
        let (g, v) = loop {
            let g = random_cyclic_graph(&mut rng);
            let g = subdivide(&g, g.total_length() / points as f64)?;
            if g.n() > 128 {
                continue;
            }
            let b = bridges(g.graph());
            let mut deg = vec![Vec::new(); g.n()];
            for (p, e) in g.edges().iter().enumerate() {
                deg[e.u].push(p);
                deg[e.v].push(p);
            }
            let candidates: Vec<usize> = (0..g.n())
                .filter(|&v| deg[v].len() == 2 && deg[v].iter().all(|&p| !b[p] && !g.edges()[p].is_loop()))
                .collect();
            if !candidates.is_empty() {
                let v = candidates[rng.random_range(0..candidates.len())];
                break (g, v);
            }
        };
        let gx = split_at_vertex(&g, v)?;
        let r = rng.random_range(r0..=r1);
        Ok([
            r,
            covering_number_exact(&g, r)? as f64,
            covering_number_exact(&gx, r)? as f64,
            covering_number_greedy(&g, r)? as f64,
            covering_number_greedy(&gx, r)? as f64,
        ])
    })?;
    let mut out = Outcome::default();
    let names = ["radius", "n_exact", "n_cut_exact", "n_greedy", "n_cut_greedy"];
    for (r, row) in res.iter().enumerate() {
        for (name, v) in names.iter().zip(row) {
            out.row(r, name, *v);
        }
    }
    let outside = |a: f64, b: f64| !(a <= b && b <= a + 2.0);
    let exact = res.iter().filter(|x| outside(x[1], x[2])).count() as f64;
    let greedy = res.iter().filter(|x| outside(x[3], x[4])).count() as f64;
    out.stat("exact_violations", exact);
    out.stat("greedy_violation_rate", greedy / res.len().max(1) as f64);
    out.check(Check::at_most("exact_violations", exact, ctx.params.f64("max_violations")));
    Ok(out)
}

/// A connected multigraph on 1 to 3 vertices with 1 to 3 extra edges
/// (loops allowed) and lengths in `[0.5, 1.5]`.
fn random_cyclic_graph<R: Rng + ?Sized>(rng: &mut R) -> EdgeLengthGraph {
    let n = rng.random_range(1..=3usize);
    let mut g = EdgeLengthGraph::new(n);
    for v in 1..n {
        let u = rng.random_range(0..v);
        g.add_edge(u, v, rng.random_range(0.5..1.5)).expect("valid");
    }
    for _ in 0..rng.random_range(1..=3) {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        g.add_edge(a, b, rng.random_range(0.5..1.5)).expect("valid");
    }
    g
}

pub static KERNEL_STRUCTURE: Experiment = Experiment {
    name: "kernel_structure",
    claim: "the kernel has minimum degree 3 and at most 2s - 2 vertices, with equality iff 3-regular; core and kernel keep the surplus",
    default_replicas: 10_000,
    params: &[
        param("max_vertices", "15", "random connected multigraphs on 1..max_vertices vertices"),
        param("max_extra", "10", "edges added to a random spanning tree (loops and multiple edges allowed)"),
        param("max_violations", "0", ""),
    ],
    columns: &["surplus", "kernel_vertices", "violation"],
    run: kernel_structure,
};

fn kernel_structure(ctx: &Ctx) -> Result<Outcome> {
    let max_n = ctx.params.usize("max_vertices")?.max(1);
    let max_extra = ctx.params.usize("max_extra")?;
    let res = ctx.replicate(ctx.replicas, 0, |_, seed| {
        let mut rng = rng_from_seed(seed);
        let n = rng.random_range(1..=max_n);
        let mut g = EdgeLengthGraph::new(n);
        for v in 1..n {
            g.add_edge(rng.random_range(0..v), v, rng.random_range(0.1..2.0))?;
        }
        for _ in 0..rng.random_range(0..=max_extra) {
            g.add_edge(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0.1..2.0))?;
        }
        kernel_violation(&g)
    })?;
    let mut out = Outcome::default();
    for (r, &(s, k, bad)) in res.iter().enumerate() {
        out.row(r, "surplus", s as f64);
        out.row(r, "kernel_vertices", k as f64);
        out.row(r, "violation", bad as u8 as f64);
    }
    let violations = res.iter().filter(|x| x.2).count() as f64;
    out.stat("violations", violations);
    out.stat("cyclic_graphs", res.iter().filter(|x| x.0 > 0).count() as f64);
    out.check(Check::at_most("violations", violations, ctx.params.f64("max_violations")));
    Ok(out)
}

/// `(surplus, kernel vertices, any property violated)`.
fn kernel_violation(g: &EdgeLengthGraph) -> Result<(usize, usize, bool)> {
    let s = surplus(g.graph())?;
    if s == 0 {
        let kd = kernel(g)?;
        let empty = kd.vertices.is_empty() && kd.edges.is_empty() && matches!(core(g.graph()), Err(Error::EmptyCore));
        return Ok((0, 0, !empty));
    }
    let kd = kernel(g)?;
    let c = core(g.graph())?;
    let k = kd.vertices.len();
    let degrees = kd.kernel_degrees();
    let mut bad = kd.surplus != s || c.edges.len() + 1 != c.vertices.len() + s;
    let kg = kd.kernel_graph();
    bad |= kg.graph().num_edges() + 1 != kg.n() + s;
    if s >= 2 {
        bad |= degrees.iter().any(|&d| d < 3);
        bad |= k > 2 * s - 2;
        bad |= (k == 2 * s - 2) != degrees.iter().all(|&d| d == 3);
    } else {
        bad |= k != 0;
    }
    Ok((s, k, bad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mstlab_core::metric::covering_number_exact;

    #[test]
    fn integer_rgraphs_have_small_g() {
        let kernels = small_kernels(6);
        assert!(kernels.iter().any(|k| k.n() == 4 && k.num_edges() == 6));
        let mut rng = rng_from_seed(4);
        for _ in 0..200 {
            let x = random_integer_rgraph(&kernels, 9, &mut rng);
            let g = graph_of(&x).unwrap();
            assert!(g.graph.num_edges() <= 9);
            assert_eq!(surplus(&g.graph).unwrap(), surplus(x.graph()).unwrap());
        }
    }

    #[test]
    fn split_cycle_vertex_gives_a_path() {
        let c = EdgeLengthGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        let p = split_at_vertex(&c, 1).unwrap();
        assert_eq!(surplus(p.graph()).unwrap(), 0);
        assert_eq!(p.n(), 4);
        // the cut cycle is a path of length 3
        assert_eq!(covering_number_exact(&p, 1.0).unwrap(), 2);
        assert_eq!(covering_number_exact(&c, 1.0).unwrap(), 1);
        let path = EdgeLengthGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert!(split_at_vertex(&path, 1).is_err());
    }

    #[test]
    fn kernel_properties_on_fixtures() {
        let theta = EdgeLengthGraph::from_edges(2, &[(0, 1, 1.0), (0, 1, 2.0), (0, 1, 0.5)]).unwrap();
        assert_eq!(kernel_violation(&theta).unwrap(), (2, 2, false));
        let cycle = EdgeLengthGraph::from_edges(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(kernel_violation(&cycle).unwrap(), (1, 0, false));
        let tree = EdgeLengthGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(kernel_violation(&tree).unwrap(), (0, 0, false));
    }
}
