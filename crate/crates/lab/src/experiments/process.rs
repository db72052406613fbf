use mstlab_core::graph_process::{
    kruskal_forest, msf_components, prim_mst, sample_threshold, sample_window, threshold_components,
    WeightedEdgeList,
};
use mstlab_core::UnionFind;

use super::{Check, Ctx, Experiment, Outcome};
use crate::config::param;
use crate::stats::{mean, std_error, variance, zeta};
use crate::Result;

/// Minimum spanning tree by enumerating every `(n-1)`-subset of edges.
pub(crate) fn brute_force_mst(n: usize, edges: &[(usize, usize, f64)]) -> Vec<(usize, usize)> {
    let (m, k) = (edges.len(), n - 1);
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
    let mut out: Vec<(usize, usize)> =
        best.expect("K_n is connected").1.iter().map(|&i| (edges[i].0.min(edges[i].1), edges[i].0.max(edges[i].1))).collect();
    out.sort_unstable();
    out
}

pub static MST_EXACTNESS: Experiment = Experiment {
    name: "mst_exactness",
    claim: "Prim and Kruskal return the minimum spanning tree (exhaustive enumeration on K_n, n ≤ 7)",
    default_replicas: 1000,
    params: &[
        param("n_min", "3", "smallest n; replica r uses n_min + r mod (n_max - n_min + 1)"),
        param("n_max", "7", "largest n"),
        param("max_mismatches", "0", "allowed disagreements with the oracle"),
    ],
    columns: &["n", "prim_mismatch", "kruskal_mismatch"],
    run: mst_exactness,
};

fn mst_exactness(ctx: &Ctx) -> Result<Outcome> {
    let (lo, hi) = (ctx.params.usize("n_min")?.max(2), ctx.params.usize("n_max")?);
    if hi < lo || hi > 8 {
        return Err(crate::LabError::Config("need n_min ≤ n_max ≤ 8".into()));
    }
    let res = ctx.replicate(ctx.replicas, 0, |r, seed| {
        let n = lo + r % (hi - lo + 1);
        let wel = WeightedEdgeList::complete(n, seed)?;
        let edges: Vec<(usize, usize, f64)> = wel
            .entries()
            .iter()
            .map(|e| {
                let (u, v) = wel.endpoints(e);
                (u, v, e.weight)
            })
            .collect();
        let oracle = brute_force_mst(n, &edges);
        let prim = (prim_mst(n, seed)?.edge_set() != oracle) as u8 as f64;
        let kruskal = (kruskal_forest(&wel, 1.0)?.edge_set() != oracle) as u8 as f64;
        Ok((n as f64, prim, kruskal))
    })?;
    let mut out = Outcome::default();
    for (r, &(n, p, k)) in res.iter().enumerate() {
        out.row(r, "n", n);
        out.row(r, "prim_mismatch", p);
        out.row(r, "kruskal_mismatch", k);
    }
    let mismatches: f64 = res.iter().map(|x| x.1 + x.2).sum();
    out.stat("mismatches", mismatches);
    out.check(Check::at_most("mismatches", mismatches, ctx.params.f64("max_mismatches")));
    Ok(out)
}

pub static COUPLING_IDENTITY: Experiment = Experiment {
    name: "coupling_identity",
    claim: "M(n,p) and G(n,p) have the same components, and M(n,p) is the set of MST edges of weight ≤ p",
    default_replicas: 50,
    params: &[
        param("n", "200", "vertices"),
        param("thresholds", "20", "thresholds p = c/n with c evenly spaced in [c_min, c_max]"),
        param("c_min", "0.25", ""),
        param("c_max", "4", ""),
        param("max_mismatches", "0", "allowed failures"),
    ],
    columns: &["partition_mismatch", "edge_mismatch"],
    run: coupling_identity,
};

fn coupling_identity(ctx: &Ctx) -> Result<Outcome> {
    let n = ctx.params.usize("n")?;
    let t = ctx.params.usize("thresholds")?.max(1);
    let (c0, c1) = (ctx.params.positive("c_min")?, ctx.params.positive("c_max")?);
    let ps: Vec<f64> =
        (0..t).map(|k| (c0 + (c1 - c0) * k as f64 / (t.max(2) - 1) as f64) / n as f64).map(|p| p.min(1.0)).collect();
    let p_max = ps.iter().copied().fold(0.0, f64::max);
    let res = ctx.replicate(ctx.replicas, 0, |_, seed| {
        let wel = sample_threshold(n, p_max, seed)?;
        let full = if p_max < 1.0 { wel.extend_to(1.0)? } else { wel.clone() };
        let mst = kruskal_forest(&full, 1.0)?;
        let (mut parts, mut edges) = (0.0, 0.0);
        for &p in &ps {
            let forest = kruskal_forest(&wel, p)?;
            let graph = threshold_components(&wel, p)?;
            if forest.partition() != graph_partition(&graph, n).as_slice() {
                parts += 1.0;
            }
            let mut below: Vec<(usize, usize)> =
                mst.edges().iter().filter(|e| e.2 <= p).map(|&(u, v, _)| (u.min(v), u.max(v))).collect();
            below.sort_unstable();
            if forest.edge_set() != below {
                edges += 1.0;
            }
        }
        Ok((parts, edges))
    })?;
    let mut out = Outcome::default();
    for (r, &(a, b)) in res.iter().enumerate() {
        out.row(r, "partition_mismatch", a);
        out.row(r, "edge_mismatch", b);
    }
    let total: f64 = res.iter().map(|x| x.0 + x.1).sum();
    out.stat("mismatches", total);
    out.check(Check::at_most("mismatches", total, ctx.params.f64("max_mismatches")));
    Ok(out)
}

/// Each vertex labelled by the smallest vertex of its component.
fn graph_partition(cs: &mstlab_core::graph_process::ComponentSequence, n: usize) -> Vec<usize> {
    let mut label = vec![0; n];
    for i in 0..cs.len() {
        let vs = cs.vertices(i);
        for &v in vs {
            label[v] = vs[0];
        }
    }
    label
}

pub static FRIEZE_ZETA3: Experiment = Experiment {
    name: "frieze_zeta3",
    claim: "the total weight of the MST of K_n with uniform weights tends to ζ(3)",
    default_replicas: 200,
    params: &[param("n", "2000", "vertices"), param("tolerance", "0.02", "allowed |mean - ζ(3)|")],
    columns: &["total_weight"],
    run: frieze_zeta3,
};

fn frieze_zeta3(ctx: &Ctx) -> Result<Outcome> {
    let n = ctx.params.usize("n")?;
    let w = ctx.replicate(ctx.replicas, 0, |_, seed| Ok(prim_mst(n, seed)?.total_weight()))?;
    let mut out = Outcome::default();
    out.column("total_weight", &w);
    let (m, target) = (mean(&w), zeta(3.0));
    out.stat("mean", m);
    out.stat("std_error", std_error(&w));
    out.stat("target", target);
    out.check(Check::near("mean_total_weight", m, target, ctx.params.f64("tolerance")));
    Ok(out)
}

pub static JANSON_VARIANCE: Experiment = Experiment {
    name: "janson_variance",
    claim: "n·Var(MST weight) tends to 6ζ(4) - 4ζ(3)",
    default_replicas: 2000,
    params: &[param("n", "1000", "vertices"), param("rel_tolerance", "0.15", "allowed relative error")],
    columns: &["total_weight"],
    run: janson_variance,
};

fn janson_variance(ctx: &Ctx) -> Result<Outcome> {
    let n = ctx.params.usize("n")?;
    let w = ctx.replicate(ctx.replicas, 0, |_, seed| Ok(prim_mst(n, seed)?.total_weight()))?;
    let mut out = Outcome::default();
    out.column("total_weight", &w);
    let scaled = n as f64 * variance(&w);
    let target = 6.0 * zeta(4.0) - 4.0 * zeta(3.0);
    out.stat("n_var", scaled);
    // normal-theory standard error of a variance estimate
    out.stat("n_var_std_error", scaled * (2.0 / (w.len() as f64 - 1.0)).sqrt());
    out.stat("target", target);
    let tol = ctx.params.f64("rel_tolerance") * target;
    out.check(Check::near("n_var", scaled, target, tol));
    Ok(out)
}

pub static LUCZAK_MASS: Experiment = Experiment {
    name: "luczak_mass",
    claim: "the largest component of M(n, 1/n + λn^{-4/3}) has about 2λn^{2/3} vertices for large λ",
    default_replicas: 30,
    params: &[
        param("n", "1000000", "vertices"),
        param("lambda", "20", "window parameter"),
        param("lower", "0.8", "bracket for the mean ratio"),
        param("upper", "1.2", ""),
    ],
    columns: &["largest_size", "ratio"],
    run: luczak_mass,
};

fn luczak_mass(ctx: &Ctx) -> Result<Outcome> {
    let n = ctx.params.usize("n")?;
    let lambda = ctx.params.f64("lambda");
    let scale = 2.0 * lambda * (n as f64).powf(2.0 / 3.0);
    let sizes = ctx.replicate(ctx.replicas, 0, |_, seed| {
        let wel = sample_window(n, lambda, seed)?;
        Ok(msf_components(&wel, lambda)?.size(0) as f64)
    })?;
    let ratios: Vec<f64> = sizes.iter().map(|s| s / scale).collect();
    let mut out = Outcome::default();
    out.column("largest_size", &sizes);
    out.column("ratio", &ratios);
    let m = mean(&ratios);
    out.stat("mean_ratio", m);
    out.stat("std_error", std_error(&ratios));
    // law of large numbers at fixed ε = λn^{-1/3}: the giant has ρn vertices, 1 - ρ = e^{-(1+ε)ρ}
    let eps = lambda * (n as f64).powf(-1.0 / 3.0);
    out.stat("giant_fraction_ratio", giant_fraction(1.0 + eps) * n as f64 / scale);
    out.check(Check::within("mean_ratio", m, ctx.params.f64("lower"), ctx.params.f64("upper")));
    Ok(out)
}

/// Survival probability of a Poisson(`c`) branching process.
pub(crate) fn giant_fraction(c: f64) -> f64 {
    let mut rho = 1.0f64;
    for _ in 0..10_000 {
        let next = 1.0 - (-c * rho).exp();
        if (next - rho).abs() < 1e-15 {
            break;
        }
        rho = next;
    }
    rho
}

/// Size and surplus of the largest component of `G(n, 1/n + λn^{-4/3})`.
pub(crate) fn discrete_largest(n: usize, lambda: f64, seed: u64) -> Result<(usize, usize)> {
    let wel = sample_window(n, lambda, seed)?;
    let cs = threshold_components(&wel, wel.p_max())?;
    Ok((cs.size(0), cs.surplus(0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_on_a_triangle() {
        let e = [(0, 1, 0.3), (1, 2, 0.1), (0, 2, 0.2)];
        assert_eq!(brute_force_mst(3, &e), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn giant_fraction_fixed_point() {
        assert!(giant_fraction(0.9) < 1e-6);
        // c = 2 ln 2 gives ρ = 1/2 exactly
        assert!((giant_fraction(2.0 * 2f64.ln()) - 0.5).abs() < 1e-12);
        let r = giant_fraction(1.2);
        assert!((1.0 - r - (-1.2 * r).exp()).abs() < 1e-12);
    }
}
