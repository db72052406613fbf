use mstlab_core::continuum::{
    construction1_core, construction2_component, normalized_excursion, random_3regular_kernel, sample_crt,
    sample_g_lambda, theta_series_tail, tree_from_excursion, ContinuumParams, Excursion,
};
use mstlab_core::metric::realize;
use mstlab_core::rgraph::{kernel, Multigraph};
use mstlab_core::rng::rng_from_seed;
use rand::Rng;

use super::process::discrete_largest;
use super::{Check, Ctx, Experiment, Outcome};
use crate::config::param;
use crate::stats::{ks_two_sample, mean, std_error};
use crate::{LabError, Result};

pub static SURPLUS_LAW: Experiment = Experiment {
    name: "surplus_law",
    claim: "the surplus of the largest component is about 2λ³/3 for large λ, in the continuum and in G(n,p)",
    default_replicas: 1000,
    params: &[
        param("lambda", "3", "window parameter"),
        param("rel_tolerance", "0.25", "continuum: allowed relative error of the mean"),
        param("n", "1000000", "discrete vertices"),
        param("discrete_replicas", "100", "discrete replicas (family 1 of the first replicas)"),
        param("discrete_rel_tolerance", "0.35", "discrete: allowed relative error of the mean"),
    ],
    columns: &["continuum_surplus", "discrete_surplus"],
    run: surplus_law,
};

fn surplus_law(ctx: &Ctx) -> Result<Outcome> {
    let lambda = ctx.params.positive("lambda")?;
    let n = ctx.params.usize("n")?;
    let params = ContinuumParams::new(lambda);
    let cont = ctx.replicate(ctx.replicas, 0, |_, seed| {
        Ok(sample_g_lambda(&params, seed, 1)?.first().map_or(0.0, |c| c.surplus as f64))
    })?;
    let disc = ctx.replicate(ctx.params.usize("discrete_replicas")?, 1, |_, seed| {
        Ok(discrete_largest(n, lambda, seed)?.1 as f64)
    })?;
    let target = 2.0 * lambda.powi(3) / 3.0;
    let mut out = Outcome::default();
    out.column("continuum_surplus", &cont);
    out.column("discrete_surplus", &disc);
    out.stat("target", target);
    out.stat("continuum_mean", mean(&cont));
    out.stat("continuum_std_error", std_error(&cont));
    out.stat("discrete_mean", mean(&disc));
    out.stat("discrete_std_error", std_error(&disc));
    out.check(Check::near("continuum_mean", mean(&cont), target, ctx.params.f64("rel_tolerance") * target));
    if !disc.is_empty() {
        let tol = ctx.params.f64("discrete_rel_tolerance") * target;
        out.check(Check::near("discrete_mean", mean(&disc), target, tol));
    }
    Ok(out)
}

pub static EXCURSION_TREE: Experiment = Experiment {
    name: "excursion_tree",
    claim: "the tree built from an excursion has d(τ_i, τ_j) = 2e(i) + 2e(j) - 4 min e on [i, j]",
    default_replicas: 500,
    params: &[
        param("max_steps", "200", "grid steps per excursion are uniform in 2..max_steps"),
        param("tolerance", "1e-9", "allowed absolute discrepancy"),
        param("max_mismatches", "0", ""),
    ],
    columns: &["steps", "max_discrepancy"],
    run: excursion_tree,
};

fn excursion_tree(ctx: &Ctx) -> Result<Outcome> {
    let max_steps = ctx.params.usize("max_steps")?.max(2);
    let res = ctx.replicate(ctx.replicas, 0, |_, seed| {
        let mut rng = rng_from_seed(seed);
        let m = rng.random_range(2..=max_steps);
        let mass: f64 = rng.random_range(0.1..10.0);
        let values: Vec<f64> = normalized_excursion(m, &mut rng).into_iter().map(|v| v * mass.sqrt()).collect();
        let e = Excursion::new(mass / m as f64, values)?;
        let tree = tree_from_excursion(&e);
        let space = realize(&tree.graph)?;
        let v = &e.values;
        let mut worst = 0.0f64;
        for i in 0..v.len() {
            let mut low = v[i];
            for j in i..v.len() {
                low = low.min(v[j]);
                let expect = 2.0 * v[i] + 2.0 * v[j] - 4.0 * low;
                worst = worst.max((space.dist(tree.tau[i], tree.tau[j]) - expect).abs());
            }
        }
        Ok((m as f64, worst))
    })?;
    let tol = ctx.params.f64("tolerance");
    let mut out = Outcome::default();
    for (r, &(m, w)) in res.iter().enumerate() {
        out.row(r, "steps", m);
        out.row(r, "max_discrepancy", w);
    }
    let bad = res.iter().filter(|x| !(x.1 <= tol)).count() as f64;
    out.stat("max_discrepancy", res.iter().map(|x| x.1).fold(0.0, f64::max));
    out.stat("mismatches", bad);
    out.check(Check::at_most("mismatches", bad, ctx.params.f64("max_mismatches")));
    Ok(out)
}

pub static CONTINUUM_MASS: Experiment = Experiment {
    name: "continuum_mass",
    claim: "the longest excursion of B_λ has length concentrated around 2λ for large λ",
    default_replicas: 1000,
    params: &[
        param("lambda", "10", "window parameter"),
        param("rel_tolerance", "0.15", "allowed relative error of the mean"),
        param("band", "8", "half-width of the band around 2λ"),
        param("min_fraction", "0.99", "fraction of replicas required inside the band"),
    ],
    columns: &["sigma"],
    run: continuum_mass,
};

fn continuum_mass(ctx: &Ctx) -> Result<Outcome> {
    let lambda = ctx.params.positive("lambda")?;
    let params = ContinuumParams::new(lambda);
    let sig = ctx.replicate(ctx.replicas, 0, |_, seed| Ok(params.excursions(seed)?.first().map_or(0.0, |e| e.sigma())))?;
    let (target, band) = (2.0 * lambda, ctx.params.f64("band"));
    let inside = sig.iter().filter(|s| (**s - target).abs() <= band).count() as f64 / sig.len().max(1) as f64;
    let mut out = Outcome::default();
    out.column("sigma", &sig);
    out.stat("mean", mean(&sig));
    out.stat("std_error", std_error(&sig));
    out.stat("fraction_in_band", inside);
    out.check(Check::near("mean_sigma", mean(&sig), target, ctx.params.f64("rel_tolerance") * target));
    out.check(Check::at_least("fraction_in_band", inside, ctx.params.f64("min_fraction")));
    Ok(out)
}

pub static CRT_THETA: Experiment = Experiment {
    name: "crt_theta",
    claim: "the height of the unit-mass Brownian CRT satisfies P(height ≥ x) = Σ (-1)^{k+1} e^{-k²x²}",
    default_replicas: 10_000,
    params: &[
        param("x", "1", "height level"),
        param("steps", "2000", "grid steps per tree"),
        param("tolerance", "0.015", "allowed |empirical - series|"),
    ],
    columns: &["height"],
    run: crt_theta,
};

fn crt_theta(ctx: &Ctx) -> Result<Outcome> {
    let x = ctx.params.positive("x")?;
    let h = 1.0 / ctx.params.positive("steps")?;
    let heights = ctx.replicate(ctx.replicas, 0, |_, seed| Ok(sample_crt(1.0, h, seed)?.max_height()))?;
    let p = heights.iter().filter(|&&y| y >= x).count() as f64 / heights.len().max(1) as f64;
    let target = theta_series_tail(x);
    let mut out = Outcome::default();
    out.column("height", &heights);
    out.stat("empirical_tail", p);
    out.stat("series_tail", target);
    out.stat("mean_height", mean(&heights));
    out.check(Check::near("tail_probability", p, target, ctx.params.f64("tolerance")));
    Ok(out)
}

pub static CONSTRUCTION_CONSISTENCY: Experiment = Experiment {
    name: "construction_consistency",
    claim: "the gamma-Dirichlet kernel lengths and the glued-CRT kernel lengths have the same law",
    default_replicas: 2000,
    params: &[
        param("sigma", "1", "component mass"),
        param("surplus", "3", "surplus k; the kernel is K_4 when k = 3, otherwise a random 3-regular multigraph"),
        param("steps", "5000", "grid steps per CRT in the glued construction (two-point distances are biased low by about 2.3/√steps)"),
        param("min_p_value", "0.01", "KS acceptance level"),
    ],
    columns: &["gamma_dirichlet_length", "glued_crt_length"],
    run: construction_consistency,
};

fn construction_consistency(ctx: &Ctx) -> Result<Outcome> {
    let sigma = ctx.params.positive("sigma")?;
    let k = ctx.params.usize("surplus")?;
    let h = 1.0 / ctx.params.positive("steps")?;
    let kern = if k == 3 { Multigraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])? } else { random_3regular_kernel(k, ctx.seed)? };
    let c1 = ctx.replicate(ctx.replicas, 0, |_, seed| {
        let core = construction1_core(sigma, k, &kern, seed)?;
        let j = rng_from_seed(seed ^ 0x5151).random_range(0..core.lengths().len());
        Ok(core.lengths()[j])
    })?;
    let c2 = ctx.replicate(ctx.replicas, 1, |_, seed| {
        let comp = construction2_component(sigma, k, &kern, h, seed)?;
        let kd = kernel(&comp.graph)?;
        if kd.edges.len() != 3 * k - 3 {
            return Err(LabError::Config(format!("glued component has {} kernel edges", kd.edges.len())));
        }
        let j = rng_from_seed(seed ^ 0x5151).random_range(0..kd.edges.len());
        Ok(kd.edges[j].length)
    })?;
    let ks = ks_two_sample(&c1, &c2);
    let mut out = Outcome::default();
    out.column("gamma_dirichlet_length", &c1);
    out.column("glued_crt_length", &c2);
    out.stat("gamma_dirichlet_mean", mean(&c1));
    out.stat("glued_crt_mean", mean(&c2));
    out.stat("ks_statistic", ks.statistic);
    out.stat("ks_p_value", ks.p_value);
    out.check(Check::at_least("ks_p_value", ks.p_value, ctx.params.f64("min_p_value")));
    Ok(out)
}

pub static DISCRETE_VS_CONTINUUM: Experiment = Experiment {
    name: "discrete_vs_continuum",
    claim: "n^{-2/3} times the largest component size of G(n, 1/n + λn^{-4/3}) has the law of the longest excursion of B_λ",
    default_replicas: 500,
    params: &[
        param("n", "200000", "discrete vertices"),
        param("lambda", "1", "window parameter"),
        param("min_p_value", "0.01", "KS acceptance level"),
    ],
    columns: &["discrete_mass", "continuum_mass"],
    run: discrete_vs_continuum,
};

fn discrete_vs_continuum(ctx: &Ctx) -> Result<Outcome> {
    let n = ctx.params.usize("n")?;
    let lambda = ctx.params.f64("lambda");
    let scale = (n as f64).powf(2.0 / 3.0);
    let disc = ctx.replicate(ctx.replicas, 0, |_, seed| Ok(discrete_largest(n, lambda, seed)?.0 as f64 / scale))?;
    let params = ContinuumParams::new(lambda);
    let cont = ctx.replicate(ctx.replicas, 1, |_, seed| Ok(params.excursions(seed)?.first().map_or(0.0, |e| e.sigma())))?;
    let ks = ks_two_sample(&disc, &cont);
    let mut out = Outcome::default();
    out.column("discrete_mass", &disc);
    out.column("continuum_mass", &cont);
    out.stat("discrete_mean", mean(&disc));
    out.stat("continuum_mean", mean(&cont));
    out.stat("ks_statistic", ks.statistic);
    out.stat("ks_p_value", ks.p_value);
    out.check(Check::at_least("ks_p_value", ks.p_value, ctx.params.f64("min_p_value")));
    Ok(out)
}
