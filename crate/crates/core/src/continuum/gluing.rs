use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::{extract_excursions, sample_w_lambda, tree_from_excursion, Excursion};
use crate::cycle_breaking::cut;
use crate::rgraph::{glue, EdgeLengthGraph};
use crate::rng::{rng_from_seed, split_seed};
use crate::{Error, Result};

/// One Poisson point under an excursion: the grid index `x`, the level
/// `y < ε(x)` and the first index `z ≥ x` with `ε(z) ≤ y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GluePoint {
    pub x: usize,
    pub y: f64,
    pub z: usize,
}

pub type GluePlan = Vec<GluePoint>;

/// Range-minimum sparse table answering "first index at or after `x` whose
/// value is at most `y`".
struct FirstBelow {
    levels: Vec<Vec<f64>>,
}

impl FirstBelow {
    fn new(values: &[f64]) -> Self {
        let mut levels = vec![values.to_vec()];
        let mut w = 1;
        while 2 * w <= values.len() {
            let prev = levels.last().expect("nonempty");
            let next: Vec<f64> = (0..=values.len() - 2 * w).map(|i| prev[i].min(prev[i + w])).collect();
            levels.push(next);
            w *= 2;
        }
        FirstBelow { levels }
    }

    fn query(&self, x: usize, y: f64) -> Option<usize> {
        let mut pos = x;
        for k in (0..self.levels.len()).rev() {
            if let Some(&mn) = self.levels[k].get(pos) {
                if mn > y {
                    pos += 1 << k;
                }
            }
        }
        (pos < self.levels[0].len()).then_some(pos)
    }
}

/// Samples the Poisson points under the excursion: their number is
/// Poisson(`h Σ ε`), `x` is chosen with probability proportional to `ε(x)`
/// and `y` uniformly in `(0, ε(x))`. Points come sorted by `x`.
pub fn poisson_glue_plan<R: Rng + ?Sized>(e: &Excursion, rng: &mut R) -> GluePlan {
    let area = e.area();
    if area <= 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(area).expect("positive mean").sample(rng) as usize;
    let mut cumulative = Vec::with_capacity(e.values.len());
    let mut acc = 0.0;
    for &v in &e.values {
        acc += v;
        cumulative.push(acc);
    }
    let table = FirstBelow::new(&e.values);
    let mut plan: GluePlan = (0..count)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            let x = cumulative.partition_point(|&c| c <= u).min(e.values.len() - 2).max(1);
            let y = loop {
                let y = rng.random::<f64>() * e.values[x];
                if y > 0.0 {
                    break y;
                }
            };
            let z = table.query(x, y).expect("the excursion ends at 0");
            GluePoint { x, y, z }
        })
        .collect();
    plan.sort_by_key(|p| p.x);
    plan
}

/// A component of `𝒢_λ` or `𝓜_λ`: a graph with edge lengths and vertex masses.
#[derive(Debug, Clone)]
pub struct ContinuumComponent {
    pub graph: EdgeLengthGraph,
    /// Total mass (the excursion duration).
    pub sigma: f64,
    pub surplus: usize,
    /// Start time of the coding excursion.
    pub start: f64,
}

/// Tree coded by the excursion with each Poisson point `(x, y)` glued to the
/// point at height `2y` above `x`, that is, to the image of `z`.
pub fn glue_excursion(e: &Excursion, plan: &GluePlan) -> Result<ContinuumComponent> {
    let mut tree = tree_from_excursion(e);
    let mut pairs = Vec::with_capacity(plan.len());
    for p in plan {
        let v = tree.tau[p.x];
        let a = tree.ancestor_at(v, 2.0 * p.y);
        if a == v {
            return Err(Error::Domain(format!("glue point at index {} has level equal to its height", p.x)));
        }
        pairs.push((v, a));
    }
    let graph = glue(&tree.graph, &pairs)?;
    Ok(ContinuumComponent { graph, sigma: e.sigma(), surplus: plan.len(), start: e.start_time() })
}

/// Time horizon and mesh for the continuum samplers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumParams {
    pub lambda: f64,
    pub horizon: f64,
    pub mesh: f64,
}

impl ContinuumParams {
    /// Defaults `T = max(10, 4λ + 32)` and `h = 2·10⁻⁴ · max(1, λ)`.
    pub fn new(lambda: f64) -> Self {
        ContinuumParams { lambda, horizon: (4.0 * lambda + 32.0).max(10.0), mesh: 2e-4 * lambda.max(1.0) }
    }

    pub fn with_mesh(self, mesh: f64) -> Self {
        ContinuumParams { mesh, ..self }
    }

    pub fn with_horizon(self, horizon: f64) -> Self {
        ContinuumParams { horizon, ..self }
    }

    /// The excursions of `B_λ`, longest first.
    pub fn excursions(&self, seed: u64) -> Result<Vec<Excursion>> {
        let path = sample_w_lambda(self.lambda, self.horizon, self.mesh, split_seed(seed, 0))?;
        Ok(extract_excursions(&path))
    }
}

/// The first `max_components` components of `𝒢_λ`, by decreasing mass.
///
/// Seeds: the path uses stream 0 of `seed`; the Poisson points of component
/// `i` use stream `i` of stream 1.
pub fn sample_g_lambda(params: &ContinuumParams, seed: u64, max_components: usize) -> Result<Vec<ContinuumComponent>> {
    let glue_seed = split_seed(seed, 1);
    params
        .excursions(seed)?
        .iter()
        .take(max_components)
        .enumerate()
        .map(|(i, e)| {
            let mut rng = rng_from_seed(split_seed(glue_seed, i as u64));
            glue_excursion(e, &poisson_glue_plan(e, &mut rng))
        })
        .collect()
}

/// `𝓜_λ`: each component of `𝒢_λ` cut independently (stream `i` of stream 2).
pub fn sample_m_lambda(params: &ContinuumParams, seed: u64, max_components: usize) -> Result<Vec<ContinuumComponent>> {
    let cut_seed = split_seed(seed, 2);
    sample_g_lambda(params, seed, max_components)?
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let mut rng = rng_from_seed(split_seed(cut_seed, i as u64));
            let (graph, _) = cut(&c.graph, &mut rng)?;
            Ok(ContinuumComponent { graph, surplus: 0, ..c })
        })
        .collect()
}
