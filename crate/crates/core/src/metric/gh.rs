use super::FiniteMetricMeasureSpace;
use crate::{Error, Result};

const GH_CAP: usize = 12;

/// A relation between the points of two spaces, surjective on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(pairs: Vec<(usize, usize)>, na: usize, nb: usize) -> Result<Self> {
        let mut left = vec![false; na];
        let mut right = vec![false; nb];
        for &(a, b) in &pairs {
            if a >= na || b >= nb {
                return Err(Error::Domain(format!("pair ({a}, {b}) outside the spaces")));
            }
            left[a] = true;
            right[b] = true;
        }
        if left.iter().chain(&right).any(|x| !x) {
            return Err(Error::Domain("a correspondence must cover every point of both spaces".into()));
        }
        Ok(Correspondence { pairs })
    }

    /// `{(i, i)}` between two spaces of the same size.
    pub fn identity(n: usize) -> Self {
        Correspondence { pairs: (0..n).map(|i| (i, i)).collect() }
    }

    /// Every pair.
    pub fn full(na: usize, nb: usize) -> Self {
        Correspondence { pairs: (0..na).flat_map(|a| (0..nb).map(move |b| (a, b))).collect() }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }
}

/// `sup |d(x, y) - d'(x', y')|` over pairs `(x, x'), (y, y')` of the correspondence.
pub fn distortion(c: &Correspondence, a: &FiniteMetricMeasureSpace, b: &FiniteMetricMeasureSpace) -> f64 {
    let p = c.pairs();
    let mut worst: f64 = 0.0;
    for (i, &(x, xp)) in p.iter().enumerate() {
        for &(y, yp) in &p[i + 1..] {
            worst = worst.max((a.dist(x, y) - b.dist(xp, yp)).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhSolution {
    /// `½ · min dis(C)`.
    pub distance: f64,
    /// A correspondence attaining the minimum.
    pub certificate: Correspondence,
}

/// Exact Gromov–Hausdorff distance for `|a| + |b| ≤ 12`.
///
/// Every correspondence contains the union of the graphs of some `f: A → B`
/// and `g: B → A`, and distortion is monotone, so branch and bound over such
/// pairs of maps finds the optimum. Measures are ignored.
pub fn gh_exact(a: &FiniteMetricMeasureSpace, b: &FiniteMetricMeasureSpace) -> Result<GhSolution> {
    let (na, nb) = (a.len(), b.len());
    if na + nb > GH_CAP {
        return Err(Error::SizeCap(format!("{} points exceed the cap of {GH_CAP}", na + nb)));
    }
    if na == 0 || nb == 0 {
        return Err(Error::Domain("spaces must be nonempty".into()));
    }
    let full = Correspondence::full(na, nb);
    let mut best = distortion(&full, a, b);
    let mut best_pairs = full.pairs().to_vec();
    // items 0..na choose an image in B, items na.. choose a preimage in A
    let mut current: Vec<(usize, usize)> = Vec::with_capacity(na + nb);
    search(a, b, 0, 0.0, &mut current, &mut best, &mut best_pairs);
    let certificate = Correspondence::new(best_pairs, na, nb)?;
    Ok(GhSolution { distance: best / 2.0, certificate })
}

fn search(
    a: &FiniteMetricMeasureSpace,
    b: &FiniteMetricMeasureSpace,
    item: usize,
    dis: f64,
    current: &mut Vec<(usize, usize)>,
    best: &mut f64,
    best_pairs: &mut Vec<(usize, usize)>,
) {
    let (na, nb) = (a.len(), b.len());
    if item == na + nb {
        if dis < *best {
            *best = dis;
            *best_pairs = current.clone();
        }
        return;
    }
    let candidates: Vec<(usize, usize)> =
        if item < na { (0..nb).map(|y| (item, y)).collect() } else { (0..na).map(|x| (x, item - na)).collect() };
    let mut scored: Vec<((usize, usize), f64)> = candidates
        .into_iter()
        .map(|(x, y)| {
            let d = current.iter().fold(dis, |m, &(u, v)| m.max((a.dist(x, u) - b.dist(y, v)).abs()));
            ((x, y), d)
        })
        .filter(|&(_, d)| d < *best)
        .collect();
    scored.sort_by(|p, q| p.1.total_cmp(&q.1));
    for ((x, y), d) in scored {
        if d >= *best {
            continue;
        }
        current.push((x, y));
        search(a, b, item + 1, d, current, best, best_pairs);
        current.pop();
    }
}

/// `½ dis(C) ∨ D(π; μ, μ') ∨ π(Cᶜ)`, an upper bound on the
/// Gromov–Hausdorff–Prokhorov distance. `D` is the sum of the total
/// variation norms of the marginal discrepancies.
pub fn ghp_upper_bound(
    a: &FiniteMetricMeasureSpace,
    b: &FiniteMetricMeasureSpace,
    c: &Correspondence,
    pi: &[Vec<f64>],
) -> Result<f64> {
    let (na, nb) = (a.len(), b.len());
    if pi.len() != na || pi.iter().any(|row| row.len() != nb) {
        return Err(Error::Domain("coupling must be an |A| × |B| matrix".into()));
    }
    if pi.iter().flatten().any(|x| !(*x >= 0.0 && x.is_finite())) {
        return Err(Error::Domain("coupling entries must be finite and nonnegative".into()));
    }
    let left: Vec<f64> = pi.iter().map(|row| row.iter().sum()).collect();
    let right: Vec<f64> = (0..nb).map(|j| pi.iter().map(|row| row[j]).sum()).collect();
    let discrepancy: f64 = a.masses().iter().zip(&left).map(|(m, p)| (m - p).abs()).sum::<f64>()
        + b.masses().iter().zip(&right).map(|(m, p)| (m - p).abs()).sum::<f64>();
    let mut inside = vec![vec![false; nb]; na];
    for &(x, y) in c.pairs() {
        inside[x][y] = true;
    }
    let off: f64 = (0..na).flat_map(|i| (0..nb).map(move |j| (i, j))).filter(|&(i, j)| !inside[i][j]).map(|(i, j)| pi[i][j]).sum();
    Ok((distortion(c, a, b) / 2.0).max(discrepancy).max(off))
}
