//! Finite metric measure spaces and the metric side of graphs with edge
//! lengths: shortest-path distances, diameters, covering numbers,
//! box-counting slopes and (tiny) Gromov–Hausdorff distances.

mod covering;
mod gh;
mod paths;

pub use covering::{covering_number_exact, covering_number_greedy, geometric_radii, minkowski_slope, GreedyCover, SlopeFit};
pub use gh::{distortion, gh_exact, ghp_upper_bound, Correspondence, GhSolution};
pub use paths::{diameter, dijkstra, double_sweep, Diameter};

use std::fmt::Write as _;

use crate::rgraph::EdgeLengthGraph;
use crate::{Error, Result};

/// Largest vertex count [`realize`] accepts by default.
pub const REALIZE_CAP: usize = 4096;

/// A finite metric space with a measure, as a dense distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricMeasureSpace {
    n: usize,
    d: Vec<f64>,
    mass: Vec<f64>,
}

impl FiniteMetricMeasureSpace {
    /// Validates symmetry, a zero diagonal and nonnegative entries.
    pub fn new(d: Vec<Vec<f64>>, mass: Vec<f64>) -> Result<Self> {
        let n = d.len();
        if mass.len() != n || d.iter().any(|row| row.len() != n) {
            return Err(Error::Domain("distance matrix must be square with one mass per point".into()));
        }
        for i in 0..n {
            if d[i][i] != 0.0 {
                return Err(Error::Domain(format!("nonzero diagonal entry at {i}")));
            }
            for j in 0..n {
                if !(d[i][j] >= 0.0 && d[i][j].is_finite()) || d[i][j] != d[j][i] {
                    return Err(Error::Domain(format!("entry ({i}, {j}) is negative, infinite or asymmetric")));
                }
            }
        }
        if mass.iter().any(|m| !(*m >= 0.0 && m.is_finite())) {
            return Err(Error::Domain("masses must be finite and nonnegative".into()));
        }
        Ok(FiniteMetricMeasureSpace { n, d: d.into_iter().flatten().collect(), mass })
    }

    /// Points with zero mass.
    pub fn unweighted(d: Vec<Vec<f64>>) -> Result<Self> {
        let n = d.len();
        Self::new(d, vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// Largest violation of `d(i,k) ≤ d(i,j) + d(j,k)`, or 0.
    pub fn triangle_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    worst = worst.max(self.dist(i, k) - self.dist(i, j) - self.dist(j, k));
                }
            }
        }
        worst
    }

    /// Distances multiplied by `alpha_dist`, masses by `alpha_mass`.
    pub fn rescale(&self, alpha_dist: f64, alpha_mass: f64) -> Result<Self> {
        if !(alpha_dist > 0.0 && alpha_mass > 0.0) {
            return Err(Error::Parameter("rescaling factors must be positive".into()));
        }
        Ok(FiniteMetricMeasureSpace {
            n: self.n,
            d: self.d.iter().map(|x| x * alpha_dist).collect(),
            mass: self.mass.iter().map(|m| m * alpha_mass).collect(),
        })
    }

    /// CSV with one row per point: the distances, then the mass.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                write!(s, "{},", self.dist(i, j)).unwrap();
            }
            writeln!(s, "{}", self.mass[i]).unwrap();
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut d = Vec::new();
        let mut mass = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let mut row: Vec<f64> = line
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad number {t:?}") }))
                .collect::<Result<_>>()?;
            mass.push(row.pop().ok_or(Error::Parse { line: i + 1, msg: "empty row".into() })?);
            d.push(row);
        }
        Self::new(d, mass)
    }
}

/// Shortest-path metric on the vertices, masses copied (zero when absent).
pub fn realize(g: &EdgeLengthGraph) -> Result<FiniteMetricMeasureSpace> {
    realize_capped(g, REALIZE_CAP)
}

pub fn realize_capped(g: &EdgeLengthGraph, cap: usize) -> Result<FiniteMetricMeasureSpace> {
    if g.n() > cap {
        return Err(Error::SizeCap(format!("{} vertices exceed the all-pairs cap of {cap}", g.n())));
    }
    if g.n() == 0 || !g.graph().is_connected() {
        return Err(Error::Disconnected);
    }
    let adj = g.weighted_adjacency();
    let mut d = Vec::with_capacity(g.n());
    for s in 0..g.n() {
        let mut row = dijkstra(&adj, &[s]);
        row[s] = 0.0;
        d.push(row);
    }
    // symmetrise rounding differences between the two directions
    for i in 0..g.n() {
        for j in 0..i {
            let m = d[i][j].min(d[j][i]);
            d[i][j] = m;
            d[j][i] = m;
        }
    }
    let mass = (0..g.n()).map(|v| g.mass(v)).collect();
    FiniteMetricMeasureSpace::new(d, mass)
}
