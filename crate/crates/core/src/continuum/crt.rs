use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{tree_from_excursion, Excursion, ExcursionTree};
use crate::rng::rng_from_seed;
use crate::{Error, Result};

/// Standard excursion on `m` steps of `[0, 1]`: the Vervaat transform of a
/// Gaussian bridge (rotate at the minimum, shift the minimum to zero).
pub fn normalized_excursion<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    let sd = (1.0 / m as f64).sqrt();
    let mut walk = Vec::with_capacity(m + 1);
    walk.push(0.0);
    let mut s = 0.0;
    for _ in 0..m {
        let z: f64 = StandardNormal.sample(rng);
        s += sd * z;
        walk.push(s);
    }
    let end = walk[m];
    let bridge: Vec<f64> = walk.iter().enumerate().map(|(k, w)| w - k as f64 / m as f64 * end).collect();
    let argmin = (0..m).min_by(|&a, &b| bridge[a].total_cmp(&bridge[b])).expect("m ≥ 1");
    let low = bridge[argmin];
    let mut out: Vec<f64> = (0..m).map(|j| bridge[(argmin + j) % m] - low).collect();
    out.push(0.0);
    out
}

/// Brownian CRT of the given mass, coded by twice a normalised excursion on
/// `⌈1/h⌉` grid steps, distances scaled by `√mass` and masses by `mass`.
pub fn sample_crt(mass: f64, h: f64, seed: u64) -> Result<ExcursionTree> {
    if !(mass > 0.0 && mass.is_finite()) || !(h > 0.0 && h <= 1.0) {
        return Err(Error::Parameter(format!("need mass > 0 and 0 < h ≤ 1, got mass={mass}, h={h}")));
    }
    let m = (1.0 / h).ceil() as usize;
    let mut rng = rng_from_seed(seed);
    loop {
        let scale = mass.sqrt();
        let values: Vec<f64> = normalized_excursion(m, &mut rng).into_iter().map(|v| v * scale).collect();
        // an interior zero (a tied minimum) has probability zero; redraw if it happens
        if let Ok(e) = Excursion::new(mass / m as f64, values) {
            return Ok(tree_from_excursion(&e));
        }
    }
}

/// `P(height ≥ x)` by the alternating series `Σ_{k≥1} (-1)^{k+1} e^{-k²x²}`.
pub fn theta_series_tail(x: f64) -> f64 {
    let mut sum = 0.0;
    for k in 1..200 {
        let term = (-((k * k) as f64) * x * x).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excursion_shape() {
        let mut rng = rng_from_seed(3);
        let e = normalized_excursion(500, &mut rng);
        assert_eq!(e.len(), 501);
        assert_eq!(e[0], 0.0);
        assert_eq!(e[500], 0.0);
        assert!(e[1..500].iter().all(|&v| v > 0.0));
    }

    #[test]
    fn crt_mass_and_height() {
        let t = sample_crt(2.0, 1e-3, 5).unwrap();
        assert!((t.graph.total_mass() - 2.0).abs() < 1e-9);
        assert!(t.max_height() > 0.0);
        assert_eq!(t.height[t.root()], 0.0);
    }

    #[test]
    fn series_value() {
        assert!((theta_series_tail(1.0) - 0.349_69).abs() < 1e-5);
    }

    #[test]
    fn max_of_normalized_excursion() {
        // E[max e] = √(π/2) for the normalised excursion; the grid maximum sits slightly below
        let mut rng = rng_from_seed(11);
        let reps = 2000;
        let mean: f64 = (0..reps)
            .map(|_| normalized_excursion(2000, &mut rng).into_iter().fold(0.0, f64::max))
            .sum::<f64>()
            / reps as f64;
        assert!((mean - 1.2533).abs() < 0.03, "mean {mean}");
    }
}
