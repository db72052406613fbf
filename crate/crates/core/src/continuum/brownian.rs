use rand_distr::{Distribution, Normal};

use crate::rng::rng_from_seed;
use crate::{Error, Result};

/// A real function sampled at times `0, h, 2h, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPath {
    pub h: f64,
    pub values: Vec<f64>,
}

impl GridPath {
    pub fn new(h: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Parameter(format!("mesh must be positive, got {h}")));
        }
        if values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("a grid path needs at least two finite values".into()));
        }
        Ok(GridPath { h, values })
    }

    pub fn horizon(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.h
    }
}

/// `W_λ(t) = W(t) + λt - t²/2` on `[0, T]`, from Normal(0, h) increments.
pub fn sample_w_lambda(lambda: f64, horizon: f64, h: f64, seed: u64) -> Result<GridPath> {
    if !(horizon > 0.0 && horizon.is_finite()) || !(h > 0.0 && h.is_finite()) {
        return Err(Error::Parameter(format!("horizon and mesh must be positive, got T={horizon}, h={h}")));
    }
    if !lambda.is_finite() {
        return Err(Error::Parameter(format!("lambda must be finite, got {lambda}")));
    }
    let steps = ((horizon / h).round() as usize).max(1);
    let normal = Normal::new(0.0, h.sqrt()).expect("positive standard deviation");
    let mut rng = rng_from_seed(seed);
    let mut values = Vec::with_capacity(steps + 1);
    let mut w = 0.0;
    values.push(0.0);
    for k in 1..=steps {
        w += normal.sample(&mut rng);
        let t = k as f64 * h;
        values.push(w + lambda * t - t * t / 2.0);
    }
    GridPath::new(h, values)
}

/// A grid excursion: zero at both ends, positive in between.
#[derive(Debug, Clone, PartialEq)]
pub struct Excursion {
    pub h: f64,
    pub values: Vec<f64>,
    /// Grid index of the start within the parent path (0 when standalone).
    pub start: usize,
}

impl Excursion {
    pub fn new(h: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Parameter(format!("mesh must be positive, got {h}")));
        }
        let m = values.len();
        if m < 2 || values[0] != 0.0 || values[m - 1] != 0.0 {
            return Err(Error::Domain("an excursion starts and ends at 0".into()));
        }
        if values[1..m - 1].iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::Domain("an excursion is positive in its interior".into()));
        }
        Ok(Excursion { h, values, start: 0 })
    }

    /// Duration `σ`.
    pub fn sigma(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.h
    }

    /// Riemann sum `h · Σ values`.
    pub fn area(&self) -> f64 {
        self.h * self.values.iter().sum::<f64>()
    }

    pub fn start_time(&self) -> f64 {
        self.start as f64 * self.h
    }
}

/// Excursions of `B(t) = W(t) - min_{s≤t} W(s)` above zero, longest first
/// (ties by start time). An excursion still open at the horizon is closed
/// by clamping its last value to zero.
pub fn extract_excursions(path: &GridPath) -> Vec<Excursion> {
    let mut running_min = f64::INFINITY;
    let b: Vec<f64> = path
        .values
        .iter()
        .map(|&w| {
            running_min = running_min.min(w);
            w - running_min
        })
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < b.len() {
        if b[i] == 0.0 && b[i + 1] > 0.0 {
            let mut j = i + 1;
            while j < b.len() && b[j] > 0.0 {
                j += 1;
            }
            let end = j.min(b.len() - 1);
            let mut values = b[i..=end].to_vec();
            *values.last_mut().expect("nonempty") = 0.0;
            out.push(Excursion { h: path.h, values, start: i });
            i = end;
        } else {
            i += 1;
        }
    }
    out.sort_by(|a, b| b.values.len().cmp(&a.values.len()).then(a.start.cmp(&b.start)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decreasing_path_has_no_excursions() {
        let p = GridPath::new(1.0, vec![0.0, -1.0, -2.0, -2.5]).unwrap();
        assert!(extract_excursions(&p).is_empty());
    }

    #[test]
    fn reads_excursions_off_the_grid() {
        let p = GridPath::new(1.0, vec![0.0, 1.0, 0.0, 2.0, 1.0, 0.0]).unwrap();
        let ex = extract_excursions(&p);
        let durations: Vec<f64> = ex.iter().map(Excursion::sigma).collect();
        assert_eq!(durations, vec![3.0, 2.0]);
        assert_eq!(ex[0].values, vec![0.0, 2.0, 1.0, 0.0]);
        assert_eq!(ex[0].start, 2);
    }

    #[test]
    fn open_excursion_is_clamped() {
        let p = GridPath::new(0.5, vec![0.0, -1.0, 0.5, 1.0]).unwrap();
        let ex = extract_excursions(&p);
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0].values, vec![0.0, 1.5, 0.0]);
        assert_eq!(ex[0].start_time(), 0.5);
    }

    #[test]
    fn drift_and_variance() {
        let reps = 10_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for seed in 0..reps {
            let p = sample_w_lambda(0.0, 1.0, 0.01, seed).unwrap();
            let x = p.values[100];
            s += x;
            s2 += x * x;
        }
        let mean = s / reps as f64;
        let var = s2 / reps as f64 - mean * mean;
        assert!((mean + 0.5).abs() < 0.04, "mean {mean}");
        assert!((var - 1.0).abs() < 0.06, "var {var}");
    }

    #[test]
    fn deterministic_and_validated() {
        assert_eq!(sample_w_lambda(1.0, 5.0, 0.1, 3).unwrap(), sample_w_lambda(1.0, 5.0, 0.1, 3).unwrap());
        assert!(sample_w_lambda(1.0, 0.0, 0.1, 3).is_err());
        assert!(sample_w_lambda(1.0, 1.0, -0.1, 3).is_err());
        assert!(Excursion::new(1.0, vec![0.0, 0.0, 0.0]).is_err());
    }
}
