//! Summary statistics and the two-sample Kolmogorov–Smirnov test.

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance (0 for fewer than two points).
pub fn variance(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64
}

/// Standard error of the mean.
pub fn std_error(x: &[f64]) -> f64 {
    (variance(x) / x.len() as f64).sqrt()
}

/// `ζ(s)` for `s > 1`: a partial sum plus the Euler–Maclaurin tail.
pub fn zeta(s: f64) -> f64 {
    let k = 1000.0f64;
    let head: f64 = (1..1000).map(|j| (j as f64).powf(-s)).sum();
    head + k.powf(1.0 - s) / (s - 1.0) + 0.5 * k.powf(-s) + s * k.powf(-s - 1.0) / 12.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value
/// `Q((√m + 0.12 + 0.11/√m) D)`, `m = n₁n₂/(n₁+n₂)`.
///
/// Panics on an empty sample or NaN.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> KsResult {
    assert!(!x.is_empty() && !y.is_empty(), "samples must be nonempty");
    let mut a = x.to_vec();
    let mut b = y.to_vec();
    a.sort_by(|p, q| p.partial_cmp(q).expect("no NaN"));
    b.sort_by(|p, q| p.partial_cmp(q).expect("no NaN"));
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n1 - j as f64 / n2).abs());
    }
    let m = (n1 * n2 / (n1 + n2)).sqrt();
    KsResult { statistic: d, p_value: kolmogorov_q((m + 0.12 + 0.11 / m) * d) }
}

/// `Q(λ) = 2 Σ (-1)^{k-1} e^{-2k²λ²}`, the Kolmogorov tail.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
