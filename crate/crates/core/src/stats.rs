//! Binomial interval estimates.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
/// Returns `(0, 1)` when `n == 0`. The interval always contains the point
/// estimate.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let center = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    let lo = (center - half).clamp(0.0, 1.0).min(p);
    let hi = (center + half).clamp(0.0, 1.0).max(p);
    (lo, hi)
}

/// Standard deviation of a binomial proportion with success probability `p`.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_known_value() {
        // 10/100 at 95%: [0.0552, 0.1744] (standard tabulated value).
        let (lo, hi) = wilson_interval(10, 100, Z95);
        assert!((lo - 0.05523).abs() < 1e-4, "{lo}");
        assert!((hi - 0.17437).abs() < 1e-4, "{hi}");
    }

    #[test]
    fn wilson_degenerate_cases() {
        let (lo, hi) = wilson_interval(0, 1, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.5 && hi < 1.0);
        let (lo, hi) = wilson_interval(1, 1, Z95);
        assert_eq!(hi, 1.0);
        assert!(lo > 0.0 && lo < 0.5);
        assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
    }

    #[test]
    fn wilson_contains_estimate() {
        for n in 1..60u64 {
            for k in 0..=n {
                let (lo, hi) = wilson_interval(k, n, Z95);
                let p = k as f64 / n as f64;
                assert!(lo <= p && p <= hi && (0.0..=1.0).contains(&lo) && hi <= 1.0);
            }
        }
    }
}
