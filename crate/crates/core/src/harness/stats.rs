use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sided 99% normal quantile.
pub const WILSON_Z: f64 = 2.5758293035489004;

/// Wilson score interval at 99% for `successes` out of `trials`.
pub fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let center = p + z2 / (2.0 * n);
    let spread = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let denom = 1.0 + z2 / n;
    (
        ((center - spread) / denom).max(0.0),
        ((center + spread) / denom).min(1.0),
    )
}

/// Standard deviation of a frequency over `trials` draws with success
/// probability `p`.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Pearson goodness-of-fit p-value of `observed` counts against the
/// probabilities `expected`, which should sum to 1. Cells with zero expected
/// mass must be empty; otherwise the p-value is 0.
pub fn chi_square_p_value(observed: &[u64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    let total: u64 = observed.iter().sum();
    let n = total as f64;
    let mut stat = 0.0;
    let mut cells = 0;
    for (&o, &p) in observed.iter().zip(expected) {
        if p <= 0.0 {
            if o > 0 {
                return 0.0;
            }
            continue;
        }
        let e = p * n;
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    if cells < 2 {
        return 1.0;
    }
    let dist = ChiSquared::new((cells - 1) as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(stat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        let (lo, hi) = wilson(50, 100);
        assert!((lo - 0.3753).abs() < 1e-4 && (hi - 0.6247).abs() < 1e-4, "{lo} {hi}");
        let (lo, hi) = wilson(0, 1000);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.01);
        assert_eq!(wilson(0, 0), (0.0, 1.0));
        let (lo, hi) = wilson(1000, 1000);
        assert!(lo > 0.99 && hi > 1.0 - 1e-12);
    }

    #[test]
    fn chi_square_extremes() {
        assert!(chi_square_p_value(&[500, 500], &[0.5, 0.5]) > 0.99);
        assert!(chi_square_p_value(&[900, 100], &[0.5, 0.5]) < 1e-10);
        assert_eq!(chi_square_p_value(&[1, 9], &[0.0, 1.0]), 0.0);
        assert_eq!(chi_square_p_value(&[10], &[1.0]), 1.0);
        // Statistic 2 on 3 degrees of freedom.
        let obs = [30, 20, 25, 25];
        let p = chi_square_p_value(&obs, &[0.25; 4]);
        assert!((p - 0.5724).abs() < 1e-3, "{p}");
    }
}
