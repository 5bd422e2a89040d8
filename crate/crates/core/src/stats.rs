//! Interval estimates used when reporting Monte Carlo results.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Mean and 95% normal half-width of integer samples.
pub fn mean_and_half_width(sum: u128, sum_sq: u128, count: u64) -> (f64, f64) {
    if count == 0 {
        return (0.0, 0.0);
    }
    let n = count as f64;
    let mean = sum as f64 / n;
    if count < 2 {
        return (mean, 0.0);
    }
    // Exact integer arithmetic for the centred sum of squares.
    let centred = (count as u128 * sum_sq).saturating_sub(sum * sum) as f64 / n;
    let var = centred / (n - 1.0);
    (mean, Z95 * (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(0, 100, Z95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.036_995).abs() < 1e-5);
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!(lo < 0.5 && hi > 0.5);
        assert!(((lo + hi) / 2.0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_samples_have_zero_width() {
        let (m, h) = mean_and_half_width(7 * 10, 49 * 10, 10);
        assert_eq!(m, 7.0);
        assert_eq!(h, 0.0);
        let (m, h) = mean_and_half_width(1 + 3, 1 + 9, 2);
        assert_eq!(m, 2.0);
        // sample sd sqrt(2), half-width 1.96 * sqrt(2) / sqrt(2)
        assert!((h - Z95).abs() < 1e-12);
    }
}
