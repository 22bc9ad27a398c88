//! Sample statistics for benchmark reports.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("cannot compute statistics of an empty sample")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n − 1 divisor); 0 for a single sample.
    pub stddev: f64,
    /// Standard error of the mean, `stddev / sqrt(n)`.
    pub sem: f64,
    pub min: f64,
    pub max: f64,
}

pub fn compute_stats(samples: &[f64]) -> Result<RunStats, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::Empty);
    }
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let stddev = if n > 1 {
        let sum_sq: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
        (sum_sq / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &x in samples {
        min = min.min(x);
        max = max.max(x);
    }
    Ok(RunStats { n, mean, stddev, sem: stddev / (n as f64).sqrt(), min, max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hand_computed_sample() {
        let stats = compute_stats(&[2.0, 4.0, 6.0]).unwrap();
        assert!((stats.mean - 4.0).abs() < 1e-12);
        assert!((stats.stddev - 2.0).abs() < 1e-12);
        assert!((stats.sem - 2.0 / 3.0_f64.sqrt()).abs() < 1e-12);
        assert_eq!(stats.min, 2.0);
        assert_eq!(stats.max, 6.0);
    }

    #[test]
    fn single_sample_has_zero_spread() {
        let stats = compute_stats(&[5.0]).unwrap();
        assert_eq!(stats.mean, 5.0);
        assert_eq!(stats.stddev, 0.0);
        assert_eq!(stats.sem, 0.0);
    }

    #[test]
    fn constant_samples_have_zero_stddev() {
        for c in [-3.5, 0.0, 17.25] {
            let stats = compute_stats(&[c, c, c, c]).unwrap();
            assert_eq!(stats.stddev, 0.0);
        }
    }

    #[test]
    fn empty_sample_is_an_error() {
        assert_eq!(compute_stats(&[]), Err(StatsError::Empty));
    }

    /// Welford's online accumulation as an independent route.
    fn welford(samples: &[f64]) -> (f64, f64) {
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for (i, &x) in samples.iter().enumerate() {
            let delta = x - mean;
            mean += delta / (i + 1) as f64;
            m2 += delta * (x - mean);
        }
        let var = if samples.len() > 1 {
            m2 / (samples.len() - 1) as f64
        } else {
            0.0
        };
        (mean, var.sqrt())
    }

    #[test]
    fn matches_welford_reference_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let n = rng.gen_range(1..400);
            let samples: Vec<f64> =
                (0..n).map(|_| rng.gen_range(-1e4..1e4)).collect();
            let stats = compute_stats(&samples).unwrap();
            let (mean, stddev) = welford(&samples);
            assert!((stats.mean - mean).abs() <= 1e-12 * mean.abs().max(1.0));
            assert!(
                (stats.stddev - stddev).abs() <= 1e-12 * stddev.abs().max(1.0)
            );
        }
    }
}
