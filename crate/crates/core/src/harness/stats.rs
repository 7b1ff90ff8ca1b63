//! Robust summaries of Monte Carlo estimates.

use crate::error::{Error, Result};

/// Consistency factor of the MAD for the Gaussian standard deviation.
pub const MAD_SCALE: f64 = 1.4826;

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn median_of_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        let (a, b) = (v[n / 2 - 1], v[n / 2]);
        if a == b {
            a
        } else {
            0.5 * a + 0.5 * b
        }
    }
}

pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(median_of_sorted(&sorted(values)))
}

/// `(median, 1.4826 * median |x - median|)`.
pub fn robust_stats(values: &[f64]) -> Result<(f64, f64)> {
    let med = median(values)?;
    let dev: Vec<f64> = values.iter().map(|x| (x - med).abs()).collect();
    let mad = median(&dev)?;
    Ok((med, MAD_SCALE * mad))
}

/// `|t - theta| / (|t - theta| + 1)`; non-finite `t` counts as 1.
pub fn bounded_error(t: f64, theta: f64) -> f64 {
    let e = (t - theta).abs();
    if e.is_finite() {
        e / (e + 1.0)
    } else {
        1.0
    }
}

/// Mean bounded error of `estimates` about `theta`.
pub fn d_be(estimates: &[f64], theta: f64) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::EmptySample);
    }
    if !theta.is_finite() {
        return Err(Error::InvalidParams(format!("target must be finite, got {theta}")));
    }
    Ok(estimates.iter().map(|&t| bounded_error(t, theta)).sum::<f64>() / estimates.len() as f64)
}

/// Running means of the prefixes of `values`.
pub fn running_mean(values: &[f64]) -> Vec<f64> {
    let mut sum = 0.0;
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            sum += v;
            sum / (i + 1) as f64
        })
        .collect()
}

/// Running medians of the prefixes of `values`.
pub fn running_median(values: &[f64]) -> Vec<f64> {
    let mut window: Vec<f64> = Vec::with_capacity(values.len());
    values
        .iter()
        .map(|&v| {
            let at = window.partition_point(|&w| w.total_cmp(&v).is_lt());
            window.insert(at, v);
            median_of_sorted(&window)
        })
        .collect()
}

/// Running maxima of the prefixes of `values`.
pub fn running_max(values: &[f64]) -> Vec<f64> {
    let mut best = f64::NEG_INFINITY;
    values
        .iter()
        .map(|&v| {
            best = best.max(v);
            best
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn robust_stats_small_cases() {
        assert_eq!(robust_stats(&[1.0, 2.0, 3.0]).unwrap(), (2.0, MAD_SCALE));
        assert_eq!(robust_stats(&[4.5; 7]).unwrap(), (4.5, 0.0));
        assert_eq!(median(&[1.0, 2.0, 3.0, 10.0]).unwrap(), 2.5);
        assert!(median(&[]).is_err());
    }

    #[test]
    fn bounded_error_cases() {
        assert_eq!(d_be(&[3.0, 3.0], 3.0).unwrap(), 0.0);
        assert_eq!(d_be(&[4.0], 3.0).unwrap(), 0.5);
        assert_eq!(d_be(&[f64::INFINITY], 3.0).unwrap(), 1.0);
        assert_eq!(d_be(&[f64::NEG_INFINITY, 3.0], 3.0).unwrap(), 0.5);
        assert!(bounded_error(1e300, 0.0) <= 1.0);
        assert!(d_be(&[], 1.0).is_err());
    }

    #[test]
    fn running_statistics() {
        let v = [3.0, 1.0, 2.0, 10.0];
        assert_eq!(running_mean(&v), vec![3.0, 2.0, 2.0, 4.0]);
        assert_eq!(running_median(&v), vec![3.0, 2.0, 2.0, 2.5]);
        assert_eq!(running_max(&v), vec![3.0, 3.0, 3.0, 10.0]);
    }

    #[test]
    fn running_median_matches_batch_median() {
        let v: Vec<f64> = (0..101).map(|i| ((i * 37) % 101) as f64).collect();
        let rm = running_median(&v);
        for k in [1, 2, 50, 101] {
            assert_relative_eq!(rm[k - 1], median(&v[..k]).unwrap());
        }
    }

    #[test]
    fn scaled_mad_is_consistent_for_gaussian_data() {
        use rand::Rng;
        let mut rng = crate::sampler::rng_from_seed(5);
        let z: Vec<f64> = (0..100_000)
            .map(|_| {
                let (u, v): (f64, f64) = (1.0 - rng.gen::<f64>(), rng.gen());
                (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
            })
            .collect();
        let (_, mad) = robust_stats(&z).unwrap();
        assert!((mad - 1.0).abs() < 0.02, "scaled MAD {mad}");
    }
}
