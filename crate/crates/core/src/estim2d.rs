//! Planar estimators of the boundary length `L0`.
//!
//! The distance law is `lambda U(0,R) + (1 - lambda) R Beta(2,1)` with
//! `lambda = L0 / (L0 + phi0 pi R)`, so every estimator of `lambda` also gives
//! one of `L0 = phi0 pi R lambda / (1 - lambda)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::estimate::{Estimate, Flags, Method};
use crate::rootfind::{brent, Tolerance};
use crate::sampler::DistanceSample;

/// `|2 mean - R| < POLE_FRACTION * R` raises the pole flag on moment estimates.
pub const POLE_FRACTION: f64 = 1e-3;
pub const DEFAULT_EM_TOLERANCE: f64 = 1e-5;
pub const DEFAULT_EM_MAX_ITER: usize = 10_000;
pub const DEFAULT_K: usize = 5;

fn check_phi0(phi0: f64) -> Result<f64> {
    if phi0 > 0.0 && phi0.is_finite() {
        Ok(phi0 * PI)
    } else {
        Err(Error::InvalidParams(format!("phi0 must be positive, got {phi0}")))
    }
}

fn nonempty(sample: &DistanceSample) -> Result<()> {
    if sample.is_empty() {
        Err(Error::EmptySample)
    } else {
        Ok(())
    }
}

/// Moment estimator `(2 phi0 pi R / 3) (2R - 3 mean) / (2 mean - R)`.
pub fn mom_l0(sample: &DistanceSample, phi0: f64) -> Result<Estimate> {
    let mean = sample.mean()?;
    mom_l0_from_mean(mean, sample.band_radius, phi0).map(|e| Estimate { n: sample.len(), ..e })
}

/// [`mom_l0`] from a given sample mean.
pub fn mom_l0_from_mean(mean: f64, band: f64, phi0: f64) -> Result<Estimate> {
    let p = check_phi0(phi0)?;
    let den = 2.0 * mean - band;
    if den == 0.0 {
        return Err(Error::Pole);
    }
    let value = 2.0 * p * band / 3.0 * (2.0 * band - 3.0 * mean) / den;
    let asymp_variance = (value > 0.0).then(|| mom_asymp_var(value, band, phi0));
    Ok(Estimate {
        value,
        method: Method::Mom,
        n: 1,
        asymp_variance,
        flags: Flags { pole_proximity: den.abs() < POLE_FRACTION * band, ..Flags::default() },
    })
}

/// `(L + p R)^2 [3 (1 + L / (p R))^2 - 1]` with `p = phi0 pi`.
pub fn mom_asymp_var(l0: f64, band: f64, phi0: f64) -> f64 {
    let p = phi0 * PI;
    let t = 1.0 + l0 / (p * band);
    (l0 + p * band).powi(2) * (3.0 * t * t - 1.0)
}

/// Fisher information of one observation about `L0`.
pub fn fisher_info2d(l0: f64, band: f64, phi0: f64) -> f64 {
    let p = phi0 * PI;
    let s = l0 + p * band;
    (1.0 / s) * ((2.0 * p * band / l0).ln_1p() / (2.0 * p * band) - 1.0 / s)
}

pub fn mle_asymp_var(l0: f64, band: f64, phi0: f64) -> f64 {
    1.0 / fisher_info2d(l0, band, phi0)
}

/// Likelihood score divided by `n`: `mean 1/(L + 2 p D_i) - 1/(L + p R)`.
/// It has the sign of the derivative of the log-likelihood in `L`.
pub fn mle_score(sample: &DistanceSample, l0: f64, phi0: f64) -> f64 {
    let p = phi0 * PI;
    let n = sample.len() as f64;
    sample.values.iter().map(|d| 1.0 / (l0 + 2.0 * p * d)).sum::<f64>() / n
        - 1.0 / (l0 + p * sample.band_radius)
}

pub fn default_search_cap(band: f64, phi0: f64) -> f64 {
    1e3 * phi0 * PI * band
}

/// Maximum likelihood estimate of `L0` on `(0, search_cap]`.
///
/// The likelihood in `lambda` is concave, so the score changes sign at most
/// once. When it never becomes negative the estimate is `search_cap`, when it
/// is never positive the estimate is `0`; both carry `boundary_hit`.
pub fn mle_l0(sample: &DistanceSample, phi0: f64, search_cap: Option<f64>) -> Result<Estimate> {
    check_phi0(phi0)?;
    nonempty(sample)?;
    let band = sample.band_radius;
    let cap = search_cap.unwrap_or_else(|| default_search_cap(band, phi0));
    if !(cap > 0.0 && cap.is_finite()) {
        return Err(Error::InvalidParams(format!("search cap must be positive, got {cap}")));
    }
    let n = sample.len();
    let boundary = |value: f64| Estimate {
        value,
        method: Method::Mle,
        n,
        asymp_variance: None,
        flags: Flags { boundary_hit: true, ..Flags::default() },
    };
    // Score sign as L -> infinity is the sign of R - 2 mean.
    if sample.mean()? <= band / 2.0 {
        return Ok(boundary(cap));
    }
    // Score sign at L = 0 is the sign of mean R / (2 D_i) - 1.
    let at_zero: f64 = sample.values.iter().map(|d| band / (2.0 * d)).sum();
    if at_zero <= n as f64 {
        return Ok(boundary(0.0));
    }
    let score = |l: f64| mle_score(sample, l, phi0);
    if score(cap) > 0.0 {
        return Ok(boundary(cap));
    }
    let lo = cap * 1e-15;
    if score(lo) <= 0.0 {
        return Ok(boundary(lo));
    }
    let value = brent(score, lo, cap, Tolerance::default())?;
    Ok(Estimate {
        value,
        method: Method::Mle,
        n,
        asymp_variance: Some(mle_asymp_var(value, band, phi0)),
        flags: Flags::default(),
    })
}

/// `4 - 6 mean / R`, unclamped.
pub fn lambda_mom(sample: &DistanceSample) -> Result<f64> {
    Ok(4.0 - 6.0 * sample.mean()? / sample.band_radius)
}

/// [`lambda_mom`] clamped to `[0, 1]`.
pub fn lambda_mom_clamped(sample: &DistanceSample) -> Result<f64> {
    Ok(lambda_mom(sample)?.clamp(0.0, 1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmFit {
    pub lambda: f64,
    pub iterations: usize,
    /// Log-likelihood after each iteration, starting with the initial value.
    pub loglik: Vec<f64>,
}

/// EM iterations for the mixture weight, from `lambda = 0.5` until successive
/// values differ by less than `tolerance`.
pub fn lambda_em(sample: &DistanceSample, tolerance: f64, max_iter: usize) -> Result<EmFit> {
    nonempty(sample)?;
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidParams(format!("EM tolerance must be positive, got {tolerance}")));
    }
    let band = sample.band_radius;
    let n = sample.len() as f64;
    let f1 = 1.0 / band;
    let f2: Vec<f64> = sample.values.iter().map(|d| 2.0 * d / (band * band)).collect();
    let loglik = |lambda: f64| -> f64 {
        f2.iter().map(|g| (lambda * f1 + (1.0 - lambda) * g).ln()).sum()
    };
    let mut lambda = 0.5;
    let mut trace = vec![loglik(lambda)];
    let mut last_step = f64::INFINITY;
    for k in 1..=max_iter {
        let next = f2
            .iter()
            .map(|g| {
                let a = lambda * f1;
                a / (a + (1.0 - lambda) * g)
            })
            .sum::<f64>()
            / n;
        last_step = (next - lambda).abs();
        lambda = next;
        trace.push(loglik(lambda));
        if last_step < tolerance {
            return Ok(EmFit { lambda, iterations: k, loglik: trace });
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, last_step })
}

/// `L0 = p R lambda / (1 - lambda)`.
pub fn l0_from_lambda(lambda: f64, band: f64, phi0: f64) -> f64 {
    phi0 * PI * band * lambda / (1.0 - lambda)
}

/// Maximum likelihood estimate through EM on `lambda`, untruncated.
pub fn em_l0(sample: &DistanceSample, phi0: f64, tolerance: f64) -> Result<Estimate> {
    check_phi0(phi0)?;
    let fit = lambda_em(sample, tolerance, DEFAULT_EM_MAX_ITER)?;
    let value = l0_from_lambda(fit.lambda, sample.band_radius, phi0);
    Ok(Estimate {
        value,
        method: Method::Em,
        n: sample.len(),
        asymp_variance: (value > 0.0 && value.is_finite())
            .then(|| mle_asymp_var(value, sample.band_radius, phi0)),
        flags: Flags { boundary_hit: fit.lambda >= 1.0 - 1e-12, ..Flags::default() },
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub value: f64,
    pub clamp_applied: bool,
}

/// `phi0 pi R sum_{k=1..K} lambda^k` after clamping `lambda` to `[0, 1]`.
pub fn truncated_l0(lambda: f64, k: usize, band: f64, phi0: f64) -> Result<Truncation> {
    let p = check_phi0(phi0)?;
    if k == 0 {
        return Err(Error::InvalidParams("truncation order K must be at least 1".into()));
    }
    if lambda.is_nan() {
        return Err(Error::InvalidParams("lambda is NaN".into()));
    }
    let clamped = lambda.clamp(0.0, 1.0);
    let mut term = 1.0;
    let mut sum = 0.0;
    for _ in 0..k {
        term *= clamped;
        sum += term;
    }
    Ok(Truncation { value: p * band * sum, clamp_applied: clamped != lambda })
}

fn truncated_estimate(
    sample: &DistanceSample,
    lambda: f64,
    k: usize,
    phi0: f64,
    method: Method,
) -> Result<Estimate> {
    let t = truncated_l0(lambda, k, sample.band_radius, phi0)?;
    Ok(Estimate {
        value: t.value,
        method,
        n: sample.len(),
        asymp_variance: None,
        flags: Flags { clamp_applied: t.clamp_applied, ..Flags::default() },
    })
}

/// Truncated series fed by the moment estimate of `lambda`.
pub fn tmom_l0(sample: &DistanceSample, phi0: f64, k: usize) -> Result<Estimate> {
    truncated_estimate(sample, lambda_mom(sample)?, k, phi0, Method::Tmom)
}

/// Truncated series fed by the EM estimate of `lambda`.
pub fn tmle_l0(sample: &DistanceSample, phi0: f64, k: usize, em_tolerance: f64) -> Result<Estimate> {
    let fit = lambda_em(sample, em_tolerance, DEFAULT_EM_MAX_ITER)?;
    truncated_estimate(sample, fit.lambda, k, phi0, Method::Tmle)
}
