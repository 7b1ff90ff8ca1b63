//! Spatial estimators of the surface area `L0` and the integrated mean
//! curvature `M`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::estimate::{Estimate3D, Flags, Method};
use crate::model::{moments3d, Params3D};
use crate::rootfind::golden_max;
use crate::sampler::DistanceSample;

/// `|R^2 - 6 mean R + 6 mean_sq| < POLE_FRACTION_3D * R^2` raises the pole flag.
pub const POLE_FRACTION_3D: f64 = 1e-6;
/// Upper clamp for the mixture weights fed into the truncated series.
pub const LAMBDA_CLAMP: f64 = 1.0 - 1e-9;

fn check_phi0(phi0: f64) -> Result<f64> {
    if phi0 > 0.0 && phi0.is_finite() {
        Ok(phi0 * PI)
    } else {
        Err(Error::InvalidParams(format!("phi0 must be positive, got {phi0}")))
    }
}

/// Shared denominator `R^2 - 6 u R + 6 v` of the moment system.
pub fn moment_denominator(u: f64, v: f64, band: f64) -> f64 {
    band * band - 6.0 * u * band + 6.0 * v
}

/// `L0` as a function of `(mean, mean_sq)`.
pub fn g1(u: f64, v: f64, band: f64, phi0: f64) -> f64 {
    let (p, r) = (phi0 * PI, band);
    2.0 * p * r * r / 5.0 * (3.0 * r * r - 12.0 * u * r + 10.0 * v) / moment_denominator(u, v, r)
}

/// `M` as a function of `(mean, mean_sq)`.
pub fn g2(u: f64, v: f64, band: f64, phi0: f64) -> f64 {
    let (p, r) = (phi0 * PI, band);
    -4.0 * p * r / 5.0 * (3.0 * r * r - 16.0 * u * r + 15.0 * v) / moment_denominator(u, v, r)
}

pub fn grad_g1(u: f64, v: f64, band: f64, phi0: f64) -> [f64; 2] {
    let (p, r) = (phi0 * PI, band);
    let den2 = moment_denominator(u, v, r).powi(2);
    [
        12.0 * p * r.powi(3) / 5.0 * (r * r - 2.0 * v) / den2,
        8.0 * p * r.powi(3) / 5.0 * (3.0 * u - 2.0 * r) / den2,
    ]
}

pub fn grad_g2(u: f64, v: f64, band: f64, phi0: f64) -> [f64; 2] {
    let (p, r) = (phi0 * PI, band);
    let den2 = moment_denominator(u, v, r).powi(2);
    [
        -8.0 * p * r * r / 5.0 * (r * r - 3.0 * v) / den2,
        -12.0 * p * r * r / 5.0 * (2.0 * u - r) / den2,
    ]
}

/// Joint moment estimator from the first two sample moments.
pub fn mom3d(sample: &DistanceSample, phi0: f64) -> Result<Estimate3D> {
    check_phi0(phi0)?;
    let (u, v) = (sample.mean()?, sample.mean_sq()?);
    let band = sample.band_radius;
    let den = moment_denominator(u, v, band);
    if den == 0.0 {
        return Err(Error::Pole);
    }
    let (l0, m) = (g1(u, v, band, phi0), g2(u, v, band, phi0));
    let (asymp_var_l0, asymp_var_m) = match Params3D::with_phi0(l0, m, band, phi0) {
        Ok(p) => {
            let (a, b) = mom3d_asymp_var(&p);
            (Some(a), Some(b))
        }
        Err(_) => (None, None),
    };
    Ok(Estimate3D {
        l0,
        m,
        method: Method::Mom3d,
        n: sample.len(),
        asymp_var_l0,
        asymp_var_m,
        flags: Flags {
            pole_proximity: den.abs() < POLE_FRACTION_3D * band * band,
            ..Flags::default()
        },
    })
}

fn quad_form(g: [f64; 2], s: [[f64; 2]; 2]) -> f64 {
    g[0] * g[0] * s[0][0] + 2.0 * g[0] * g[1] * s[0][1] + g[1] * g[1] * s[1][1]
}

/// Asymptotic variances `(grad g1' S grad g1, grad g2' S grad g2)` with `S`
/// the covariance of `(D, D^2)`, both gradients taken at the population moments.
pub fn mom3d_asymp_var(p: &Params3D) -> (f64, f64) {
    let mo = moments3d(p);
    let s = mo.sigma();
    let gl = grad_g1(mo.mean, mo.second, p.band, p.phi0);
    let gm = grad_g2(mo.mean, mo.second, p.band, p.phi0);
    (quad_form(gl, s), quad_form(gm, s))
}

/// Mixture weights solving the first three moment equations.
pub fn lambda3_from_moments(m1: f64, m2: f64, m3: f64, band: f64) -> [f64; 3] {
    let r = band;
    let r3 = r.powi(3);
    [
        12.0 * (6.0 * r * r * m1 - 20.0 * r * m2 + 15.0 * m3) / r3,
        -30.0 * (4.0 * r * r * m1 - 15.0 * r * m2 + 12.0 * m3) / r3,
        20.0 * (3.0 * r * r * m1 - 12.0 * r * m2 + 10.0 * m3) / r3,
    ]
}

pub fn lambda3_mom(sample: &DistanceSample) -> Result<[f64; 3]> {
    Ok(lambda3_from_moments(
        sample.mean()?,
        sample.mean_sq()?,
        sample.mean_cube()?,
        sample.band_radius,
    ))
}

/// K-term truncated estimators from the weights of the uniform and
/// `Beta(2,1)` components. Writing `a = l1/(1-l1)`, `b = l2/(1-l2)` and
/// `q = a b`:
///
/// `L0 = (4 p R^2 / (3 l2)) sum_{j=1..K} q^j` and
/// `M = (4 p R / 3) (1/(1-l2)) [sum_{j=1..K} q^j + l2]`.
///
/// The `L0` series is evaluated as `(4 p R^2/3) (a/(1-l2)) sum_{j=0..K-1} q^j`,
/// the same quantity without the `0/0` at `l2 = 0`.
pub fn truncated3d(l1: f64, l2: f64, k: usize, band: f64, phi0: f64) -> Result<Estimate3D> {
    let p = check_phi0(phi0)?;
    if k == 0 {
        return Err(Error::InvalidParams("truncation order K must be at least 1".into()));
    }
    if l1.is_nan() || l2.is_nan() {
        return Err(Error::InvalidParams("mixture weight is NaN".into()));
    }
    let (c1, c2) = (l1.clamp(0.0, LAMBDA_CLAMP), l2.clamp(0.0, LAMBDA_CLAMP));
    let a = c1 / (1.0 - c1);
    let b = c2 / (1.0 - c2);
    let q = a * b;
    let mut head = 0.0; // sum_{j=0..K-1} q^j
    let mut term = 1.0;
    for _ in 0..k {
        head += term;
        term *= q;
    }
    let tail = head * q; // sum_{j=1..K} q^j
    let l0 = 4.0 * p * band * band / 3.0 * (a / (1.0 - c2)) * head;
    let m = 4.0 * p * band / 3.0 / (1.0 - c2) * (tail + c2);
    Ok(Estimate3D {
        l0,
        m,
        method: Method::Tmom3d,
        n: 0,
        asymp_var_l0: None,
        asymp_var_m: None,
        flags: Flags { clamp_applied: c1 != l1 || c2 != l2, ..Flags::default() },
    })
}

pub fn tmom3d(sample: &DistanceSample, phi0: f64, k: usize) -> Result<Estimate3D> {
    let lam = lambda3_mom(sample)?;
    let mut est = truncated3d(lam[0], lam[1], k, sample.band_radius, phi0)?;
    est.n = sample.len();
    Ok(est)
}

/// Feasible region for the numerical likelihood maximization:
/// `0 < L0 <= l0_max`, `m_min <= M <= m_max`, density positive on `[0, R]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBox {
    pub l0_max: f64,
    pub m_min: f64,
    pub m_max: f64,
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox { l0_max: 1e3, m_min: -1e2, m_max: 1e3 }
    }
}

impl SearchBox {
    fn validate(&self) -> Result<()> {
        if self.l0_max > 0.0 && self.m_min < self.m_max && self.l0_max.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("degenerate search box {self:?}")))
        }
    }

    fn contains(&self, l0: f64, m: f64) -> bool {
        l0 > 0.0 && l0 <= self.l0_max && m >= self.m_min && m <= self.m_max
    }
}

/// Log-likelihood of `(L0, M)`; `-inf` where the density is not positive on `[0, R]`.
pub fn loglik3d(sample: &DistanceSample, l0: f64, m: f64, phi0: f64) -> f64 {
    let band = sample.band_radius;
    let Ok(params) = Params3D::with_phi0(l0, m, band, phi0) else {
        return f64::NEG_INFINITY;
    };
    let p = params.p();
    let log_z = params.band_volume().ln();
    sample
        .values
        .iter()
        .map(|d| (l0 + 2.0 * m * d + 4.0 * p * d * d).ln() - log_z)
        .sum()
}

/// Smallest `M` keeping `L0 + 2 M r + 4 p r^2` positive on `[0, R]`.
fn positivity_floor(l0: f64, band: f64, p: f64) -> f64 {
    let vertex = (l0 / (4.0 * p)).sqrt();
    if vertex <= band {
        -2.0 * (p * l0).sqrt()
    } else {
        -(l0 + 4.0 * p * band * band) / (2.0 * band)
    }
}

/// Newton iterations on the mixture weights `(w1, w2)`, where the
/// log-likelihood is concave. Returns `None` if they do not converge.
fn newton_weights(sample: &DistanceSample, start: [f64; 2]) -> Option<[f64; 2]> {
    let band = sample.band_radius;
    let comps: Vec<(f64, Vector2<f64>)> = sample
        .values
        .iter()
        .map(|&d| {
            let f1 = 1.0 / band;
            let f2 = 2.0 * d / (band * band);
            let f3 = 3.0 * d * d / band.powi(3);
            (f3, Vector2::new(f1 - f3, f2 - f3))
        })
        .collect();
    let value = |w: &Vector2<f64>| -> f64 {
        let mut s = 0.0;
        for (c, a) in &comps {
            let h = c + a.dot(w);
            if h <= 0.0 {
                return f64::NEG_INFINITY;
            }
            s += h.ln();
        }
        s
    };
    let mut w = Vector2::new(start[0], start[1]);
    let mut fw = value(&w);
    if !fw.is_finite() {
        return None;
    }
    for _ in 0..100 {
        let mut g = Vector2::zeros();
        let mut h = Matrix2::zeros();
        for (c, a) in &comps {
            let hv = c + a.dot(&w);
            g += a / hv;
            h -= a * a.transpose() / (hv * hv);
        }
        let step = h.lu().solve(&(-g))?;
        let decrement = g.dot(&step);
        if !decrement.is_finite() {
            return None;
        }
        if decrement < 1e-12 {
            return Some([w[0], w[1]]);
        }
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let cand = w + step * t;
            let fc = value(&cand);
            if fc >= fw + 0.25 * t * decrement {
                w = cand;
                fw = fc;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            return Some([w[0], w[1]]);
        }
    }
    None
}

/// `(L0, M)` for mixture weights `(w1, w2)` with `w3 = 1 - w1 - w2 > 0`.
fn weights_to_params(w: [f64; 2], band: f64, p: f64) -> Option<(f64, f64)> {
    let w3 = 1.0 - w[0] - w[1];
    (w3 > 0.0).then(|| {
        (
            4.0 / 3.0 * p * band * band * w[0] / w3,
            4.0 / 3.0 * p * band * w[1] / w3,
        )
    })
}

fn params_to_weights(l0: f64, m: f64, band: f64, p: f64) -> [f64; 2] {
    let z = l0 * band + m * band * band + 4.0 / 3.0 * p * band.powi(3);
    [l0 * band / z, m * band * band / z]
}

/// Parametrised edge of the feasible region, `t` in [0, 1] -> (L0, M).
type Edge<'a> = Box<dyn Fn(f64) -> (f64, f64) + 'a>;

/// Best point on the boundary of the feasible region: grid search on each
/// edge followed by golden-section refinement.
fn boundary_search(sample: &DistanceSample, phi0: f64, sbox: &SearchBox) -> (f64, f64, f64) {
    let band = sample.band_radius;
    let p = phi0 * PI;
    let l_lo = sbox.l0_max * 1e-12;
    let floor = |l: f64| {
        let f = positivity_floor(l, band, p);
        sbox.m_min.max(f + 1e-9 * (1.0 + f.abs()))
    };
    let log_l = |t: f64| (l_lo.ln() + t * (sbox.l0_max.ln() - l_lo.ln())).exp();
    let lerp = |a: f64, b: f64, t: f64| a + t * (b - a);
    let edges: [Edge<'_>; 4] = [
        Box::new(|t| {
            let l = log_l(t);
            (l, floor(l))
        }),
        Box::new(|t| (sbox.l0_max, lerp(floor(sbox.l0_max), sbox.m_max, t))),
        Box::new(|t| (log_l(t), sbox.m_max)),
        Box::new(|t| (l_lo, lerp(floor(l_lo), sbox.m_max, t))),
    ];
    let mut best = (f64::NAN, f64::NAN, f64::NEG_INFINITY);
    for edge in &edges {
        let eval = |t: f64| {
            let (l, m) = edge(t);
            loglik3d(sample, l, m, phi0)
        };
        let grid = 64;
        let (mut bi, mut bv) = (0usize, f64::NEG_INFINITY);
        for i in 0..=grid {
            let v = eval(i as f64 / grid as f64);
            if v > bv {
                bi = i;
                bv = v;
            }
        }
        let lo = (bi.saturating_sub(1)) as f64 / grid as f64;
        let hi = ((bi + 1).min(grid)) as f64 / grid as f64;
        let (t, v) = golden_max(eval, lo, hi, 80);
        let (t, v) = if v >= bv { (t, v) } else { (bi as f64 / grid as f64, bv) };
        if v > best.2 {
            let (l, m) = edge(t);
            best = (l, m, v);
        }
    }
    best
}

/// Numerical maximum likelihood estimate of `(L0, M)` over `sbox`.
///
/// Newton's method runs on the mixture weights starting from the moment
/// estimate. If its limit lies outside the feasible region the maximum is
/// searched on the region's boundary and `boundary_hit` is set.
pub fn mle3d(sample: &DistanceSample, phi0: f64, sbox: SearchBox) -> Result<Estimate3D> {
    let p = check_phi0(phi0)?;
    sbox.validate()?;
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let band = sample.band_radius;
    let mom = mom3d(sample, phi0).ok();
    let mom_point = mom
        .filter(|e| sbox.contains(e.l0, e.m) && Params3D::with_phi0(e.l0, e.m, band, phi0).is_ok())
        .map(|e| (e.l0, e.m));
    let start = mom_point.unwrap_or((p * band * band, 0.0));
    let interior = newton_weights(sample, params_to_weights(start.0, start.1, band, p))
        .and_then(|w| weights_to_params(w, band, p))
        .filter(|&(l, m)| sbox.contains(l, m) && Params3D::with_phi0(l, m, band, phi0).is_ok());
    let (l0, m, ll, boundary_hit) = match interior {
        Some((l, m)) => (l, m, loglik3d(sample, l, m, phi0), false),
        None => {
            let (l, m, v) = boundary_search(sample, phi0, &sbox);
            (l, m, v, true)
        }
    };
    if !ll.is_finite() {
        return Err(Error::Optimizer("no feasible point with finite likelihood".into()));
    }
    if let Some((ml, mm)) = mom_point {
        let mom_ll = loglik3d(sample, ml, mm, phi0);
        if ll < mom_ll - 1e-9 * (1.0 + mom_ll.abs()) {
            return Err(Error::Optimizer(format!(
                "log-likelihood {ll} at the optimizer output is below {mom_ll} at the moment start"
            )));
        }
    }
    Ok(Estimate3D {
        l0,
        m,
        method: Method::Mle3d,
        n: sample.len(),
        asymp_var_l0: None,
        asymp_var_m: None,
        flags: Flags { boundary_hit, ..Flags::default() },
    })
}
