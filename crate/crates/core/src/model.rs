//! The distribution of the distance `D` from a uniform band point to a set
//! with polynomial volume.
//!
//! In the plane `D` has density proportional to `l0 + 2 phi0 pi r` on `[0, R]`,
//! in space proportional to `l0 + 2 m r + 4 phi0 pi r^2`. Both are finite
//! mixtures of `R * Beta(k, 1)` laws.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shapes::VolumePolynomial;

fn check_domain(r: f64, band: f64) -> Result<()> {
    if (0.0..band).contains(&r) {
        Ok(())
    } else {
        Err(Error::Domain { value: r, domain: format!("[0, {band})") })
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params2D {
    pub l0: f64,
    pub phi0: f64,
    #[serde(rename = "R")]
    pub band: f64,
}

impl Params2D {
    pub fn new(l0: f64, phi0: f64, band: f64) -> Result<Self> {
        check_positive("l0", l0)?;
        check_positive("phi0", phi0)?;
        check_positive("R", band)?;
        Ok(Params2D { l0, phi0, band })
    }

    /// `phi0 * pi`, the quadratic volume coefficient.
    pub fn p(&self) -> f64 {
        self.phi0 * PI
    }

    /// `V(R) - mu`.
    pub fn band_area(&self) -> f64 {
        self.l0 * self.band + self.p() * self.band * self.band
    }
}

pub fn density2d(r: f64, p: &Params2D) -> Result<f64> {
    check_domain(r, p.band)?;
    Ok((p.l0 + 2.0 * p.p() * r) / p.band_area())
}

pub fn cdf2d(r: f64, p: &Params2D) -> f64 {
    let r = r.clamp(0.0, p.band);
    (p.l0 * r + p.p() * r * r) / p.band_area()
}

/// `lambda * U(0,R) + (1 - lambda) * R Beta(2,1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mixture2D {
    pub lambda: f64,
    pub band: f64,
}

impl Mixture2D {
    pub fn f1(&self, _r: f64) -> f64 {
        1.0 / self.band
    }

    pub fn f2(&self, r: f64) -> f64 {
        2.0 * r / (self.band * self.band)
    }

    pub fn density(&self, r: f64) -> f64 {
        self.lambda * self.f1(r) + (1.0 - self.lambda) * self.f2(r)
    }
}

pub fn mixture2d(p: &Params2D) -> Mixture2D {
    Mixture2D { lambda: p.l0 / (p.l0 + p.p() * p.band), band: p.band }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments2D {
    pub mean: f64,
    pub second: f64,
    pub var: f64,
}

pub fn moments2d(p: &Params2D) -> Moments2D {
    let (l, pp, r) = (p.l0, p.p(), p.band);
    let mean = (3.0 * l * r + 4.0 * pp * r * r) / (6.0 * (l + pp * r));
    let second = r * r * (2.0 * l + 3.0 * pp * r) / (6.0 * (l + pp * r));
    let var = r * r * (3.0 * l * l + 6.0 * pp * r * l + 2.0 * pp * pp * r * r)
        / (36.0 * (l + pp * r).powi(2));
    Moments2D { mean, second, var }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params3D {
    pub l0: f64,
    pub m: f64,
    #[serde(rename = "R")]
    pub band: f64,
    pub phi0: f64,
}

impl Params3D {
    pub fn new(l0: f64, m: f64, band: f64) -> Result<Self> {
        Self::with_phi0(l0, m, band, 1.0)
    }

    pub fn with_phi0(l0: f64, m: f64, band: f64, phi0: f64) -> Result<Self> {
        check_positive("l0", l0)?;
        check_positive("R", band)?;
        check_positive("phi0", phi0)?;
        if !m.is_finite() {
            return Err(Error::InvalidParams(format!("m must be finite, got {m}")));
        }
        let p = Params3D { l0, m, band, phi0 };
        if !p.density_positive() {
            return Err(Error::InvalidParams(format!(
                "density l0 + 2 m r + 4 phi0 pi r^2 is not positive on [0, {band}] for l0 = {l0}, m = {m}"
            )));
        }
        Ok(p)
    }

    /// `phi0 * pi`.
    pub fn p(&self) -> f64 {
        self.phi0 * PI
    }

    fn unnormalized(&self, r: f64) -> f64 {
        self.l0 + 2.0 * self.m * r + 4.0 * self.p() * r * r
    }

    fn density_positive(&self) -> bool {
        let vertex = -self.m / (4.0 * self.p());
        let mut ok = self.unnormalized(0.0) > 0.0 && self.unnormalized(self.band) > 0.0;
        if vertex > 0.0 && vertex < self.band {
            ok &= self.unnormalized(vertex) > 0.0;
        }
        ok
    }

    /// `V(R) - mu`.
    pub fn band_volume(&self) -> f64 {
        let r = self.band;
        self.l0 * r + self.m * r * r + 4.0 / 3.0 * self.p() * r.powi(3)
    }
}

pub fn density3d(r: f64, p: &Params3D) -> Result<f64> {
    check_domain(r, p.band)?;
    Ok(p.unnormalized(r) / p.band_volume())
}

pub fn cdf3d(r: f64, p: &Params3D) -> f64 {
    let r = r.clamp(0.0, p.band);
    (p.l0 * r + p.m * r * r + 4.0 / 3.0 * p.p() * r.powi(3)) / p.band_volume()
}

/// Weights of `U(0,R)`, `R Beta(2,1)` and `R Beta(3,1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mixture3D {
    pub weights: [f64; 3],
    pub band: f64,
    /// Set when `m < 0`: the decomposition still holds but is not a probability mixture.
    pub negative_weight: bool,
}

impl Mixture3D {
    /// Component densities `k r^(k-1) / R^k` for `k = 1, 2, 3`.
    pub fn component(&self, k: usize, r: f64) -> f64 {
        let kf = k as f64;
        kf * r.powi(k as i32 - 1) / self.band.powi(k as i32)
    }

    pub fn density(&self, r: f64) -> f64 {
        (0..3).map(|i| self.weights[i] * self.component(i + 1, r)).sum()
    }
}

pub fn mixture3d(p: &Params3D) -> Mixture3D {
    let r = p.band;
    let z = p.band_volume();
    let weights = [p.l0 * r / z, p.m * r * r / z, 4.0 / 3.0 * p.p() * r.powi(3) / z];
    Mixture3D { weights, band: r, negative_weight: p.m < 0.0 }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments3D {
    pub mean: f64,
    pub second: f64,
    pub third: f64,
    pub var_d: f64,
    pub var_d2: f64,
    pub cov: f64,
}

impl Moments3D {
    /// Covariance matrix of `(D, D^2)`.
    pub fn sigma(&self) -> [[f64; 2]; 2] {
        [[self.var_d, self.cov], [self.cov, self.var_d2]]
    }
}

pub fn moments3d(p: &Params3D) -> Moments3D {
    let (l, m, pp, r) = (p.l0, p.m, p.p(), p.band);
    let (r2, r3, r4) = (r * r, r.powi(3), r.powi(4));
    let w = 4.0 * pp * r2 + 3.0 * m * r + 3.0 * l;
    let mean = (3.0 * l * r + 4.0 * m * r2 + 6.0 * pp * r3) / (6.0 * (l + m * r + 4.0 / 3.0 * pp * r2));
    let second =
        (10.0 * l * r2 + 15.0 * m * r3 + 24.0 * pp * r4) / (30.0 * (l + m * r + 4.0 / 3.0 * pp * r2));
    let third = r3 * (15.0 * l + 24.0 * m * r + 40.0 * pp * r2) / (20.0 * w);
    let var_d = r2
        * (12.0 * pp * pp * r4 + 24.0 * pp * m * r3 + 10.0 * m * m * r2 + 44.0 * pp * l * r2
            + 30.0 * l * m * r
            + 15.0 * l * l)
        / (20.0 * w * w);
    let var_d2 = r4
        * (768.0 * pp * pp * r4 + 1360.0 * pp * m * r3 + 525.0 * m * m * r2 + 1920.0 * pp * l * r2
            + 1260.0 * l * m * r
            + 560.0 * l * l)
        / (700.0 * w * w);
    let cov = r3
        * (16.0 * pp * pp * r4 + 30.0 * pp * m * r3 + 12.0 * m * m * r2 + 48.0 * pp * l * r2
            + 32.0 * l * m * r
            + 15.0 * l * l)
        / (20.0 * w * w);
    Moments3D { mean, second, third, var_d, var_d2, cov }
}

/// `V'(r)`, the boundary measure of the parallel set at distance `r`.
pub fn offset_boundary_measure(r: f64, poly: &VolumePolynomial) -> Result<f64> {
    if r > 0.0 && r < poly.r_max {
        Ok(poly.derivative(r))
    } else {
        Err(Error::Domain { value: r, domain: format!("(0, {})", poly.r_max) })
    }
}
