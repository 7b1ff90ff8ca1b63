use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Params2D, Params3D};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn get(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    /// Volume of the unit ball.
    pub fn unit_ball_volume(self) -> f64 {
        match self {
            Dimension::Two => PI,
            Dimension::Three => 4.0 * PI / 3.0,
        }
    }
}

impl TryFrom<u8> for Dimension {
    type Error = String;

    fn try_from(d: u8) -> std::result::Result<Self, String> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            other => Err(format!("dimension must be 2 or 3, got {other}")),
        }
    }
}

impl From<Dimension> for u8 {
    fn from(d: Dimension) -> u8 {
        d.get() as u8
    }
}

/// `V(r) = mu + l0 r + m r^2 + phi0 omega_d r^d` on `[0, r_max]`.
///
/// For sets of zero volume `l0` is the linear coefficient of `V`, which is
/// twice the curve length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumePolynomial {
    pub dimension: Dimension,
    pub mu: f64,
    pub l0: f64,
    pub m: f64,
    pub phi0: f64,
    pub r_max: f64,
}

impl VolumePolynomial {
    pub fn new_2d(mu: f64, l0: f64, phi0: f64, r_max: f64) -> Result<Self> {
        Self::new(Dimension::Two, mu, l0, 0.0, phi0, r_max)
    }

    pub fn new_3d(mu: f64, l0: f64, m: f64, phi0: f64, r_max: f64) -> Result<Self> {
        Self::new(Dimension::Three, mu, l0, m, phi0, r_max)
    }

    fn new(dimension: Dimension, mu: f64, l0: f64, m: f64, phi0: f64, r_max: f64) -> Result<Self> {
        let poly = VolumePolynomial { dimension, mu, l0, m, phi0, r_max };
        if ![mu, l0, m, phi0].iter().all(|c| c.is_finite()) || r_max.is_nan() {
            return Err(Error::InvalidParams("volume coefficients must be finite".into()));
        }
        if l0.is_nan() || l0 <= 0.0 {
            return Err(Error::InvalidParams(format!("l0 must be positive, got {l0}")));
        }
        if r_max.is_nan() || r_max <= 0.0 {
            return Err(Error::InvalidParams(format!("r_max must be positive, got {r_max}")));
        }
        if phi0 == 0.0 {
            return Err(Error::InvalidParams("phi0 must be nonzero".into()));
        }
        if !poly.increasing_on_range() {
            return Err(Error::InvalidParams(
                "volume polynomial is not strictly increasing on [0, r_max]".into(),
            ));
        }
        Ok(poly)
    }

    /// Coefficient of `r^d`.
    pub fn leading(&self) -> f64 {
        self.phi0 * self.dimension.unit_ball_volume()
    }

    /// Coefficients in increasing powers of `r`.
    pub fn coefficients(&self) -> Vec<f64> {
        match self.dimension {
            Dimension::Two => vec![self.mu, self.l0, self.leading()],
            Dimension::Three => vec![self.mu, self.l0, self.m, self.leading()],
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.coefficients().iter().rev().fold(0.0, |acc, c| acc * r + c)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match self.dimension {
            Dimension::Two => self.l0 + 2.0 * self.leading() * r,
            Dimension::Three => self.l0 + 2.0 * self.m * r + 3.0 * self.leading() * r * r,
        }
    }

    /// `F(r) = (V(r) - mu) / (V(R) - mu)`, clamped to `[0, 1]` outside `[0, R]`.
    pub fn cdf(&self, r: f64, band: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= band {
            return 1.0;
        }
        (self.eval(r) - self.mu) / (self.eval(band) - self.mu)
    }

    fn increasing_on_range(&self) -> bool {
        let top = self.r_max;
        let lead = self.leading();
        let positive_at = |r: f64| self.derivative(r) > 0.0;
        match self.dimension {
            Dimension::Two => positive_at(0.0) && if top.is_finite() { positive_at(top) } else { lead > 0.0 },
            Dimension::Three => {
                // V' is a quadratic with vertex at -m / (3 lead).
                let vertex = -self.m / (3.0 * lead);
                let interior_ok = !(vertex > 0.0 && vertex < top) || positive_at(vertex);
                let end_ok = if top.is_finite() { positive_at(top) } else { lead > 0.0 };
                positive_at(0.0) && interior_ok && end_ok
            }
        }
    }

    fn check_band(&self, band: f64) -> Result<()> {
        if band > 0.0 && band.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("band radius must be positive and finite, got {band}")))
        }
    }

    pub fn params2d(&self, band: f64) -> Result<Params2D> {
        self.check_band(band)?;
        if self.dimension != Dimension::Two {
            return Err(Error::InvalidParams("params2d on a 3D volume polynomial".into()));
        }
        Params2D::new(self.l0, self.phi0, band)
    }

    pub fn params3d(&self, band: f64) -> Result<Params3D> {
        self.check_band(band)?;
        if self.dimension != Dimension::Three {
            return Err(Error::InvalidParams("params3d on a 2D volume polynomial".into()));
        }
        Params3D::with_phi0(self.l0, self.m, band, self.phi0)
    }
}
