//! Point estimates with their method tag, asymptotic variance and validity flags.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estim3d::SearchBox;
use crate::sampler::DistanceSample;
use crate::{estim2d, estim3d};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Mom,
    Mle,
    Tmom,
    Tmle,
    Em,
    Mom3d,
    Mle3d,
    Tmom3d,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Mom,
        Method::Mle,
        Method::Tmom,
        Method::Tmle,
        Method::Em,
        Method::Mom3d,
        Method::Mle3d,
        Method::Tmom3d,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mom => "MOM",
            Method::Mle => "MLE",
            Method::Tmom => "TMOM",
            Method::Tmle => "TMLE",
            Method::Em => "EM",
            Method::Mom3d => "MOM3D",
            Method::Mle3d => "MLE3D",
            Method::Tmom3d => "TMOM3D",
        }
    }

    pub fn is_3d(self) -> bool {
        matches!(self, Method::Mom3d | Method::Mle3d | Method::Tmom3d)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown method `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    /// The moment equation denominator is close to zero.
    pub pole_proximity: bool,
    /// The optimum sits on the edge of the search region.
    pub boundary_hit: bool,
    /// A mixture weight was clamped before truncation.
    pub clamp_applied: bool,
}

impl Flags {
    pub fn any(&self) -> bool {
        self.pole_proximity || self.boundary_hit || self.clamp_applied
    }

    pub fn merge(self, other: Flags) -> Flags {
        Flags {
            pole_proximity: self.pole_proximity || other.pole_proximity,
            boundary_hit: self.boundary_hit || other.boundary_hit,
            clamp_applied: self.clamp_applied || other.clamp_applied,
        }
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [
            (self.pole_proximity, "pole_proximity"),
            (self.boundary_hit, "boundary_hit"),
            (self.clamp_applied, "clamp_applied"),
        ]
        .into_iter()
        .filter_map(|(set, name)| set.then_some(name))
        .collect();
        if names.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&names.join(","))
        }
    }
}

/// Estimate of the planar boundary length `L0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub method: Method,
    pub n: usize,
    /// Variance of the limiting law of `sqrt(n) (T - L0)`, at the estimate.
    pub asymp_variance: Option<f64>,
    pub flags: Flags,
}

/// Estimate of the surface area `L0` and integrated mean curvature `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate3D {
    pub l0: f64,
    pub m: f64,
    pub method: Method,
    pub n: usize,
    pub asymp_var_l0: Option<f64>,
    pub asymp_var_m: Option<f64>,
    pub flags: Flags,
}

/// Settings shared by all estimators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatorOptions {
    pub phi0: f64,
    /// Truncation order of the series estimators.
    pub k: usize,
    pub em_tolerance: f64,
    /// Upper end of the planar likelihood search; `None` means `1e3 phi0 pi R`.
    pub mle_search_cap: Option<f64>,
    pub search_box: SearchBox,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        EstimatorOptions {
            phi0: 1.0,
            k: estim2d::DEFAULT_K,
            em_tolerance: estim2d::DEFAULT_EM_TOLERANCE,
            mle_search_cap: None,
            search_box: SearchBox::default(),
        }
    }
}

/// Output of any estimator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyEstimate {
    Planar(Estimate),
    Spatial(Estimate3D),
}

impl AnyEstimate {
    pub fn l0(&self) -> f64 {
        match self {
            AnyEstimate::Planar(e) => e.value,
            AnyEstimate::Spatial(e) => e.l0,
        }
    }

    pub fn m(&self) -> Option<f64> {
        match self {
            AnyEstimate::Planar(_) => None,
            AnyEstimate::Spatial(e) => Some(e.m),
        }
    }

    pub fn flags(&self) -> Flags {
        match self {
            AnyEstimate::Planar(e) => e.flags,
            AnyEstimate::Spatial(e) => e.flags,
        }
    }

    pub fn method(&self) -> Method {
        match self {
            AnyEstimate::Planar(e) => e.method,
            AnyEstimate::Spatial(e) => e.method,
        }
    }
}

/// Applies `method` to `sample`.
pub fn estimate(sample: &DistanceSample, method: Method, opts: &EstimatorOptions) -> Result<AnyEstimate> {
    use AnyEstimate::{Planar, Spatial};
    let phi0 = opts.phi0;
    Ok(match method {
        Method::Mom => Planar(estim2d::mom_l0(sample, phi0)?),
        Method::Mle => Planar(estim2d::mle_l0(sample, phi0, opts.mle_search_cap)?),
        Method::Tmom => Planar(estim2d::tmom_l0(sample, phi0, opts.k)?),
        Method::Tmle => Planar(estim2d::tmle_l0(sample, phi0, opts.k, opts.em_tolerance)?),
        Method::Em => Planar(estim2d::em_l0(sample, phi0, opts.em_tolerance)?),
        Method::Mom3d => Spatial(estim3d::mom3d(sample, phi0)?),
        Method::Mle3d => Spatial(estim3d::mle3d(sample, phi0, opts.search_box)?),
        Method::Tmom3d => Spatial(estim3d::tmom3d(sample, phi0, opts.k)?),
    })
}
