//! Replication studies: repeated sampling and estimation with robust summaries.

pub mod stats;
pub mod varcurve;
pub mod volfit;

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estim2d;
use crate::estim3d::SearchBox;
use crate::estimate::{estimate, EstimatorOptions, Flags, Method};
use crate::sampler::{derive_seed, sample_distances};
use crate::shapes::{Dimension, Shape};

fn default_k() -> usize {
    estim2d::DEFAULT_K
}

fn default_em_tolerance() -> f64 {
    estim2d::DEFAULT_EM_TOLERANCE
}

/// A replication study as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationConfig {
    pub shape: Shape,
    #[serde(rename = "R")]
    pub band: f64,
    /// Defaults to the shape's analytic `phi0`, or 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi0: Option<f64>,
    pub n: usize,
    #[serde(rename = "B")]
    pub replications: usize,
    pub methods: Vec<Method>,
    #[serde(rename = "K", default = "default_k")]
    pub k: usize,
    #[serde(default = "default_em_tolerance")]
    pub em_tolerance: f64,
    #[serde(default)]
    pub master_seed: u64,
    /// Reference value of `L0`; defaults to the analytic one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_l0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mle_search_cap: Option<f64>,
}

impl ReplicationConfig {
    pub fn new(shape: Shape, band: f64, n: usize, replications: usize, methods: Vec<Method>) -> Self {
        ReplicationConfig {
            shape,
            band,
            phi0: None,
            n,
            replications,
            methods,
            k: default_k(),
            em_tolerance: default_em_tolerance(),
            master_seed: 0,
            target_l0: None,
            target_m: None,
            mle_search_cap: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ReplicationConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.band > 0.0 && self.band.is_finite()) {
            return bad(format!("R must be positive and finite, got {}", self.band));
        }
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if self.replications < 1 {
            return bad("B must be at least 1".into());
        }
        if self.k < 1 {
            return bad("K must be at least 1".into());
        }
        if self.em_tolerance.is_nan() || self.em_tolerance <= 0.0 {
            return bad(format!("em_tolerance must be positive, got {}", self.em_tolerance));
        }
        if self.methods.is_empty() {
            return bad("methods must not be empty".into());
        }
        let spatial = self.shape.dimension() == Dimension::Three;
        if let Some(m) = self.methods.iter().find(|m| m.is_3d() != spatial) {
            return bad(format!("method {m} does not apply to a {}-dimensional shape", self.shape.dimension().get()));
        }
        if let Some(phi0) = self.phi0 {
            if !(phi0 > 0.0 && phi0.is_finite()) {
                return bad(format!("phi0 must be positive, got {phi0}"));
            }
        }
        Ok(())
    }

    pub fn resolved_phi0(&self) -> f64 {
        self.phi0
            .or_else(|| self.shape.analytic_volume().ok().map(|v| v.phi0))
            .filter(|p| *p > 0.0)
            .unwrap_or(1.0)
    }

    pub fn resolved_targets(&self) -> (Option<f64>, Option<f64>) {
        let poly = self.shape.analytic_volume().ok();
        let l0 = self.target_l0.or(poly.map(|v| v.l0));
        let m = self
            .target_m
            .or(poly.filter(|v| v.dimension == Dimension::Three).map(|v| v.m));
        (l0, m)
    }

    pub fn estimator_options(&self) -> EstimatorOptions {
        EstimatorOptions {
            phi0: self.resolved_phi0(),
            k: self.k,
            em_tolerance: self.em_tolerance,
            mle_search_cap: self.mle_search_cap,
            search_box: SearchBox::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parameter {
    L0,
    M,
}

impl Parameter {
    pub fn as_str(self) -> &'static str {
        match self {
            Parameter::L0 => "L0",
            Parameter::M => "M",
        }
    }
}

/// One estimator applied to one replication.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawEstimate {
    pub replication: usize,
    pub seed: u64,
    pub method: Method,
    pub l0: Option<f64>,
    pub m: Option<f64>,
    pub flags: Flags,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: Method,
    pub parameter: Parameter,
    pub median: f64,
    pub scaled_mad: f64,
    /// Mean bounded error about the target, when one is known.
    pub mean_dbe: Option<f64>,
    pub failures: usize,
    pub pole_proximity: usize,
    pub boundary_hit: usize,
    pub clamp_applied: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationSummary {
    pub n: usize,
    #[serde(rename = "R")]
    pub band: f64,
    #[serde(rename = "B")]
    pub replications: usize,
    pub phi0: f64,
    /// `R` exceeds the range on which the volume polynomial is exact.
    pub beyond_polynomial_range: bool,
    pub rows: Vec<SummaryRow>,
    pub raw: Vec<RawEstimate>,
}

impl ReplicationSummary {
    pub fn row(&self, method: Method, parameter: Parameter) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.method == method && r.parameter == parameter)
    }

    /// Successful estimates of `parameter` by `method`, in replication order.
    pub fn values(&self, method: Method, parameter: Parameter) -> Vec<f64> {
        self.raw
            .iter()
            .filter(|e| e.method == method)
            .filter_map(|e| match parameter {
                Parameter::L0 => e.l0,
                Parameter::M => e.m,
            })
            .collect()
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(
            "method,parameter,n,R,B,median,scaled_mad,mean_dbe,failures,pole_proximity,boundary_hit,clamp_applied\n",
        );
        for r in &self.rows {
            let dbe = r.mean_dbe.map(|d| format!("{d:e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{:e},{},{:e},{:e},{},{},{},{},{}",
                r.method,
                r.parameter.as_str(),
                self.n,
                self.band,
                self.replications,
                r.median,
                r.scaled_mad,
                dbe,
                r.failures,
                r.pole_proximity,
                r.boundary_hit,
                r.clamp_applied
            );
        }
        out
    }

    pub fn raw_csv_string(&self) -> String {
        let mut out = String::from("replication,seed,method,parameter,value,flags\n");
        for e in &self.raw {
            let mut emit = |param: &str, v: Option<f64>| {
                let value = match (v, &e.error) {
                    (Some(v), _) => format!("{v:e}"),
                    (None, Some(_)) => "NaN".to_string(),
                    (None, None) => return,
                };
                let flags = if e.error.is_some() { "error".to_string() } else { e.flags.to_string() };
                let _ = writeln!(out, "{},{},{},{},{},{}", e.replication, e.seed, e.method, param, value, flags);
            };
            emit("L0", e.l0);
            if e.method.is_3d() {
                emit("M", e.m);
            }
        }
        out
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        w.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }

    pub fn write_raw_csv(&self, mut w: impl Write) -> Result<()> {
        w.write_all(self.raw_csv_string().as_bytes())?;
        Ok(())
    }
}

/// Runs `B` replications, each with its own seed `derive_seed(master_seed, b)`.
/// The output does not depend on the number of worker threads.
pub fn replicate(cfg: &ReplicationConfig) -> Result<ReplicationSummary> {
    cfg.validate()?;
    let opts = cfg.estimator_options();
    let per_rep: Vec<Result<Vec<RawEstimate>>> = (0..cfg.replications)
        .into_par_iter()
        .map(|b| {
            let seed = derive_seed(cfg.master_seed, b as u64);
            let sample = sample_distances(&cfg.shape, cfg.band, cfg.n, seed)?;
            Ok(cfg
                .methods
                .iter()
                .map(|&method| match estimate(&sample, method, &opts) {
                    Ok(est) => RawEstimate {
                        replication: b,
                        seed,
                        method,
                        l0: Some(est.l0()),
                        m: est.m(),
                        flags: est.flags(),
                        error: None,
                    },
                    Err(e) => RawEstimate {
                        replication: b,
                        seed,
                        method,
                        l0: None,
                        m: None,
                        flags: Flags::default(),
                        error: Some(e.to_string()),
                    },
                })
                .collect())
        })
        .collect();
    let mut raw = Vec::with_capacity(cfg.replications * cfg.methods.len());
    for rep in per_rep {
        raw.extend(rep?);
    }

    let (target_l0, target_m) = cfg.resolved_targets();
    let mut rows = Vec::new();
    for &method in &cfg.methods {
        let entries: Vec<&RawEstimate> = raw.iter().filter(|e| e.method == method).collect();
        let failures = entries.iter().filter(|e| e.error.is_some()).count();
        if 2 * failures > entries.len() {
            return Err(Error::ReplicationFailures { failed: failures, total: entries.len() });
        }
        let count = |f: fn(&Flags) -> bool| entries.iter().filter(|e| e.error.is_none() && f(&e.flags)).count();
        let params: &[Parameter] = if method.is_3d() { &[Parameter::L0, Parameter::M] } else { &[Parameter::L0] };
        for &parameter in params {
            let (values, target): (Vec<f64>, Option<f64>) = match parameter {
                Parameter::L0 => (entries.iter().filter_map(|e| e.l0).collect(), target_l0),
                Parameter::M => (entries.iter().filter_map(|e| e.m).collect(), target_m),
            };
            let (median, scaled_mad) = stats::robust_stats(&values)?;
            let mean_dbe = target.map(|t| stats::d_be(&values, t)).transpose()?;
            rows.push(SummaryRow {
                method,
                parameter,
                median,
                scaled_mad,
                mean_dbe,
                failures,
                pole_proximity: count(|f| f.pole_proximity),
                boundary_hit: count(|f| f.boundary_hit),
                clamp_applied: count(|f| f.clamp_applied),
            });
        }
    }

    let beyond_polynomial_range = cfg
        .shape
        .analytic_volume()
        .map(|v| cfg.band > v.r_max)
        .unwrap_or(false);
    Ok(ReplicationSummary {
        n: cfg.n,
        band: cfg.band,
        replications: cfg.replications,
        phi0: opts.phi0,
        beyond_polynomial_range,
        rows,
        raw,
    })
}

/// [`replicate`] on a dedicated pool of `threads` workers.
pub fn replicate_with_threads(cfg: &ReplicationConfig, threads: usize) -> Result<ReplicationSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParams(format!("cannot build thread pool: {e}")))?;
    pool.install(|| replicate(cfg))
}
