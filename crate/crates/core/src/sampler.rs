//! Uniform points on the band around a shape, distance samples, and Monte
//! Carlo oracles for the distance law and the volume function.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{mixture3d, Params2D, Params3D};
use crate::shapes::{Body, ModelTag, Shape};

/// Attempts after which the acceptance rate is checked.
pub const PROBE_ATTEMPTS: u64 = 100_000;
/// Minimum acceptance rate tolerated by the rejection sampler.
pub const MIN_ACCEPTANCE: f64 = 1e-4;
/// Smallest Monte Carlo size accepted by [`monte_carlo_volume`].
pub const MIN_MC_POINTS: usize = 10_000;

const MC_CHUNK: usize = 1 << 16;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `stream` under `master`. Distinct streams are statistically
/// independent and the mapping does not depend on scheduling.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    mix64(mix64(master) ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Points drawn on a band, in the shape's ambient dimension.
#[derive(Clone, Debug, PartialEq)]
pub enum Points {
    Planar(Vec<[f64; 2]>),
    Spatial(Vec<[f64; 3]>),
}

impl Points {
    pub fn len(&self) -> usize {
        match self {
            Points::Planar(p) => p.len(),
            Points::Spatial(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn accepts(model: ModelTag, d: f64, band: f64) -> bool {
    match model {
        ModelTag::Solid => d > 0.0 && d <= band,
        ModelTag::Manifold => d <= band,
    }
}

fn check_band(band: f64) -> Result<()> {
    if band > 0.0 && band.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("band radius must be positive and finite, got {band}")))
    }
}

/// Rejection sampling from the margin-`band` bounding box. Calls `keep` with
/// each accepted point and its distance.
fn rejection<const N: usize, B: Body<N> + ?Sized>(
    body: &B,
    band: f64,
    n: usize,
    seed: u64,
    mut keep: impl FnMut([f64; N], f64),
) -> Result<()> {
    check_band(band)?;
    let bbox = body.bounding_box(band);
    let model = body.model();
    let mut rng = rng_from_seed(seed);
    let (mut accepted, mut attempts) = (0usize, 0u64);
    while accepted < n {
        let p: [f64; N] = std::array::from_fn(|i| rng.gen_range(bbox.min[i]..bbox.max[i]));
        attempts += 1;
        let d = body.distance(&p);
        if accepts(model, d, band) {
            keep(p, d);
            accepted += 1;
        }
        if attempts == PROBE_ATTEMPTS {
            let rate = accepted as f64 / attempts as f64;
            if rate < MIN_ACCEPTANCE {
                return Err(Error::RejectionEfficiency { rate });
            }
        }
    }
    Ok(())
}

/// `n` points i.i.d. uniform on `B(S,R) \ S` (solid) or `B(S,R)` (manifold).
pub fn sample_band(shape: &Shape, band: f64, n: usize, seed: u64) -> Result<Points> {
    match shape {
        Shape::Planar(s) => {
            let mut out = Vec::with_capacity(n);
            rejection(s, band, n, seed, |p, _| out.push(p))?;
            Ok(Points::Planar(out))
        }
        Shape::Spatial(s) => {
            let mut out = Vec::with_capacity(n);
            rejection(s, band, n, seed, |p, _| out.push(p))?;
            Ok(Points::Spatial(out))
        }
    }
}

/// Distances of `points` to `shape`, in order.
pub fn distances(shape: &Shape, points: &Points, band: f64, seed: u64) -> Result<DistanceSample> {
    let values = match (shape, points) {
        (Shape::Planar(s), Points::Planar(ps)) => ps.iter().map(|p| s.distance(p)).collect(),
        (Shape::Spatial(s), Points::Spatial(ps)) => ps.iter().map(|p| s.distance(p)).collect(),
        _ => {
            return Err(Error::InvalidParams(
                "points and shape have different dimensions".into(),
            ))
        }
    };
    let mut sample = DistanceSample::new(values, band, shape.model(), seed)?;
    sample.shape = Some(shape.clone());
    Ok(sample)
}

/// Samples band points and returns only their distances.
pub fn sample_distances(shape: &Shape, band: f64, n: usize, seed: u64) -> Result<DistanceSample> {
    let mut values = Vec::with_capacity(n);
    match shape {
        Shape::Planar(s) => rejection(s, band, n, seed, |_, d| values.push(d))?,
        Shape::Spatial(s) => rejection(s, band, n, seed, |_, d| values.push(d))?,
    }
    let mut sample = DistanceSample::new(values, band, shape.model(), seed)?;
    sample.shape = Some(shape.clone());
    Ok(sample)
}

/// Exact draws from the planar distance law by CDF inversion.
pub fn sample_model2d(p: &Params2D, n: usize, seed: u64) -> Result<DistanceSample> {
    let mut rng = rng_from_seed(seed);
    let (l, pp) = (p.l0, p.p());
    let area = p.band_area();
    let values = (0..n)
        .map(|_| {
            let u: f64 = 1.0 - rng.gen::<f64>();
            // Root of pp r^2 + l r = u * area, written to avoid cancellation.
            let c = u * area;
            2.0 * c / (l + (l * l + 4.0 * pp * c).sqrt())
        })
        .collect();
    DistanceSample::new(values, p.band, ModelTag::Solid, seed)
}

/// Exact draws from the spatial distance law as a mixture of `R Beta(k,1)`
/// laws; CDF bisection when the mixture has a negative weight.
pub fn sample_model3d(p: &Params3D, n: usize, seed: u64) -> Result<DistanceSample> {
    let mut rng = rng_from_seed(seed);
    let mix = mixture3d(p);
    let band = p.band;
    let values = (0..n)
        .map(|_| {
            let u: f64 = 1.0 - rng.gen::<f64>();
            if mix.negative_weight {
                let (mut lo, mut hi) = (0.0, band);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if crate::model::cdf3d(mid, p) < u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi
            } else {
                let pick: f64 = rng.gen();
                let k = if pick < mix.weights[0] {
                    1
                } else if pick < mix.weights[0] + mix.weights[1] {
                    2
                } else {
                    3
                };
                band * u.powf(1.0 / k as f64)
            }
        })
        .collect();
    DistanceSample::new(values, band, ModelTag::Solid, seed)
}

/// Observed distances `D_1, ..., D_n` with their band radius and model tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceSample {
    pub values: Vec<f64>,
    #[serde(rename = "R")]
    pub band_radius: f64,
    pub model: ModelTag,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<Shape>,
}

impl DistanceSample {
    pub fn new(values: Vec<f64>, band_radius: f64, model: ModelTag, seed: u64) -> Result<Self> {
        check_band(band_radius)?;
        let top = band_radius * (1.0 + 1e-12);
        for (i, &v) in values.iter().enumerate() {
            let ok = match model {
                ModelTag::Solid => v > 0.0 && v <= top,
                ModelTag::Manifold => v >= 0.0 && v <= top,
            };
            if !ok {
                return Err(Error::InvalidParams(format!(
                    "value {v} at index {i} lies outside the {model} range for R = {band_radius}"
                )));
            }
        }
        Ok(DistanceSample { values, band_radius, model, seed, shape: None })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn power_mean(&self, k: i32) -> Result<f64> {
        if self.values.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(self.values.iter().map(|v| v.powi(k)).sum::<f64>() / self.values.len() as f64)
    }

    pub fn mean(&self) -> Result<f64> {
        self.power_mean(1)
    }

    pub fn mean_sq(&self) -> Result<f64> {
        self.power_mean(2)
    }

    pub fn mean_cube(&self) -> Result<f64> {
        self.power_mean(3)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = format!(
            "# R={} model={} seed={}\n",
            self.band_radius, self.model, self.seed
        );
        for v in &self.values {
            writeln!(out, "{v}").expect("writing to a String cannot fail");
        }
        out
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        w.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let header = loop {
            match lines.next() {
                Some(line) => {
                    let line = line?;
                    if !line.trim().is_empty() {
                        break line;
                    }
                }
                None => return Err(Error::Parse("missing header line".into())),
            }
        };
        let body = header
            .trim()
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse(format!("header must start with '#', got `{header}`")))?;
        let (mut band, mut model, mut seed) = (None, None, None);
        for field in body.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("malformed header field `{field}`")))?;
            match key {
                "R" => {
                    band = Some(value.parse::<f64>().map_err(|e| Error::Parse(format!("R: {e}")))?)
                }
                "model" => model = Some(value.parse::<ModelTag>()?),
                "seed" => {
                    seed = Some(value.parse::<u64>().map_err(|e| Error::Parse(format!("seed: {e}")))?)
                }
                other => return Err(Error::Parse(format!("unknown header field `{other}`"))),
            }
        }
        let band = band.ok_or_else(|| Error::Parse("header lacks R".into()))?;
        let model = model.ok_or_else(|| Error::Parse("header lacks model".into()))?;
        let seed = seed.ok_or_else(|| Error::Parse("header lacks seed".into()))?;
        let mut values = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            values.push(
                t.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: `{t}`: {e}", i + 2)))?,
            );
        }
        DistanceSample::new(values, band, model, seed)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}

/// Right-continuous empirical distribution function.
#[derive(Clone, Debug)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn eval(&self, r: f64) -> f64 {
        let count = self.sorted.partition_point(|&v| v <= r);
        count as f64 / self.sorted.len() as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// `sup_r |F_n(r) - F(r)|` for a continuous `F`.
    pub fn kolmogorov_distance(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let n = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).max((i + 1) as f64 / n - f)
            })
            .fold(0.0, f64::max)
    }
}

pub fn empirical_cdf(sample: &DistanceSample) -> Result<Ecdf> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = sample.values.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(Ecdf { sorted })
}

/// Approximate 95% quantile of the Kolmogorov statistic, `1.358 / sqrt(n)`.
pub fn kolmogorov_bound_95(n: usize) -> f64 {
    1.3581 / (n as f64).sqrt()
}

/// Hit-count estimate of `mu(B(S, r))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub r: f64,
    pub volume: f64,
    pub std_error: f64,
}

fn hit_count<const N: usize, B: Body<N> + ?Sized>(body: &B, r: f64, n: usize, seed: u64) -> usize {
    let bbox = body.bounding_box(r);
    let mut rng = rng_from_seed(seed);
    (0..n)
        .filter(|_| {
            let p: [f64; N] = std::array::from_fn(|i| rng.gen_range(bbox.min[i]..bbox.max[i]));
            body.distance(&p) <= r
        })
        .count()
}

/// Monte Carlo volume of `B(S, r)` for each `r` in the grid, with standard
/// errors `|box| sqrt(p (1 - p) / n)`. Each grid point uses its own stream.
pub fn monte_carlo_volume(
    shape: &Shape,
    r_grid: &[f64],
    n_mc: usize,
    seed: u64,
) -> Result<Vec<VolumeEstimate>> {
    if n_mc < MIN_MC_POINTS {
        return Err(Error::InvalidParams(format!(
            "n_mc must be at least {MIN_MC_POINTS}, got {n_mc}"
        )));
    }
    for &r in r_grid {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParams(format!("grid radius must be positive, got {r}")));
        }
    }
    let chunks = n_mc.div_ceil(MC_CHUNK);
    let jobs: Vec<(usize, usize)> =
        (0..r_grid.len()).flat_map(|g| (0..chunks).map(move |c| (g, c))).collect();
    let hits: Vec<usize> = jobs
        .par_iter()
        .map(|&(g, c)| {
            let size = MC_CHUNK.min(n_mc - c * MC_CHUNK);
            let stream = derive_seed(derive_seed(seed, g as u64), c as u64);
            let r = r_grid[g];
            match shape {
                Shape::Planar(s) => hit_count(s, r, size, stream),
                Shape::Spatial(s) => hit_count(s, r, size, stream),
            }
        })
        .collect();
    Ok(r_grid
        .iter()
        .enumerate()
        .map(|(g, &r)| {
            let total: usize = hits[g * chunks..(g + 1) * chunks].iter().sum();
            let box_volume = match shape {
                Shape::Planar(s) => s.bounding_box(r).volume(),
                Shape::Spatial(s) => s.bounding_box(r).volume(),
            };
            let frac = total as f64 / n_mc as f64;
            VolumeEstimate {
                r,
                volume: box_volume * frac,
                std_error: box_volume * (frac * (1.0 - frac) / n_mc as f64).sqrt(),
            }
        })
        .collect())
}
