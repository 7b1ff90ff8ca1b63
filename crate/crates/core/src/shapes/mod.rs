//! Compact sets with exact Euclidean distance functions and closed-form
//! volume polynomials.
//!
//! Every shape is either *solid* (the set includes its interior, samples are
//! drawn on `B(S,R) \ S`) or a *manifold* (a curve of zero area, samples are
//! drawn on all of `B(S,R)`). Shapes serialize to `{"variant": .., "params": {..}}`.

mod planar;
mod spatial;
mod volume;

use serde::{Deserialize, Serialize};

pub use planar::{Disk, Shape2D};
pub use spatial::{Ball, Shape3D};
pub use volume::{Dimension, VolumePolynomial};

use crate::error::{Error, Result};

pub type Point2 = [f64; 2];
pub type Point3 = [f64; 3];

/// Axis-aligned box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb<const N: usize> {
    pub min: [f64; N],
    pub max: [f64; N],
}

impl<const N: usize> Aabb<N> {
    pub fn volume(&self) -> f64 {
        self.min
            .iter()
            .zip(&self.max)
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    pub fn contains(&self, p: &[f64; N]) -> bool {
        (0..N).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..N {
            out.min[i] = out.min[i].min(other.min[i]);
            out.max[i] = out.max[i].max(other.max[i]);
        }
        out
    }

    pub(crate) fn around(points: impl IntoIterator<Item = [f64; N]>, margin: f64) -> Self {
        let mut min = [f64::INFINITY; N];
        let mut max = [f64::NEG_INFINITY; N];
        for p in points {
            for i in 0..N {
                min[i] = min[i].min(p[i]);
                max[i] = max[i].max(p[i]);
            }
        }
        for i in 0..N {
            min[i] -= margin;
            max[i] += margin;
        }
        Aabb { min, max }
    }
}

/// Which band the observation points are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelTag {
    /// `S` has zero volume; points are uniform on `B(S,R)`.
    Manifold,
    /// `S` has interior; points are uniform on `B(S,R) \ S`.
    Solid,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Manifold => "manifold",
            ModelTag::Solid => "solid",
        }
    }
}

impl std::fmt::Display for ModelTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "manifold" => Ok(ModelTag::Manifold),
            "solid" => Ok(ModelTag::Solid),
            other => Err(Error::Parse(format!("unknown model tag `{other}`"))),
        }
    }
}

/// A compact set in `R^N` that can be sampled around.
pub trait Body<const N: usize>: Send + Sync {
    /// Euclidean distance from `p` to the set; zero on the set.
    fn distance(&self, p: &[f64; N]) -> f64;

    /// A box containing `B(S, margin)`.
    fn bounding_box(&self, margin: f64) -> Aabb<N>;

    fn model(&self) -> ModelTag;

    fn analytic_volume(&self) -> Result<VolumePolynomial>;
}

/// Any supported shape, planar or spatial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Shape {
    Planar(Shape2D),
    Spatial(Shape3D),
}

impl Shape {
    /// Parses and validates a JSON shape description.
    pub fn from_json(text: &str) -> Result<Self> {
        let shape: Shape = serde_json::from_str(text)
            .map_err(|e| Error::InvalidShape(format!("cannot parse shape description: {e}")))?;
        shape.validate()?;
        Ok(shape)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("shape serialization is infallible")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Shape::Planar(s) => s.validate(),
            Shape::Spatial(s) => s.validate(),
        }
    }

    pub fn dimension(&self) -> Dimension {
        match self {
            Shape::Planar(_) => Dimension::Two,
            Shape::Spatial(_) => Dimension::Three,
        }
    }

    pub fn model(&self) -> ModelTag {
        match self {
            Shape::Planar(s) => s.model(),
            Shape::Spatial(s) => s.model(),
        }
    }

    pub fn analytic_volume(&self) -> Result<VolumePolynomial> {
        match self {
            Shape::Planar(s) => s.analytic_volume(),
            Shape::Spatial(s) => s.analytic_volume(),
        }
    }

    /// Distance to a point given as a slice of the right length.
    pub fn distance(&self, p: &[f64]) -> Result<f64> {
        match (self, p.len()) {
            (Shape::Planar(s), 2) => Ok(s.distance(&[p[0], p[1]])),
            (Shape::Spatial(s), 3) => Ok(s.distance(&[p[0], p[1], p[2]])),
            (_, len) => Err(Error::InvalidParams(format!(
                "point of dimension {len} for a {}-dimensional shape",
                self.dimension().get()
            ))),
        }
    }

    /// Volume of the sampling box around `B(S, margin)`.
    pub fn box_volume(&self, margin: f64) -> f64 {
        match self {
            Shape::Planar(s) => s.bounding_box(margin).volume(),
            Shape::Spatial(s) => s.bounding_box(margin).volume(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Shape::Planar(s) => s.name(),
            Shape::Spatial(s) => s.name(),
        }
    }
}

impl From<Shape2D> for Shape {
    fn from(s: Shape2D) -> Self {
        Shape::Planar(s)
    }
}

impl From<Shape3D> for Shape {
    fn from(s: Shape3D) -> Self {
        Shape::Spatial(s)
    }
}

// Small vector helpers shared by the planar and spatial shapes.

pub(crate) fn sub<const N: usize>(a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| a[i] - b[i])
}

pub(crate) fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm<const N: usize>(a: &[f64; N]) -> f64 {
    dot(a, a).sqrt()
}

/// Distance from `p` to the closed segment `[a, b]`.
pub(crate) fn segment_distance<const N: usize>(p: &[f64; N], a: &[f64; N], b: &[f64; N]) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = dot(&ab, &ab);
    let t = if len2 > 0.0 {
        (dot(&ap, &ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let closest: [f64; N] = std::array::from_fn(|i| a[i] + t * ab[i]);
    norm(&sub(p, &closest))
}
