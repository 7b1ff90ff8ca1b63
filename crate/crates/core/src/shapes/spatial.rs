use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{norm, segment_distance, sub, Aabb, Body, ModelTag, Point3, VolumePolynomial};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point3,
    pub radius: f64,
}

impl Ball {
    pub const fn new(center: Point3, radius: f64) -> Self {
        Ball { center, radius }
    }

    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidShape(format!(
                "ball radius must be positive and finite, got {}",
                self.radius
            )));
        }
        if !self.center.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidShape("ball center must be finite".into()));
        }
        Ok(())
    }
}

/// Solid sets in space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", rename_all = "snake_case")]
pub enum Shape3D {
    Ball(Ball),
    /// Balls with pairwise disjoint interiors; touching is allowed.
    BallUnion { balls: Vec<Ball> },
    /// Solid right circular cone: base disk on `z = 0`, apex at `(0, 0, height)`.
    /// `aperture_angle` is the full opening angle at the apex.
    Cone { height: f64, aperture_angle: f64 },
    /// The unit dilation of the segment from `(0,0,-1)` to `(0,0,-1/2)` together
    /// with the point `(0,0,1)`.
    SegmentPointDilation {},
}

const SPD_SEGMENT: [Point3; 2] = [[0.0, 0.0, -1.0], [0.0, 0.0, -0.5]];
const SPD_POINT: Point3 = [0.0, 0.0, 1.0];

impl Shape3D {
    /// Unit balls centred at `(0,0,±1)`, touching at the origin.
    pub fn touching_balls() -> Self {
        Shape3D::BallUnion {
            balls: vec![Ball::new([0.0, 0.0, 1.0], 1.0), Ball::new([0.0, 0.0, -1.0], 1.0)],
        }
    }

    /// Height 1, aperture `pi/3`.
    pub fn example_cone() -> Self {
        Shape3D::Cone { height: 1.0, aperture_angle: PI / 3.0 }
    }

    pub fn unit_ball() -> Self {
        Shape3D::Ball(Ball::new([0.0; 3], 1.0))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Shape3D::Ball(_) => "ball",
            Shape3D::BallUnion { .. } => "ball_union",
            Shape3D::Cone { .. } => "cone",
            Shape3D::SegmentPointDilation {} => "segment_point_dilation",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Shape3D::Ball(b) => b.validate(),
            Shape3D::BallUnion { balls } => {
                if balls.is_empty() {
                    return Err(Error::InvalidShape("a union needs at least one ball".into()));
                }
                for b in balls {
                    b.validate()?;
                }
                for (i, a) in balls.iter().enumerate() {
                    for b in &balls[i + 1..] {
                        if pair_gap(a, b) < -1e-12 * (a.radius + b.radius) {
                            return Err(Error::InvalidShape(format!(
                                "balls at {:?} and {:?} overlap",
                                a.center, b.center
                            )));
                        }
                    }
                }
                Ok(())
            }
            Shape3D::Cone { height, aperture_angle } => {
                if !(*height > 0.0 && height.is_finite()) {
                    return Err(Error::InvalidShape(format!("cone height must be positive, got {height}")));
                }
                if !(*aperture_angle > 0.0 && *aperture_angle < PI) {
                    return Err(Error::InvalidShape(format!(
                        "cone aperture must lie in (0, pi), got {aperture_angle}"
                    )));
                }
                Ok(())
            }
            Shape3D::SegmentPointDilation {} => Ok(()),
        }
    }

    /// Base radius of a cone, `height * tan(aperture / 2)`.
    fn cone_base_radius(height: f64, aperture: f64) -> f64 {
        height * (aperture / 2.0).tan()
    }

    fn cone_distance(height: f64, aperture: f64, p: &Point3) -> f64 {
        let a = Self::cone_base_radius(height, aperture);
        let rho = p[0].hypot(p[1]);
        let z = p[2];
        if (0.0..=height).contains(&z) && rho <= a * (1.0 - z / height) {
            return 0.0;
        }
        let q = [rho, z];
        let (base_l, base_r, apex) = ([-a, 0.0], [a, 0.0], [0.0, height]);
        segment_distance(&q, &base_l, &base_r)
            .min(segment_distance(&q, &base_r, &apex))
            .min(segment_distance(&q, &apex, &base_l))
    }
}

fn pair_gap(a: &Ball, b: &Ball) -> f64 {
    norm(&sub(&a.center, &b.center)) - a.radius - b.radius
}

impl Body<3> for Shape3D {
    fn distance(&self, p: &Point3) -> f64 {
        let ball = |b: &Ball| (norm(&sub(p, &b.center)) - b.radius).max(0.0);
        match self {
            Shape3D::Ball(b) => ball(b),
            Shape3D::BallUnion { balls } => balls.iter().map(ball).fold(f64::INFINITY, f64::min),
            Shape3D::Cone { height, aperture_angle } => {
                Self::cone_distance(*height, *aperture_angle, p)
            }
            Shape3D::SegmentPointDilation {} => {
                let to_core = segment_distance(p, &SPD_SEGMENT[0], &SPD_SEGMENT[1])
                    .min(norm(&sub(p, &SPD_POINT)));
                (to_core - 1.0).max(0.0)
            }
        }
    }

    fn bounding_box(&self, margin: f64) -> Aabb<3> {
        let ball_box = |b: &Ball| Aabb::around([b.center], b.radius + margin);
        match self {
            Shape3D::Ball(b) => ball_box(b),
            Shape3D::BallUnion { balls } => balls
                .iter()
                .map(ball_box)
                .reduce(|a, b| a.union(&b))
                .expect("validated union is nonempty"),
            Shape3D::Cone { height, aperture_angle } => {
                let a = Self::cone_base_radius(*height, *aperture_angle);
                Aabb {
                    min: [-(a + margin), -(a + margin), -margin],
                    max: [a + margin, a + margin, height + margin],
                }
            }
            Shape3D::SegmentPointDilation {} => Aabb {
                min: [-1.0 - margin, -1.0 - margin, -2.0 - margin],
                max: [1.0 + margin, 1.0 + margin, 2.0 + margin],
            },
        }
    }

    fn model(&self) -> ModelTag {
        ModelTag::Solid
    }

    fn analytic_volume(&self) -> Result<VolumePolynomial> {
        match self {
            Shape3D::Ball(b) => {
                let a = b.radius;
                VolumePolynomial::new_3d(
                    4.0 / 3.0 * PI * a.powi(3),
                    4.0 * PI * a * a,
                    4.0 * PI * a,
                    1.0,
                    f64::INFINITY,
                )
            }
            Shape3D::BallUnion { balls } => ball_union_volume(balls),
            Shape3D::Cone { height, aperture_angle } => {
                let h = *height;
                let beta = aperture_angle / 2.0;
                let a = Self::cone_base_radius(h, *aperture_angle);
                let slant = h / beta.cos();
                VolumePolynomial::new_3d(
                    PI * a * a * h / 3.0,
                    PI * a * a + PI * a * slant,
                    PI * (h + a * (PI / 2.0 + beta)),
                    1.0,
                    f64::INFINITY,
                )
            }
            Shape3D::SegmentPointDilation {} => {
                // (4/3)pi s^3 + 2 pi s^2 - 9 pi / 32 with s = 1 + r: a capsule plus a
                // ball minus their lens, which always sits on the capsule's upper cap.
                VolumePolynomial::new_3d(293.0 * PI / 96.0, 8.0 * PI, 6.0 * PI, 1.0, f64::INFINITY)
            }
        }
    }
}

fn ball_union_volume(balls: &[Ball]) -> Result<VolumePolynomial> {
    let mu = balls.iter().map(|b| 4.0 / 3.0 * PI * b.radius.powi(3)).sum();
    let l0 = balls.iter().map(|b| 4.0 * PI * b.radius.powi(2)).sum();
    let m: f64 = balls.iter().map(|b| 4.0 * PI * b.radius).sum();
    let mut min_gap = f64::INFINITY;
    for (i, a) in balls.iter().enumerate() {
        for b in &balls[i + 1..] {
            min_gap = min_gap.min(pair_gap(a, b));
        }
    }
    let touching = min_gap <= 1e-12 * balls.iter().map(|b| b.radius).fold(0.0, f64::max);
    match (balls, touching) {
        (_, false) => VolumePolynomial::new_3d(mu, l0, m, balls.len() as f64, min_gap / 2.0),
        ([a, b], true) => {
            // Two offset balls overlap in a lens of volume 4 pi a b r^2 / (a + b) + (4/3) pi r^3.
            let (ra, rb) = (a.radius, b.radius);
            let lens_quad = 4.0 * PI * ra * rb / (ra + rb);
            VolumePolynomial::new_3d(mu, l0, m - lens_quad, 1.0, f64::INFINITY)
        }
        _ => Err(Error::UnsupportedVariant(
            "ball_union with touching balls is only registered for exactly two balls".into(),
        )),
    }
}
