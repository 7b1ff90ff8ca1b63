use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{dot, norm, segment_distance, sub, Aabb, Body, ModelTag, Point2, VolumePolynomial};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
}

impl Disk {
    pub const fn new(center: Point2, radius: f64) -> Self {
        Disk { center, radius }
    }

    fn center_distance(&self, p: &Point2) -> f64 {
        norm(&sub(p, &self.center))
    }

    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidShape(format!(
                "disk radius must be positive and finite, got {}",
                self.radius
            )));
        }
        if !self.center.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidShape("disk center must be finite".into()));
        }
        Ok(())
    }
}

/// Planar sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", rename_all = "snake_case")]
pub enum Shape2D {
    Disk(Disk),
    /// Solid union of pairwise disjoint disks.
    DiskUnion { disks: Vec<Disk> },
    /// The boundary circles of pairwise disjoint disks, sampled under the manifold model.
    CircleUnion { circles: Vec<Disk> },
    Rectangle { min: Point2, max: Point2 },
    /// Strictly convex polygon with counterclockwise vertices.
    ConvexPolygon { vertices: Vec<Point2> },
    /// Open polygonal curve, sampled under the manifold model.
    Polyline { vertices: Vec<Point2> },
    /// The closed unit disk with the open sector `|angle| < wedge_angle / 2` removed.
    WedgeCutDisk { wedge_angle: f64 },
}

impl Shape2D {
    /// Two disks of radius 0.25 centred at `(±2.75, 0)`.
    pub fn two_disks() -> Self {
        Shape2D::DiskUnion {
            disks: vec![Disk::new([-2.75, 0.0], 0.25), Disk::new([2.75, 0.0], 0.25)],
        }
    }

    /// The boundary circles of [`Shape2D::two_disks`].
    pub fn two_circles() -> Self {
        Shape2D::CircleUnion {
            circles: vec![Disk::new([-2.75, 0.0], 0.25), Disk::new([2.75, 0.0], 0.25)],
        }
    }

    /// The right-angle polyline through `(-1,1)`, `(0,0)`, `(1,1)`.
    pub fn bent_polyline() -> Self {
        Shape2D::Polyline {
            vertices: vec![[-1.0, 1.0], [0.0, 0.0], [1.0, 1.0]],
        }
    }

    pub fn unit_disk() -> Self {
        Shape2D::Disk(Disk::new([0.0, 0.0], 1.0))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Shape2D::Disk(_) => "disk",
            Shape2D::DiskUnion { .. } => "disk_union",
            Shape2D::CircleUnion { .. } => "circle_union",
            Shape2D::Rectangle { .. } => "rectangle",
            Shape2D::ConvexPolygon { .. } => "convex_polygon",
            Shape2D::Polyline { .. } => "polyline",
            Shape2D::WedgeCutDisk { .. } => "wedge_cut_disk",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Shape2D::Disk(d) => d.validate(),
            Shape2D::DiskUnion { disks: d } | Shape2D::CircleUnion { circles: d } => {
                validate_disjoint(d)
            }
            Shape2D::Rectangle { min, max } => {
                if (0..2).all(|i| min[i].is_finite() && max[i].is_finite() && min[i] < max[i]) {
                    Ok(())
                } else {
                    Err(Error::InvalidShape(format!(
                        "rectangle needs min < max componentwise, got {min:?} and {max:?}"
                    )))
                }
            }
            Shape2D::ConvexPolygon { vertices } => validate_convex(vertices),
            Shape2D::Polyline { vertices } => {
                if vertices.len() < 2 {
                    return Err(Error::InvalidShape("polyline needs at least two vertices".into()));
                }
                if vertices.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidShape("polyline vertices must be finite".into()));
                }
                if vertices.windows(2).any(|w| norm(&sub(&w[1], &w[0])) == 0.0) {
                    return Err(Error::InvalidShape("polyline has a zero-length segment".into()));
                }
                Ok(())
            }
            Shape2D::WedgeCutDisk { wedge_angle } => {
                if *wedge_angle > 0.0 && *wedge_angle < PI / 2.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidShape(format!(
                        "wedge angle must lie in (0, pi/2), got {wedge_angle}"
                    )))
                }
            }
        }
    }

    fn wedge_distance(rho: f64, p: &Point2) -> f64 {
        let half = rho / 2.0;
        let r = norm(p);
        let theta = p[1].atan2(p[0]);
        let outside_notch = theta.abs() >= half;
        if r <= 1.0 && outside_notch {
            return 0.0;
        }
        let origin = [0.0, 0.0];
        let upper = [half.cos(), half.sin()];
        let lower = [half.cos(), -half.sin()];
        let mut d = segment_distance(p, &origin, &upper).min(segment_distance(p, &origin, &lower));
        if outside_notch {
            d = d.min((r - 1.0).abs());
        }
        d
    }
}

fn validate_disjoint(disks: &[Disk]) -> Result<()> {
    if disks.is_empty() {
        return Err(Error::InvalidShape("a union needs at least one disk".into()));
    }
    for d in disks {
        d.validate()?;
    }
    for (i, a) in disks.iter().enumerate() {
        for b in &disks[i + 1..] {
            if pair_gap(a, b) <= 0.0 {
                return Err(Error::InvalidShape(format!(
                    "disks at {:?} and {:?} are not disjoint",
                    a.center, b.center
                )));
            }
        }
    }
    Ok(())
}

fn pair_gap(a: &Disk, b: &Disk) -> f64 {
    norm(&sub(&a.center, &b.center)) - a.radius - b.radius
}

fn cross(o: &Point2, a: &Point2, b: &Point2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn validate_convex(vertices: &[Point2]) -> Result<()> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::InvalidShape("convex polygon needs at least three vertices".into()));
    }
    if vertices.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::InvalidShape("polygon vertices must be finite".into()));
    }
    let mut turning = 0.0;
    for i in 0..n {
        let (a, b, c) = (&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
        if cross(a, b, c) <= 0.0 {
            return Err(Error::InvalidShape(
                "polygon vertices must be strictly convex and counterclockwise".into(),
            ));
        }
        let u = sub(b, a);
        let v = sub(c, b);
        turning += (u[0] * v[1] - u[1] * v[0]).atan2(dot(&u, &v));
    }
    if (turning - 2.0 * PI).abs() > 1e-9 {
        return Err(Error::InvalidShape("polygon boundary winds more than once".into()));
    }
    Ok(())
}

fn closed_edges(vertices: &[Point2]) -> impl Iterator<Item = (&Point2, &Point2)> {
    vertices.iter().zip(vertices.iter().cycle().skip(1))
}

impl Body<2> for Shape2D {
    fn distance(&self, p: &Point2) -> f64 {
        match self {
            Shape2D::Disk(d) => (d.center_distance(p) - d.radius).max(0.0),
            Shape2D::DiskUnion { disks } => disks
                .iter()
                .map(|d| (d.center_distance(p) - d.radius).max(0.0))
                .fold(f64::INFINITY, f64::min),
            Shape2D::CircleUnion { circles } => circles
                .iter()
                .map(|d| (d.center_distance(p) - d.radius).abs())
                .fold(f64::INFINITY, f64::min),
            Shape2D::Rectangle { min, max } => {
                let dx = (min[0] - p[0]).max(p[0] - max[0]).max(0.0);
                let dy = (min[1] - p[1]).max(p[1] - max[1]).max(0.0);
                dx.hypot(dy)
            }
            Shape2D::ConvexPolygon { vertices } => {
                if closed_edges(vertices).all(|(a, b)| cross(a, b, p) >= 0.0) {
                    0.0
                } else {
                    closed_edges(vertices)
                        .map(|(a, b)| segment_distance(p, a, b))
                        .fold(f64::INFINITY, f64::min)
                }
            }
            Shape2D::Polyline { vertices } => vertices
                .windows(2)
                .map(|w| segment_distance(p, &w[0], &w[1]))
                .fold(f64::INFINITY, f64::min),
            Shape2D::WedgeCutDisk { wedge_angle } => Self::wedge_distance(*wedge_angle, p),
        }
    }

    fn bounding_box(&self, margin: f64) -> Aabb<2> {
        let disk_box = |d: &Disk| Aabb::around([d.center], d.radius + margin);
        match self {
            Shape2D::Disk(d) => disk_box(d),
            Shape2D::DiskUnion { disks: ds } | Shape2D::CircleUnion { circles: ds } => ds
                .iter()
                .map(disk_box)
                .reduce(|a, b| a.union(&b))
                .expect("validated union is nonempty"),
            Shape2D::Rectangle { min, max } => Aabb::around([*min, *max], margin),
            Shape2D::ConvexPolygon { vertices } | Shape2D::Polyline { vertices } => {
                Aabb::around(vertices.iter().copied(), margin)
            }
            Shape2D::WedgeCutDisk { .. } => Aabb::around([[0.0, 0.0]], 1.0 + margin),
        }
    }

    fn model(&self) -> ModelTag {
        match self {
            Shape2D::CircleUnion { .. } | Shape2D::Polyline { .. } => ModelTag::Manifold,
            _ => ModelTag::Solid,
        }
    }

    fn analytic_volume(&self) -> Result<VolumePolynomial> {
        match self {
            Shape2D::Disk(d) => {
                VolumePolynomial::new_2d(PI * d.radius.powi(2), 2.0 * PI * d.radius, 1.0, f64::INFINITY)
            }
            Shape2D::DiskUnion { disks } => {
                let mu = disks.iter().map(|d| PI * d.radius.powi(2)).sum();
                let l0 = disks.iter().map(|d| 2.0 * PI * d.radius).sum();
                let mut min_gap = f64::INFINITY;
                for (i, a) in disks.iter().enumerate() {
                    for b in &disks[i + 1..] {
                        min_gap = min_gap.min(pair_gap(a, b));
                    }
                }
                VolumePolynomial::new_2d(mu, l0, disks.len() as f64, min_gap / 2.0)
            }
            Shape2D::CircleUnion { .. } => Err(Error::UnsupportedVariant(
                "circle_union: the band around a closed curve has area 2*length*r, so the \
                 quadratic coefficient vanishes and the model is degenerate"
                    .into(),
            )),
            Shape2D::Rectangle { min, max } => {
                let (w, h) = (max[0] - min[0], max[1] - min[1]);
                VolumePolynomial::new_2d(w * h, 2.0 * (w + h), 1.0, f64::INFINITY)
            }
            Shape2D::ConvexPolygon { vertices } => {
                let area = closed_edges(vertices)
                    .map(|(a, b)| a[0] * b[1] - a[1] * b[0])
                    .sum::<f64>()
                    / 2.0;
                let perimeter = closed_edges(vertices).map(|(a, b)| norm(&sub(b, a))).sum();
                VolumePolynomial::new_2d(area, perimeter, 1.0, f64::INFINITY)
            }
            Shape2D::Polyline { vertices } => polyline_volume(vertices),
            Shape2D::WedgeCutDisk { wedge_angle: rho } => {
                let t = (rho / 2.0).tan();
                let quad = (3.0 * PI - rho) / 2.0 - 1.0 / t;
                VolumePolynomial::new_2d(PI - rho / 2.0, 2.0 * PI - rho + 2.0, quad / PI, t)
            }
        }
    }
}

/// Closed-form volume for a single segment, or for two segments meeting at a
/// turning angle of at most a right angle.
fn polyline_volume(vertices: &[Point2]) -> Result<VolumePolynomial> {
    match vertices {
        [a, b] => VolumePolynomial::new_2d(0.0, 2.0 * norm(&sub(b, a)), 1.0, f64::INFINITY),
        [a, b, c] => {
            let u = sub(b, a);
            let v = sub(c, b);
            let (l1, l2) = (norm(&u), norm(&v));
            let turn = (u[0] * v[1] - u[1] * v[0]).abs().atan2(dot(&u, &v));
            if turn > PI / 2.0 + 1e-12 {
                return Err(Error::UnsupportedVariant(format!(
                    "polyline turning angle {turn:.4} exceeds pi/2; no closed form registered"
                )));
            }
            let quad = PI + turn / 2.0 - (turn / 2.0).tan();
            let r_max = (norm(&sub(c, a)) / 2.0).min(l1).min(l2);
            VolumePolynomial::new_2d(0.0, 2.0 * (l1 + l2), quad / PI, r_max)
        }
        _ => Err(Error::UnsupportedVariant(
            "polyline with more than three vertices".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_disk_distance_at_origin() {
        assert_relative_eq!(Shape2D::two_disks().distance(&[0.0, 0.0]), 2.5, epsilon = 1e-15);
        assert_relative_eq!(Shape2D::two_disks().distance(&[3.25, 0.0]), 0.25, epsilon = 1e-15);
        assert_eq!(Shape2D::two_disks().distance(&[2.75, 0.1]), 0.0);
    }

    #[test]
    fn circle_union_distance_is_unsigned() {
        let s = Shape2D::two_circles();
        assert_relative_eq!(s.distance(&[2.75, 0.0]), 0.25, epsilon = 1e-15);
        assert_relative_eq!(s.distance(&[3.25, 0.0]), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn rectangle_corner_distance() {
        let s = Shape2D::Rectangle { min: [0.0, 0.0], max: [1.0, 1.0] };
        assert_relative_eq!(s.distance(&[2.0, 2.0]), 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(s.distance(&[0.5, 0.5]), 0.0);
        assert_relative_eq!(s.distance(&[0.5, -3.0]), 3.0);
    }

    #[test]
    fn rectangle_distance_matches_grid_minimization() {
        let s = Shape2D::Rectangle { min: [0.0, 0.0], max: [1.0, 1.0] };
        let p = [2.0, 2.0];
        let mut best = f64::INFINITY;
        let m = 2000;
        for i in 0..=m {
            let t = i as f64 / m as f64;
            for q in [[t, 0.0], [t, 1.0], [0.0, t], [1.0, t]] {
                best = best.min(norm(&sub(&p, &q)));
            }
        }
        assert_relative_eq!(s.distance(&p), best, epsilon = 1e-12);
    }

    #[test]
    fn convex_polygon_matches_rectangle() {
        let poly = Shape2D::ConvexPolygon {
            vertices: vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]],
        };
        let rect = Shape2D::Rectangle { min: [0.0, 0.0], max: [2.0, 1.0] };
        for p in [[3.0, 3.0], [-1.0, 0.5], [1.0, 0.5], [1.0, -0.25], [2.5, -0.5]] {
            assert_relative_eq!(poly.distance(&p), rect.distance(&p), epsilon = 1e-14);
        }
        let vp = poly.analytic_volume().unwrap();
        assert_relative_eq!(vp.mu, 2.0);
        assert_relative_eq!(vp.l0, 6.0);
    }

    #[test]
    fn clockwise_polygon_is_rejected() {
        let s = Shape2D::ConvexPolygon {
            vertices: vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]],
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn wedge_cut_disk_distances() {
        let s = Shape2D::WedgeCutDisk { wedge_angle: 1.0 };
        assert_eq!(s.distance(&[-0.5, 0.0]), 0.0);
        assert_relative_eq!(s.distance(&[-2.0, 0.0]), 1.0, epsilon = 1e-15);
        // On the notch bisector the nearest points are on the two straight edges.
        let x = 0.5;
        assert_relative_eq!(s.distance(&[x, 0.0]), x * 0.5f64.sin(), epsilon = 1e-15);
        // Beyond the rim tip the nearest point is the tip.
        let tip = [0.5f64.cos(), 0.5f64.sin()];
        let p = [2.0, 0.0];
        assert_relative_eq!(s.distance(&p), norm(&sub(&p, &tip)), epsilon = 1e-14);
    }

    #[test]
    fn two_disk_volume_coefficients() {
        let v = Shape2D::two_disks().analytic_volume().unwrap();
        assert_relative_eq!(v.mu, 2.0 * PI * 0.0625, epsilon = 1e-15);
        assert_relative_eq!(v.l0, PI, epsilon = 1e-15);
        assert_eq!(v.phi0, 2.0);
        assert_relative_eq!(v.r_max, 2.5, epsilon = 1e-15);
    }

    #[test]
    fn polyline_volume_coefficients() {
        let v = Shape2D::bent_polyline().analytic_volume().unwrap();
        assert_relative_eq!(v.phi0, 1.25 - 1.0 / PI, epsilon = 1e-14);
        assert_relative_eq!(v.l0, 4.0 * 2f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(v.r_max, 1.0, epsilon = 1e-15);
        assert_eq!(Shape2D::bent_polyline().model(), ModelTag::Manifold);
    }

    #[test]
    fn wedge_volume_coefficients() {
        let rho = 1.2;
        let v = Shape2D::WedgeCutDisk { wedge_angle: rho }.analytic_volume().unwrap();
        let expected = (3.0 * PI - rho) / (2.0 * PI) - 1.0 / (PI * (rho / 2.0).tan());
        assert_relative_eq!(v.phi0, expected, epsilon = 1e-14);
        assert_relative_eq!(v.r_max, (rho / 2.0).tan(), epsilon = 1e-15);
    }

    #[test]
    fn circle_union_has_no_polynomial() {
        assert!(matches!(
            Shape2D::two_circles().analytic_volume(),
            Err(Error::UnsupportedVariant(_))
        ));
    }

    #[test]
    fn bounding_boxes() {
        let d = Shape2D::unit_disk();
        assert_eq!(d.bounding_box(0.0), Aabb { min: [-1.0, -1.0], max: [1.0, 1.0] });
        assert_eq!(d.bounding_box(0.5), Aabb { min: [-1.5, -1.5], max: [1.5, 1.5] });
        let b = Shape2D::two_disks().bounding_box(1.0);
        assert_eq!(b, Aabb { min: [-4.0, -1.25], max: [4.0, 1.25] });
    }
}
