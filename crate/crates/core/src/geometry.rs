//! Euclidean primitives on R³ together with the contact form
//! Θ = dz + x dy − y dx of the Heisenberg group.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::reduce_mod_pi;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Points and vectors share one representation.
pub type Point3 = Vec3;

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Θ_p(v) = v_z + p_x v_y − p_y v_x.
pub fn contact_form(p: Point3, v: Vec3) -> f64 {
    v.z + p.x * v.y - p.y * v.x
}

/// The vector (−y, x, 1) dual to Θ at `p`.
pub fn contact_normal(p: Point3) -> Vec3 {
    Vec3::new(-p.y, p.x, 1.0)
}

/// The contact plane through `p`.
pub fn contact_plane_at(p: Point3) -> Plane3 {
    let normal = contact_normal(p).normalized().expect("contact normal has z-component 1");
    Plane3 {
        normal,
        offset: normal.dot(p),
    }
}

/// Shoelace signed area; positive for counterclockwise vertex order.
pub fn signed_polygon_area(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let twice: f64 = (0..n)
        .map(|i| {
            let [x0, y0] = vertices[i];
            let [x1, y1] = vertices[(i + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum();
    0.5 * twice
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line3 {
    pub point: Point3,
    /// Unit length.
    pub direction: Vec3,
}

impl Line3 {
    pub fn new(point: Point3, direction: Vec3) -> Result<Self> {
        let direction = direction
            .normalized()
            .ok_or_else(|| Error::InvalidProfile("line direction must be nonzero".into()))?;
        Ok(Self { point, direction })
    }

    pub fn at(&self, s: f64) -> Point3 {
        self.point + self.direction * s
    }

    /// Euclidean distance from the line to the origin.
    pub fn origin_distance(&self) -> f64 {
        let p = self.point;
        let d = self.direction;
        (p - d * p.dot(d)).norm()
    }
}

pub fn line_origin_distance(line: &Line3) -> f64 {
    line.origin_distance()
}

/// The planar line `{x cosθ + y sinθ = δ}` in Hesse normal form with
/// θ ∈ [0, π).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line2 {
    pub angle: f64,
    pub offset: f64,
}

impl Line2 {
    pub fn new(angle: f64, offset: f64) -> Self {
        let (angle, flipped) = reduce_mod_pi(angle);
        Self {
            angle,
            offset: if flipped { -offset } else { offset },
        }
    }

    pub fn canonicalize(self) -> Self {
        Self::new(self.angle, self.offset)
    }

    pub fn normal(&self) -> [f64; 2] {
        [self.angle.cos(), self.angle.sin()]
    }

    /// Signed distance of `(x, y)` from the line.
    pub fn signed_distance(&self, x: f64, y: f64) -> f64 {
        x * self.angle.cos() + y * self.angle.sin() - self.offset
    }

    /// Foot of the perpendicular from the origin.
    pub fn foot(&self) -> [f64; 2] {
        let [c, s] = self.normal();
        [self.offset * c, self.offset * s]
    }

    pub fn same_line(&self, other: &Line2, angle_tol: f64, offset_tol: f64) -> bool {
        let d = (self.angle - other.angle).abs();
        let d = d.min(PI - d);
        if d > angle_tol {
            return false;
        }
        // Near the wrap-around the two normals point opposite ways.
        let sign = if (self.angle - other.angle).abs() > PI / 2.0 { -1.0 } else { 1.0 };
        (self.offset - sign * other.offset).abs() <= offset_tol
    }
}

/// `{p : normal · p = offset}` with a unit normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plane3 {
    pub normal: Vec3,
    pub offset: f64,
}

impl Plane3 {
    pub fn new(normal: Vec3, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidProfile("plane normal must be nonzero".into()));
        }
        Ok(Self {
            normal: normal * (1.0 / n),
            offset: offset / n,
        })
    }

    /// The plane `z = a x + b y + c`.
    pub fn graph(a: f64, b: f64, c: f64) -> Self {
        Self::new(Vec3::new(-a, -b, 1.0), c).expect("non-vertical normal")
    }

    pub fn signed_distance(&self, p: Point3) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// Positive on the side containing (0, 0, +∞); zero for vertical planes.
    pub fn upper_side_value(&self, p: Point3) -> f64 {
        if self.normal.z == 0.0 {
            0.0
        } else {
            self.normal.z.signum() * self.signed_distance(p)
        }
    }

    /// Height of the plane over `(x, y)`, if it is not vertical.
    pub fn height_at(&self, x: f64, y: f64) -> Option<f64> {
        (self.normal.z != 0.0).then(|| (self.offset - self.normal.x * x - self.normal.y * y) / self.normal.z)
    }

    /// The point `(x₀, y₀)` whose contact normal (−y₀, x₀, 1) is parallel
    /// to this plane's normal; `None` for vertical planes.
    pub fn contact_point(&self, vertical_tol: f64) -> Option<[f64; 2]> {
        let n = self.normal;
        (n.z.abs() > vertical_tol).then(|| [n.y / n.z, -n.x / n.z])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contact_form_examples() {
        assert_eq!(contact_form(Vec3::ZERO, Vec3::new(1.0, 2.0, 3.0)), 3.0);
        assert_eq!(contact_form(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)), 1.0);
        for &(x, z, t) in &[(0.3, -2.0, 1.5), (-4.0, 1.0, -0.25), (10.0, 0.0, 3.0)] {
            let p = Vec3::new(x, t * t, z);
            assert_eq!(contact_form(p, Vec3::new(1.0, 0.0, t * t)), 0.0);
        }
    }

    #[test]
    fn contact_plane_examples() {
        let origin = contact_plane_at(Vec3::ZERO);
        assert_eq!(origin.normal, Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(origin.offset, 0.0);

        let p = Vec3::new(1.5, -0.5, 2.0);
        let plane = contact_plane_at(p);
        for &(x, y) in &[(0.0, 0.0), (1.0, 2.0), (-3.0, 0.5)] {
            let z = plane.height_at(x, y).unwrap();
            assert!((z - (p.y * x - p.x * y + p.z)).abs() < 1e-12);
        }

        let n = contact_plane_at(Vec3::new(1.0, 1.0, 0.0)).normal;
        let expected = Vec3::new(-1.0, 1.0, 1.0).normalized().unwrap();
        assert!((n - expected).norm() < 1e-15);
    }

    #[test]
    fn shoelace_examples() {
        let square = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert_eq!(signed_polygon_area(&square), 1.0);
        let mut cw = square;
        cw.reverse();
        assert_eq!(signed_polygon_area(&cw), -1.0);
        assert_eq!(signed_polygon_area(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]), 2.0);
    }

    #[test]
    fn origin_distance_examples() {
        let l = Line3::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(l.origin_distance(), 1.0);
        let l = Line3::new(Vec3::ZERO, Vec3::new(0.3, -2.0, 1.0)).unwrap();
        assert_eq!(l.origin_distance(), 0.0);
        assert!(Line3::new(Vec3::ZERO, Vec3::ZERO).is_err());
    }

    #[test]
    fn line2_canonical_form() {
        let l = Line2::new(PI + 0.25, 2.0);
        assert!((l.angle - 0.25).abs() < 1e-15);
        assert_eq!(l.offset, -2.0);
        assert!(Line2::new(-0.25, 1.0).same_line(&Line2::new(PI - 0.25, -1.0), 1e-12, 1e-12));
        assert!(!Line2::new(-0.25, 1.0).same_line(&Line2::new(PI - 0.25, 1.0), 1e-12, 1e-12));
        assert!(Line2::new(1e-13, 1.0).same_line(&Line2::new(PI - 1e-13, -1.0), 1e-12, 1e-12));
    }

    #[test]
    fn vertical_planes_have_no_contact_point() {
        let p = Plane3::new(Vec3::new(0.0, 1.0, 0.0), 0.0).unwrap();
        assert!(p.contact_point(1e-12).is_none());
        let q = contact_plane_at(Vec3::new(2.0, -1.0, 5.0));
        let [x0, y0] = q.contact_point(1e-12).unwrap();
        assert!((x0 - 2.0).abs() < 1e-12 && (y0 + 1.0).abs() < 1e-12);
    }
}
