//! Points, vectors, and the oriented triangle that carries the P1 element.

use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::fmath;
use crate::mesh::MeshError;

/// Relative degeneracy threshold: a triangle is rejected when its area does
/// not exceed this factor times the squared longest edge.
pub const DEGENERACY_REL_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (other - self).norm()
    }
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z component of the cross product, positive when `other` lies
    /// counterclockwise of `self`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        fmath::sqrt(self.dot(self))
    }

    /// Quarter turn clockwise. For a counterclockwise boundary tangent this
    /// is the outward direction.
    pub fn perp_cw(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }
}

impl Sub for Point2 {
    type Output = Vec2;
    fn sub(self, rhs: Point2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vec2> for Point2 {
    type Output = Point2;
    fn add(self, rhs: Vec2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        *self = *self + rhs;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs * self
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Signed area of the triangle (p1, p2, p3); positive for counterclockwise
/// vertex order.
pub fn signed_area(p1: Point2, p2: Point2, p3: Point2) -> f64 {
    0.5 * (p2 - p1).cross(p3 - p1)
}

/// A non-degenerate triangle with counterclockwise vertex order. The
/// constructor enforces both properties; clockwise input is rejected, not
/// silently reordered, so that vertex labels keep their meaning downstream.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangle {
    vertices: [Point2; 3],
}

impl Triangle {
    pub fn new(v1: Point2, v2: Point2, v3: Point2) -> Result<Self, MeshError> {
        let area = signed_area(v1, v2, v3);
        let e = longest_edge(v1, v2, v3);
        let floor = DEGENERACY_REL_TOL * e * e;
        if fmath::abs(area) <= floor {
            return Err(MeshError::DegenerateTriangle { area, edge: e });
        }
        if area < 0.0 {
            return Err(MeshError::ClockwiseTriangle { area });
        }
        Ok(Self { vertices: [v1, v2, v3] })
    }

    /// Caller guarantees counterclockwise order and non-degeneracy (mesh
    /// generation does, by construction).
    pub(crate) fn new_unchecked(v1: Point2, v2: Point2, v3: Point2) -> Self {
        debug_assert!(signed_area(v1, v2, v3) > 0.0);
        Self { vertices: [v1, v2, v3] }
    }

    pub fn vertices(&self) -> [Point2; 3] {
        self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i]
    }

    pub fn area(&self) -> f64 {
        signed_area(self.vertices[0], self.vertices[1], self.vertices[2])
    }

    /// Cartesian point for barycentric coordinates (with respect to the
    /// vertex order of the triangle).
    pub fn point_at(&self, bary: [f64; 3]) -> Point2 {
        let [v1, v2, v3] = self.vertices;
        Point2::new(
            bary[0] * v1.x + bary[1] * v2.x + bary[2] * v3.x,
            bary[0] * v1.y + bary[1] * v2.y + bary[2] * v3.y,
        )
    }

    /// Barycentric coordinates of an arbitrary point (affine, may be
    /// negative outside the triangle): ratios of sub-triangle areas.
    pub fn barycentric(&self, p: Point2) -> [f64; 3] {
        let [v1, v2, v3] = self.vertices;
        let inv = 1.0 / self.area();
        let l1 = signed_area(p, v2, v3) * inv;
        let l2 = signed_area(v1, p, v3) * inv;
        let l3 = signed_area(v1, v2, p) * inv;
        [l1, l2, l3]
    }
}

fn longest_edge(v1: Point2, v2: Point2, v3: Point2) -> f64 {
    let a = (v2 - v1).norm();
    let b = (v3 - v2).norm();
    let c = (v1 - v3).norm();
    a.max(b).max(c)
}

/// Gradients of the three shape functions phi_i (phi_i(V_j) = delta_ij).
/// They are constant on the element and sum to zero.
pub fn shape_gradients(t: &Triangle) -> [Vec2; 3] {
    let [v1, v2, v3] = t.vertices();
    let inv2a = 1.0 / (2.0 * t.area());
    [
        Vec2::new(v2.y - v3.y, v3.x - v2.x) * inv2a,
        Vec2::new(v3.y - v1.y, v1.x - v3.x) * inv2a,
        Vec2::new(v1.y - v2.y, v2.x - v1.x) * inv2a,
    ]
}

/// Edge lengths ordered by the opposite vertex: [l23, l31, l12], where l_jk
/// joins vertices j and k and sits opposite the remaining vertex.
pub fn edge_lengths(t: &Triangle) -> [f64; 3] {
    let [v1, v2, v3] = t.vertices();
    [(v3 - v2).norm(), (v1 - v3).norm(), (v2 - v1).norm()]
}
