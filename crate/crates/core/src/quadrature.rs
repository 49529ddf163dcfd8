//! Quadrature: symmetric rules on triangles (barycentric points, weights
//! normalized to sum 1) and Gauss-Legendre rules on intervals.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::fmath;
use crate::geometry::{Point2, Triangle};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("no shipped triangle rule of degree {0} (supported: 1..=6)")]
    UnsupportedDegree(u32),
}

/// A quadrature rule on the triangle. Points are barycentric, weights sum to
/// one, and `degree` is the exactness actually verified for the rule (the
/// smallest shipped rule with at least the requested degree is returned, so
/// `degree()` may exceed the request).
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    degree: u32,
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn with_degree(requested: u32) -> Result<Self, QuadratureError> {
        match requested {
            0 | 1 => Ok(Self::centroid()),
            2 => Ok(Self::edge_midpoints()),
            3 | 4 => Ok(Self::six_point()),
            5 | 6 => Ok(Self::twelve_point()),
            d => Err(QuadratureError::UnsupportedDegree(d)),
        }
    }

    /// One point at the centroid; exact for linears.
    pub fn centroid() -> Self {
        let third = 1.0 / 3.0;
        Self {
            degree: 1,
            points: vec![[third, third, third]],
            weights: vec![1.0],
        }
    }

    /// Edge midpoints with equal weights; exact for quadratics. This is the
    /// rule that integrates the square of a P1 difference exactly.
    pub fn edge_midpoints() -> Self {
        let third = 1.0 / 3.0;
        Self {
            degree: 2,
            points: vec![[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]],
            weights: vec![third, third, third],
        }
    }

    /// Six-point symmetric rule, exact through degree 4.
    pub fn six_point() -> Self {
        let mut points = Vec::with_capacity(6);
        let mut weights = Vec::with_capacity(6);
        push_perm3(&mut points, &mut weights, 0.108103018168070, 0.445948490915965, 0.223381589678011);
        push_perm3(&mut points, &mut weights, 0.816847572980459, 0.091576213509771, 0.109951743655322);
        Self { degree: 4, points, weights }
    }

    /// Twelve-point symmetric rule, exact through degree 6; the default for
    /// load vectors.
    pub fn twelve_point() -> Self {
        let mut points = Vec::with_capacity(12);
        let mut weights = Vec::with_capacity(12);
        push_perm3(&mut points, &mut weights, 0.501426509658179, 0.249286745170910, 0.116786275726379);
        push_perm3(&mut points, &mut weights, 0.873821971016996, 0.063089014491502, 0.050844906370207);
        push_perm6(
            &mut points,
            &mut weights,
            0.053145049844816,
            0.310352451033785,
            0.636502499121399,
            0.082851075618374,
        );
        Self { degree: 6, points, weights }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integral of f over the triangle.
    pub fn integrate(&self, t: &Triangle, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for (bary, w) in self.points.iter().zip(&self.weights) {
            let p = t.point_at(*bary);
            acc += w * f(p.x, p.y);
        }
        acc * t.area()
    }
}

fn push_perm3(points: &mut Vec<[f64; 3]>, weights: &mut Vec<f64>, a: f64, b: f64, w: f64) {
    points.push([a, b, b]);
    points.push([b, a, b]);
    points.push([b, b, a]);
    weights.extend_from_slice(&[w, w, w]);
}

fn push_perm6(
    points: &mut Vec<[f64; 3]>,
    weights: &mut Vec<f64>,
    a: f64,
    b: f64,
    c: f64,
    w: f64,
) {
    points.push([a, b, c]);
    points.push([a, c, b]);
    points.push([b, a, c]);
    points.push([b, c, a]);
    points.push([c, a, b]);
    points.push([c, b, a]);
    weights.extend_from_slice(&[w; 6]);
}

/// Gauss-Legendre rule on [-1, 1] with `n` points (exact through degree
/// 2n - 1). Nodes are computed by Newton iteration on the Legendre
/// recurrence from the usual Chebyshev initial guesses; the computation is
/// deterministic and the node set is exactly symmetric by construction.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for k in 0..half {
            let mut z = fmath::cos(PI * (k as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let step = p / d;
                z -= step;
                if fmath::abs(step) <= 1e-15 {
                    let (p, d) = legendre_with_derivative(n, z);
                    dp = d;
                    z -= p / d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[k] = -z;
            nodes[n - 1 - k] = z;
            weights[k] = w;
            weights[n - 1 - k] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Line integral along the segment p -> q with respect to arclength.
    pub fn integrate_line(
        &self,
        p: Point2,
        q: Point2,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> f64 {
        let d = q - p;
        let len = d.norm();
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let s = 0.5 * (1.0 + x);
            acc += w * f(p.x + s * d.x, p.y + s * d.y);
        }
        acc * 0.5 * len
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 1 {
        return (z, 1.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}
