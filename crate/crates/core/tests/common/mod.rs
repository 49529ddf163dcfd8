//! Shared oracles for the integration suites. Everything here is deliberately
//! independent of the library's quadrature and solver paths: polynomial
//! integrals come from the factorial formula on the reference triangle, and
//! linear systems from a dense Cholesky factorization.
#![allow(dead_code)] // each suite pulls in only the oracles it needs

use equifem_core::{Point2, Poly2, SpdTensor2, Triangle, Vec2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// ∫ over the unit reference triangle of ξ^p η^q = p! q! / (p+q+2)!.
pub fn reference_monomial_integral(p: u32, q: u32) -> f64 {
    factorial(p) * factorial(q) / factorial(p + q + 2)
}

/// Exact integral of a bivariate polynomial over an arbitrary triangle,
/// via pullback to the reference triangle and the factorial formula.
pub fn integrate_poly(t: &Triangle, w: &Poly2) -> f64 {
    let [v1, v2, v3] = t.vertices();
    let linear = [[v2.x - v1.x, v3.x - v1.x], [v2.y - v1.y, v3.y - v1.y]];
    let pulled = w.compose_affine(linear, Vec2::new(v1.x, v1.y));
    let jacobian = 2.0 * t.area();
    pulled
        .terms()
        .iter()
        .map(|term| term.c * reference_monomial_integral(term.px, term.py))
        .sum::<f64>()
        * jacobian
}

/// Exact arclength line integral of a polynomial along the segment p→q.
pub fn integrate_poly_segment(p: Point2, q: Point2, w: &Poly2) -> f64 {
    let d = q - p;
    // Restrict to the segment: substitute (x, y) = p + s·d, leaving a
    // univariate polynomial in the first variable.
    let restricted = w.compose_affine([[d.x, 0.0], [d.y, 0.0]], Vec2::new(p.x, p.y));
    let len = d.norm();
    restricted
        .terms()
        .iter()
        .map(|term| {
            assert_eq!(term.py, 0, "restriction must be univariate");
            term.c / (term.px + 1) as f64
        })
        .sum::<f64>()
        * len
}

/// Dense symmetric positive definite solve by unpivoted Cholesky.
pub fn solve_dense_spd(matrix: &[Vec<f64>], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    assert_eq!(matrix.len(), n);
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = matrix[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                assert!(s > 0.0, "matrix not positive definite at pivot {i}");
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut y = vec![0.0f64; n];
    for i in 0..n {
        let mut s = rhs[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}

/// Random well-shaped CCW triangle: vertices in [-2, 2]², rejected until the
/// area is comfortably away from degeneracy.
pub fn random_triangle(rng: &mut ChaCha8Rng) -> Triangle {
    loop {
        let mut pts = [Point2::new(0.0, 0.0); 3];
        for p in &mut pts {
            *p = Point2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        }
        let cross = (pts[1] - pts[0]).cross(pts[2] - pts[0]);
        if cross < 0.0 {
            pts.swap(1, 2);
        }
        if cross.abs() < 0.2 {
            continue;
        }
        if let Ok(t) = Triangle::new(pts[0], pts[1], pts[2]) {
            return t;
        }
    }
}

/// Random SPD tensor with eigenvalues bounded away from zero.
pub fn random_spd_tensor(rng: &mut ChaCha8Rng) -> SpdTensor2 {
    loop {
        let a11: f64 = rng.random_range(0.5..6.0);
        let a22: f64 = rng.random_range(0.5..6.0);
        let bound = (a11 * a22).sqrt();
        let a12 = rng.random_range(-0.9..0.9) * bound;
        if a11 * a22 - a12 * a12 > 0.05 {
            return SpdTensor2::new(a11, a12, a22).unwrap();
        }
    }
}

/// Random polynomial of the given total degree with coefficients in [-1, 1].
pub fn random_poly(rng: &mut ChaCha8Rng, degree: u32) -> Poly2 {
    let mut terms = Vec::new();
    for px in 0..=degree {
        for py in 0..=degree - px {
            terms.push((px, py, rng.random_range(-1.0..1.0)));
        }
    }
    Poly2::new(terms)
}

/// Hat (nodal basis) polynomials of a triangle, built independently of the
/// library's gradient formula: solve the 3x3 Vandermonde system
/// a + b x_j + c y_j = δ_ij by Cramer's rule.
pub fn hat_polynomials(t: &Triangle) -> [Poly2; 3] {
    let [v1, v2, v3] = t.vertices();
    let vs = [v1, v2, v3];
    let det = vs[1].x * vs[2].y - vs[2].x * vs[1].y + vs[2].x * vs[0].y - vs[0].x * vs[2].y
        + vs[0].x * vs[1].y - vs[1].x * vs[0].y;
    core::array::from_fn(|i| {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        let a = (vs[j].x * vs[k].y - vs[k].x * vs[j].y) / det;
        let b = (vs[j].y - vs[k].y) / det;
        let c = (vs[k].x - vs[j].x) / det;
        Poly2::new([(0, 0, a), (1, 0, b), (0, 1, c)])
    })
}

/// Eigenvalues of a symmetric 3x3 matrix (ascending), by the trigonometric
/// closed form for the characteristic cubic.
pub fn sym3_eigenvalues(m: [[f64; 3]; 3]) -> [f64; 3] {
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    if p1 == 0.0 {
        let mut d = [m[0][0], m[1][1], m[2][2]];
        d.sort_by(f64::total_cmp);
        return d;
    }
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b = |i: usize, j: usize| (m[i][j] - if i == j { q } else { 0.0 }) / p;
    let detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
        - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let r = (detb / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * core::f64::consts::PI / 3.0).cos();
    [lo, 3.0 * q - hi - lo, hi]
}
