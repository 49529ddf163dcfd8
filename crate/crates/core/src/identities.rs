//! Numerical verification of the per-triangle identities the error analysis
//! rests on: the duality between outward normals and shape gradients, and
//! the transfer of an edge integral to the opposite edge plus an area term.
//!
//! Edges are indexed by the opposite vertex and traversed counterclockwise:
//! edge 0 runs V2 -> V3, edge 1 runs V3 -> V1, edge 2 runs V1 -> V2. All
//! tangential derivatives are taken along these directions.

use crate::fmath;
use crate::geometry::{Point2, Triangle, edge_lengths, shape_gradients};
use crate::poly::Poly2;
use crate::quadrature::{GaussLegendre, QuadratureRule};

/// Worst deviation, over the three edges, between the outward unit normal
/// built geometrically (clockwise quarter turn of the traversal tangent)
/// and the gradient form -2|T| grad(phi_i) / l_i, where l_i is the length
/// of the edge opposite vertex i. Zero in exact arithmetic for every
/// non-degenerate triangle.
pub fn verify_normal_identity(t: &Triangle) -> f64 {
    let g = shape_gradients(t);
    let l = edge_lengths(t);
    let area = t.area();
    let mut worst = 0.0f64;
    for i in 0..3 {
        let (p, q) = edge_endpoints(t, i);
        let n_geo = (q - p).normalized().perp_cw();
        let n_grad = g[i] * (-2.0 * area / l[i]);
        worst = worst.max((n_geo - n_grad).norm());
    }
    worst
}

/// Start and end of edge k (the edge opposite vertex k), counterclockwise.
fn edge_endpoints(t: &Triangle, k: usize) -> (Point2, Point2) {
    (t.vertex((k + 1) % 3), t.vertex((k + 2) % 3))
}

/// Both sides of one transfer identity, with the residual and the magnitude
/// of the largest participating term (the natural scale for judging the
/// residual).
#[derive(Clone, Copy, Debug)]
pub struct TransferCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub scale: f64,
}

/// Verifies the transfer identity with left-hand edge `identity` (0, 1, 2):
///
///   integral_{edge k} w ds = -(l_{k+1} l_k)/(2|T|) integral_T D_{k+1} w
///                            + (l_k / l_{k+2}) integral_{edge k+2} w ds,
///
/// indices cyclic, D_j the derivative along the traversal direction of edge
/// j. Line integrals use a 4-point Gauss rule, the area integral the
/// 12-point triangle rule, so everything is exact (to rounding) for w of
/// total degree at most 6.
pub fn verify_edge_transfer(t: &Triangle, w: &Poly2, identity: usize) -> TransferCheck {
    assert!(identity < 3, "the identity family has members 0, 1, 2");
    let l = edge_lengths(t);
    let area = t.area();
    let k = identity;
    let kd = (k + 1) % 3;
    let ks = (k + 2) % 3;

    let gl = GaussLegendre::new(4);
    let rule = QuadratureRule::with_degree(6).expect("shipped rule");

    let (p, q) = edge_endpoints(t, k);
    let lhs = gl.integrate_line(p, q, |x, y| w.eval(x, y));

    let (dp, dq) = edge_endpoints(t, kd);
    let dw = w.directional((dq - dp).normalized());
    let area_term = -(l[kd] * l[k]) / (2.0 * area) * rule.integrate(t, |x, y| dw.eval(x, y));

    let (sp, sq) = edge_endpoints(t, ks);
    let edge_term = (l[k] / l[ks]) * gl.integrate_line(sp, sq, |x, y| w.eval(x, y));

    let rhs = area_term + edge_term;
    let scale = fmath::abs(lhs)
        .max(fmath::abs(area_term))
        .max(fmath::abs(edge_term));
    TransferCheck { lhs, rhs, residual: fmath::abs(lhs - rhs), scale }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;

    fn tri(ax: f64, ay: f64, bx: f64, by: f64, cx: f64, cy: f64) -> Triangle {
        Triangle::new(
            Point2::new(ax, ay),
            Point2::new(bx, by),
            Point2::new(cx, cy),
        )
        .unwrap()
    }

    fn reference() -> Triangle {
        tri(0.0, 0.0, 1.0, 0.0, 1.0, 1.0)
    }

    #[test]
    fn normals_of_reference_triangle() {
        assert!(verify_normal_identity(&reference()) <= 1e-15);
        // spot-check the gradient form directly: the bottom edge V1V2 has
        // outward normal (0, -1) = -2 |T| grad(phi_3) / l_12
        let g = shape_gradients(&reference());
        let n3 = g[2] * (-2.0 * 0.5 / 1.0);
        assert_eq!((n3.x, n3.y), (0.0, -1.0));
    }

    #[test]
    fn normals_of_equilateral_and_generic_triangles() {
        let h = 3.0f64.sqrt() / 2.0;
        assert!(verify_normal_identity(&tri(0.0, 0.0, 1.0, 0.0, 0.5, h)) <= 1e-15);
        assert!(verify_normal_identity(&tri(0.3, -0.2, 2.1, 0.4, 0.9, 1.7)) <= 1e-15);
    }

    #[test]
    fn normal_identity_is_scale_invariant() {
        // |T| grows by s^2, gradients shrink by s, lengths grow by s
        let base = tri(0.3, -0.2, 2.1, 0.4, 0.9, 1.7);
        let scaled = tri(3.0, -2.0, 21.0, 4.0, 9.0, 17.0);
        assert!(verify_normal_identity(&base) <= 1e-15);
        assert!(verify_normal_identity(&scaled) <= 1e-15);
    }

    #[test]
    fn transfer_of_constant_field() {
        // w = 1: the derivative term drops and the identity reduces to
        // l_k = (l_k / l_ks) * l_ks
        let w = Poly2::constant(1.0);
        for t in [reference(), tri(0.3, -0.2, 2.1, 0.4, 0.9, 1.7)] {
            for k in 0..3 {
                let c = verify_edge_transfer(&t, &w, k);
                assert!(c.residual <= 1e-15 * c.scale.max(1.0), "k = {k}");
            }
        }
    }

    #[test]
    fn transfer_of_x_on_reference_in_closed_form() {
        // identity 2 (left-hand edge V1V2): lhs = 1/2; D along V2->V3 is
        // d/dy, so the area term vanishes and the transferred edge integral
        // carries everything
        let w = Poly2::new([(1, 0, 1.0)]);
        let c = verify_edge_transfer(&reference(), &w, 2);
        assert!((c.lhs - 0.5).abs() <= 1e-14);
        assert!(c.residual <= 1e-14);
    }

    #[test]
    fn transfer_of_y_on_reference_balances_terms() {
        // identity 2 with w = y: lhs = 0 while the area term (-1/2) and the
        // transferred integral (+1/2) cancel
        let w = Poly2::new([(0, 1, 1.0)]);
        let c = verify_edge_transfer(&reference(), &w, 2);
        assert!(c.lhs.abs() <= 1e-15);
        assert!((c.rhs).abs() <= 1e-14);
        assert!(c.scale >= 0.5 - 1e-14);
    }

    #[test]
    fn transfer_of_quartic_on_generic_triangles() {
        let w = Poly2::new([
            (4, 0, 0.7),
            (3, 1, -1.2),
            (2, 2, 0.5),
            (0, 4, 1.1),
            (2, 0, -0.4),
            (1, 1, 2.0),
            (0, 0, 0.6),
        ]);
        for t in [
            reference(),
            tri(0.3, -0.2, 2.1, 0.4, 0.9, 1.7),
            tri(-1.0, -1.0, 4.0, 0.5, 0.0, 3.0),
        ] {
            for k in 0..3 {
                let c = verify_edge_transfer(&t, &w, k);
                assert!(
                    c.residual <= 1e-12 * c.scale.max(1.0),
                    "k = {k}, residual {:e}, scale {:e}",
                    c.residual,
                    c.scale
                );
            }
        }
    }

    #[test]
    fn tangential_derivatives_telescope() {
        // sum over edges of l_k * integral_T D_k w = 0: the weighted
        // tangents add up to the closed edge loop
        let w = Poly2::new([(3, 0, 1.0), (1, 2, -2.0), (0, 1, 0.5)]);
        let rule = QuadratureRule::with_degree(6).unwrap();
        for t in [reference(), tri(0.3, -0.2, 2.1, 0.4, 0.9, 1.7)] {
            let l = edge_lengths(&t);
            let mut sum = 0.0;
            let mut scale = 0.0f64;
            for k in 0..3 {
                let (p, q) = edge_endpoints(&t, k);
                let dw = w.directional((q - p).normalized());
                let term = l[k] * rule.integrate(&t, |x, y| dw.eval(x, y));
                sum += term;
                scale = scale.max(term.abs());
            }
            assert!(sum.abs() <= 1e-13 * scale.max(1.0));
        }
    }

    #[test]
    fn weighted_tangents_close_pointwise() {
        let t = tri(0.3, -0.2, 2.1, 0.4, 0.9, 1.7);
        let l = edge_lengths(&t);
        let mut sum = Vec2::ZERO;
        for k in 0..3 {
            let (p, q) = edge_endpoints(&t, k);
            sum += (q - p).normalized() * l[k];
        }
        assert!(sum.norm() <= 1e-14);
    }
}
