//! Bivariate polynomials with exact coefficient arithmetic for the
//! derivative operators. Degrees stay small (at most eight after affine
//! substitution), so a sparse term list is plenty.

use alloc::vec::Vec;

use crate::fmath;
use crate::geometry::Vec2;

/// One term c * x^px * y^py.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub px: u32,
    pub py: u32,
    pub c: f64,
}

/// Polynomial in two variables, stored as combined terms sorted by
/// (px, py). Zero coefficients are dropped, so the representation is
/// canonical and comparisons are meaningful.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2 {
    terms: Vec<Term>,
}

impl Poly2 {
    pub fn new(terms: impl IntoIterator<Item = (u32, u32, f64)>) -> Self {
        let raw: Vec<Term> = terms
            .into_iter()
            .map(|(px, py, c)| Term { px, py, c })
            .collect();
        Self::combine(raw)
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new([(0, 0, c)])
    }

    fn combine(mut raw: Vec<Term>) -> Self {
        raw.sort_by_key(|t| (t.px, t.py));
        let mut terms: Vec<Term> = Vec::with_capacity(raw.len());
        for t in raw {
            match terms.last_mut() {
                Some(last) if last.px == t.px && last.py == t.py => last.c += t.c,
                _ => terms.push(t),
            }
        }
        terms.retain(|t| t.c != 0.0);
        Self { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.px + t.py).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.c * fmath::powi(x, t.px) * fmath::powi(y, t.py))
            .sum()
    }

    pub fn dx(&self) -> Poly2 {
        Self::combine(
            self.terms
                .iter()
                .filter(|t| t.px > 0)
                .map(|t| Term { px: t.px - 1, py: t.py, c: t.c * t.px as f64 })
                .collect(),
        )
    }

    pub fn dy(&self) -> Poly2 {
        Self::combine(
            self.terms
                .iter()
                .filter(|t| t.py > 0)
                .map(|t| Term { px: t.px, py: t.py - 1, c: t.c * t.py as f64 })
                .collect(),
        )
    }

    /// Directional derivative d . grad, with exact coefficients.
    pub fn directional(&self, d: Vec2) -> Poly2 {
        self.dx().scale(d.x).add(&self.dy().scale(d.y))
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut raw = self.terms.clone();
        raw.extend_from_slice(&other.terms);
        Self::combine(raw)
    }

    pub fn scale(&self, s: f64) -> Poly2 {
        Self::combine(
            self.terms
                .iter()
                .map(|t| Term { c: t.c * s, ..*t })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                raw.push(Term { px: a.px + b.px, py: a.py + b.py, c: a.c * b.c });
            }
        }
        Self::combine(raw)
    }

    /// Substitutes x = j[0][0] X + j[0][1] Y + t.x, y = j[1][0] X +
    /// j[1][1] Y + t.y. Exact up to rounding; used to pull integrals back to
    /// reference domains.
    pub fn compose_affine(&self, j: [[f64; 2]; 2], t: Vec2) -> Poly2 {
        let lx = Poly2::new([(1, 0, j[0][0]), (0, 1, j[0][1]), (0, 0, t.x)]);
        let ly = Poly2::new([(1, 0, j[1][0]), (0, 1, j[1][1]), (0, 0, t.y)]);
        let mut acc = Poly2::zero();
        for term in &self.terms {
            let p = lx.pow(term.px).mul(&ly.pow(term.py)).scale(term.c);
            acc = acc.add(&p);
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Poly2 {
        let mut acc = Poly2::constant(1.0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_drops_zeros_and_merges() {
        let p = Poly2::new([(1, 0, 2.0), (1, 0, 3.0), (0, 0, 0.0)]);
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0], Term { px: 1, py: 0, c: 5.0 });
    }

    #[test]
    fn eval_and_derivatives() {
        // w = x^2 y + 3 y^2
        let w = Poly2::new([(2, 1, 1.0), (0, 2, 3.0)]);
        assert_eq!(w.eval(2.0, 1.5), 4.0 * 1.5 + 3.0 * 2.25);
        assert_eq!(w.dx(), Poly2::new([(1, 1, 2.0)]));
        assert_eq!(w.dy(), Poly2::new([(2, 0, 1.0), (0, 1, 6.0)]));
        let d = w.directional(Vec2::new(0.5, -1.0));
        assert_eq!(d.eval(1.0, 1.0), 0.5 * 2.0 - (1.0 + 6.0));
    }

    #[test]
    fn affine_composition_matches_pointwise() {
        let w = Poly2::new([(3, 0, 1.0), (1, 2, -2.0), (0, 1, 0.5)]);
        let j = [[0.3, -1.1], [0.7, 0.4]];
        let t = Vec2::new(0.2, -0.9);
        let c = w.compose_affine(j, t);
        for &(u, v) in &[(0.0, 0.0), (1.0, 0.5), (-0.7, 1.3), (2.0, -1.0)] {
            let x = j[0][0] * u + j[0][1] * v + t.x;
            let y = j[1][0] * u + j[1][1] * v + t.y;
            let direct = w.eval(x, y);
            let composed = c.eval(u, v);
            assert!((direct - composed).abs() <= 1e-12 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn pow_and_mul() {
        let x = Poly2::new([(1, 0, 1.0)]);
        assert_eq!(x.pow(3).eval(2.0, 0.0), 8.0);
        let p = x.mul(&Poly2::new([(0, 1, 1.0)]));
        assert_eq!(p, Poly2::new([(1, 1, 1.0)]));
    }
}
