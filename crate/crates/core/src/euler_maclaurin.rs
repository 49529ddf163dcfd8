//! One-term Euler-MacLaurin decomposition of a 1D integral.
//!
//! For f in H^4 on [a, b],
//!
//!   integral f = (b-a)(f(a)+f(b))/2  -  (b-a)^2/12 integral f''
//!                + ((b-a)/2)^4 integral G f'''',
//!
//! with the nonnegative weight G(x) = (1/24)((2/(b-a))^2 (x - mid)^2 - 1)^2.
//! The decomposition is exact; evaluating it numerically requires the
//! integrals of f'' and G f'''', which are taken by a caller-supplied
//! high-order reference rule. The same rule provides the independent value
//! of integral f that the residual is measured against.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::quadrature::GaussLegendre;

/// A nonempty bounded interval [a, b], a < b.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    /// `None` unless both endpoints are finite and a < b.
    pub fn new(a: f64, b: f64) -> Option<Self> {
        (a.is_finite() && b.is_finite() && a < b).then_some(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }
}

type Scalar1 = dyn Fn(f64) -> f64 + Send + Sync;

/// A function carrying its own second and fourth derivatives.
pub struct SmoothFunction1D {
    value: Box<Scalar1>,
    d2: Box<Scalar1>,
    d4: Box<Scalar1>,
}

impl SmoothFunction1D {
    pub fn new(value: Box<Scalar1>, d2: Box<Scalar1>, d4: Box<Scalar1>) -> Self {
        Self { value, d2, d4 }
    }

    /// Polynomial sum c[k] x^k; the derivatives fall out of the
    /// coefficients exactly.
    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        let c0: Vec<f64> = coeffs.into();
        let c2 = differentiate(&differentiate(&c0));
        let c4 = differentiate(&differentiate(&c2));
        Self {
            value: Box::new(move |x| horner(&c0, x)),
            d2: Box::new(move |x| horner(&c2, x)),
            d4: Box::new(move |x| horner(&c4, x)),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    pub fn d2(&self, x: f64) -> f64 {
        (self.d2)(x)
    }

    pub fn d4(&self, x: f64) -> f64 {
        (self.d4)(x)
    }
}

fn differentiate(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * c)
        .collect()
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// The remainder weight G. Vanishes at the endpoints, peaks at 1/24 at the
/// midpoint, and is nonnegative, so the remainder inherits the sign of
/// f'''' when that sign is uniform.
pub fn em_weight(x: f64, iv: Interval) -> f64 {
    let t = 2.0 / iv.length() * (x - iv.midpoint());
    let q = t * t - 1.0;
    q * q / 24.0
}

/// The three terms of the decomposition, their sum, and the residual
/// against the reference value of the integral.
#[derive(Clone, Copy, Debug)]
pub struct EmDecomposition {
    /// (b-a)(f(a)+f(b))/2: the integral of the endpoint interpolant.
    pub trapezoid: f64,
    /// -(b-a)^2/12 times the integral of f''.
    pub correction: f64,
    /// ((b-a)/2)^4 times the integral of G f''''.
    pub remainder: f64,
    /// trapezoid + correction + remainder.
    pub total: f64,
    /// Integral of f by the reference rule.
    pub reference: f64,
    /// |total - reference|.
    pub residual: f64,
}

pub fn em_decompose(f: &SmoothFunction1D, iv: Interval, oracle: &GaussLegendre) -> EmDecomposition {
    let (a, b) = (iv.a(), iv.b());
    let len = iv.length();
    let trapezoid = 0.5 * len * (f.value(a) + f.value(b));
    let correction = -(len * len) / 12.0 * oracle.integrate(a, b, |x| f.d2(x));
    let half = 0.5 * len;
    let remainder =
        half * half * half * half * oracle.integrate(a, b, |x| em_weight(x, iv) * f.d4(x));
    let total = trapezoid + correction + remainder;
    let reference = oracle.integrate(a, b, |x| f.value(x));
    EmDecomposition {
        trapezoid,
        correction,
        remainder,
        total,
        reference,
        residual: crate::fmath::abs(total - reference),
    }
}
