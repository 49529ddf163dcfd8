//! Manufactured solutions: closed-form u with gradient and Hessian, from
//! which the source f = -div(A grad u) follows for any constant tensor.

use alloc::boxed::Box;
use alloc::string::String;

use crate::fmath;
use crate::geometry::Vec2;
use crate::poly::Poly2;
use crate::tensor::SpdTensor2;

type Scalar2 = dyn Fn(f64, f64) -> f64 + Send + Sync;
type Grad2 = dyn Fn(f64, f64) -> Vec2 + Send + Sync;
type Hess2 = dyn Fn(f64, f64) -> [f64; 3] + Send + Sync;

/// A smooth scalar field with its first two derivative tensors. The Hessian
/// is reported as [u_xx, u_xy, u_yy].
pub struct ManufacturedSolution {
    name: String,
    value: Box<Scalar2>,
    gradient: Box<Grad2>,
    hessian: Box<Hess2>,
}

impl ManufacturedSolution {
    pub fn new(
        name: &str,
        value: Box<Scalar2>,
        gradient: Box<Grad2>,
        hessian: Box<Hess2>,
    ) -> Self {
        Self { name: String::from(name), value, gradient, hessian }
    }

    /// u = sin(x) sin(y)
    pub fn sin_sin() -> Self {
        Self::new(
            "sin_sin",
            Box::new(|x, y| fmath::sin(x) * fmath::sin(y)),
            Box::new(|x, y| {
                Vec2::new(
                    fmath::cos(x) * fmath::sin(y),
                    fmath::sin(x) * fmath::cos(y),
                )
            }),
            Box::new(|x, y| {
                let ss = fmath::sin(x) * fmath::sin(y);
                let cc = fmath::cos(x) * fmath::cos(y);
                [-ss, cc, -ss]
            }),
        )
    }

    /// u = cos(x) cos(y)
    pub fn cos_cos() -> Self {
        Self::new(
            "cos_cos",
            Box::new(|x, y| fmath::cos(x) * fmath::cos(y)),
            Box::new(|x, y| {
                Vec2::new(
                    -fmath::sin(x) * fmath::cos(y),
                    -fmath::cos(x) * fmath::sin(y),
                )
            }),
            Box::new(|x, y| {
                let cc = fmath::cos(x) * fmath::cos(y);
                let ss = fmath::sin(x) * fmath::sin(y);
                [-cc, ss, -cc]
            }),
        )
    }

    /// u = 1/4 + x/2 - 3y/4; the P1 space contains it, so the solver must
    /// reproduce it to solver tolerance (f = 0).
    pub fn linear() -> Self {
        Self::polynomial("linear", Poly2::new([(0, 0, 0.25), (1, 0, 0.5), (0, 1, -0.75)]))
    }

    /// u = x^3 + 2 x^2 y - y^3 + x y. Vanishing fourth derivatives: on a
    /// certified uniform mesh the discrete solution coincides with the
    /// nodal interpolant up to solver tolerance, which makes this the
    /// sharpest cheap probe of the whole pipeline.
    pub fn cubic() -> Self {
        Self::polynomial(
            "cubic",
            Poly2::new([(3, 0, 1.0), (2, 1, 2.0), (0, 3, -1.0), (1, 1, 1.0)]),
        )
    }

    /// Any polynomial, with derivatives taken exactly on coefficients.
    pub fn polynomial(name: &str, p: Poly2) -> Self {
        let px = p.dx();
        let py = p.dy();
        let pxx = px.dx();
        let pxy = px.dy();
        let pyy = py.dy();
        Self::new(
            name,
            Box::new(move |x, y| p.eval(x, y)),
            Box::new(move |x, y| Vec2::new(px.eval(x, y), py.eval(x, y))),
            Box::new(move |x, y| [pxx.eval(x, y), pxy.eval(x, y), pyy.eval(x, y)]),
        )
    }

    /// Registry lookup by name.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "sin_sin" => Some(Self::sin_sin()),
            "cos_cos" => Some(Self::cos_cos()),
            "linear" => Some(Self::linear()),
            "cubic" => Some(Self::cubic()),
            _ => None,
        }
    }

    pub fn registry_names() -> [&'static str; 4] {
        ["sin_sin", "cos_cos", "linear", "cubic"]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        (self.value)(x, y)
    }

    pub fn gradient(&self, x: f64, y: f64) -> Vec2 {
        (self.gradient)(x, y)
    }

    /// [u_xx, u_xy, u_yy]
    pub fn hessian(&self, x: f64, y: f64) -> [f64; 3] {
        (self.hessian)(x, y)
    }
}

/// f = -div(A grad u) = -(a11 u_xx + 2 a12 u_xy + a22 u_yy) for constant A.
pub fn source_term(a: SpdTensor2, u: &ManufacturedSolution) -> impl Fn(f64, f64) -> f64 {
    move |x, y| {
        let [uxx, uxy, uyy] = u.hessian(x, y);
        -(a.a11() * uxx + 2.0 * a.a12() * uxy + a.a22() * uyy)
    }
}
