//! Calibration between the coefficient tensor and the mesh geometry.
//!
//! A triangle T is A-equilateral when the three shape function energies
//! (A grad phi_i, grad phi_i)_T agree; their common pointwise value is
//! called alpha. The correspondence is constructive in both directions.
//! With S = [V2 - V1 | V3 - V2] the factor matrix of the triangle,
//!
//!   A = S * Ahat_alpha * S^T,     Ahat_alpha = alpha * [1, 1/2; 1/2, 1],
//!
//! and conversely S = (1/sqrt(alpha)) * L * R^{-1} with L the lower Cholesky
//! factor of A and R the (fixed) lower Cholesky factor of Ahat_1. Any
//! orthogonal right factor would do as well; this module pins that gauge to
//! the identity so the map is deterministic.

use alloc::vec::Vec;

use crate::fmath;
use crate::geometry::{Point2, Triangle, Vec2, shape_gradients};
use crate::mesh::{MeshError, StructuredMesh};

/// Certification tolerance for internally generated geometry, where the
/// energies agree to rounding error.
pub const CERT_TOL_STRICT: f64 = 1e-9;

/// Certification tolerance for geometry quoted to a few decimals (published
/// vertex tables); the energy spread is then limited by the quoting, not by
/// the construction.
pub const CERT_TOL_QUOTED: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TensorError {
    #[error("tensor [{a11}, {a12}; {a12}, {a22}] is not symmetric positive definite")]
    NotSpd { a11: f64, a12: f64, a22: f64 },
    #[error("alpha must be positive and finite, got {0}")]
    BadAlpha(f64),
}

/// A constant symmetric positive definite 2x2 tensor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpdTensor2 {
    a11: f64,
    a12: f64,
    a22: f64,
}

impl SpdTensor2 {
    pub fn new(a11: f64, a12: f64, a22: f64) -> Result<Self, TensorError> {
        let det = a11 * a22 - a12 * a12;
        if !(a11.is_finite() && a12.is_finite() && a22.is_finite() && a11 > 0.0 && det > 0.0) {
            return Err(TensorError::NotSpd { a11, a12, a22 });
        }
        Ok(Self { a11, a12, a22 })
    }

    pub fn identity() -> Self {
        Self { a11: 1.0, a12: 0.0, a22: 1.0 }
    }

    /// Ahat_alpha, the tensor for which the lattice reference triangle
    /// ((0,0), (1,0), (1,1)) is equilateral with pointwise energy alpha.
    pub fn reference_equilateral(alpha: f64) -> Result<Self, TensorError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(TensorError::BadAlpha(alpha));
        }
        Ok(Self { a11: alpha, a12: 0.5 * alpha, a22: alpha })
    }

    pub fn a11(&self) -> f64 {
        self.a11
    }

    pub fn a12(&self) -> f64 {
        self.a12
    }

    pub fn a22(&self) -> f64 {
        self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    /// A v
    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.a11 * v.x + self.a12 * v.y, self.a12 * v.x + self.a22 * v.y)
    }

    /// v . A v
    pub fn energy(&self, v: Vec2) -> f64 {
        self.apply(v).dot(v)
    }

    /// Lower Cholesky factor L with L L^T = A; exists since A is SPD.
    pub fn cholesky(&self) -> FactorMatrix {
        let l11 = fmath::sqrt(self.a11);
        let l21 = self.a12 / l11;
        let l22 = fmath::sqrt(self.a22 - l21 * l21);
        FactorMatrix { s11: l11, s12: 0.0, s21: l21, s22: l22 }
    }
}

/// Per-triangle equal-energy report.
#[derive(Clone, Copy, Debug)]
pub struct EquilateralCertificate {
    /// Pointwise energies (A grad phi_i) . grad phi_i, i = 1, 2, 3.
    pub energies: [f64; 3],
    /// The same, integrated over the element: |T| times the pointwise value.
    pub integrated: [f64; 3],
    /// Mean pointwise energy.
    pub alpha: f64,
    /// max_i |energies_i - alpha| / alpha.
    pub max_relative_spread: f64,
    pub certified: bool,
}

/// Energies of the three shape functions of `t` under `a`, certified against
/// the given relative tolerance.
pub fn edge_energies(a: &SpdTensor2, t: &Triangle, tol: f64) -> EquilateralCertificate {
    let g = shape_gradients(t);
    let energies = [a.energy(g[0]), a.energy(g[1]), a.energy(g[2])];
    let area = t.area();
    let integrated = [area * energies[0], area * energies[1], area * energies[2]];
    let alpha = (energies[0] + energies[1] + energies[2]) / 3.0;
    let max_relative_spread = energies
        .iter()
        .map(|e| fmath::abs(e - alpha) / alpha)
        .fold(0.0f64, f64::max);
    EquilateralCertificate {
        energies,
        integrated,
        alpha,
        max_relative_spread,
        certified: max_relative_spread <= tol,
    }
}

/// Whole-mesh certificate: every triangle A-equilateral, with one alpha
/// shared across the mesh.
#[derive(Clone, Copy, Debug)]
pub struct MeshCertificate {
    /// Mean pointwise energy over all triangles.
    pub alpha: f64,
    /// Worst relative deviation of any single energy from the shared alpha.
    pub max_relative_spread: f64,
    /// Triangle index realizing the worst deviation.
    pub worst_triangle: usize,
    pub triangle_count: usize,
    pub certified: bool,
}

/// Certifies that the mesh is uniformly A-equilateral: all 6n^2 energies
/// agree with a single alpha to the given relative tolerance. Pointwise
/// convention: alpha scales with n^2 as the mesh is refined.
pub fn certify_mesh(a: &SpdTensor2, mesh: &StructuredMesh, tol: f64) -> MeshCertificate {
    let count = mesh.triangle_count();
    let mut energies: Vec<[f64; 3]> = Vec::with_capacity(count);
    let mut sum = 0.0;
    for t in mesh.triangles() {
        let g = shape_gradients(&t);
        let e = [a.energy(g[0]), a.energy(g[1]), a.energy(g[2])];
        sum += e[0] + e[1] + e[2];
        energies.push(e);
    }
    let alpha = sum / (3.0 * count as f64);
    let mut worst = 0.0f64;
    let mut worst_triangle = 0;
    for (k, e) in energies.iter().enumerate() {
        for v in e {
            let dev = fmath::abs(v - alpha) / alpha;
            if dev > worst {
                worst = dev;
                worst_triangle = k;
            }
        }
    }
    MeshCertificate {
        alpha,
        max_relative_spread: worst,
        worst_triangle,
        triangle_count: count,
        certified: worst <= tol,
    }
}

/// The 2x2 matrix S = [c1 | c2] carrying a triangle's edge vectors
/// c1 = V2 - V1 and c2 = V3 - V2 as columns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorMatrix {
    pub s11: f64,
    pub s12: f64,
    pub s21: f64,
    pub s22: f64,
}

impl FactorMatrix {
    pub fn from_triangle(t: &Triangle) -> Self {
        let [v1, v2, v3] = t.vertices();
        let c1 = v2 - v1;
        let c2 = v3 - v2;
        Self { s11: c1.x, s12: c2.x, s21: c1.y, s22: c2.y }
    }

    pub fn col1(&self) -> Vec2 {
        Vec2::new(self.s11, self.s21)
    }

    pub fn col2(&self) -> Vec2 {
        Vec2::new(self.s12, self.s22)
    }

    pub fn det(&self) -> f64 {
        self.s11 * self.s22 - self.s12 * self.s21
    }

    /// The triangle ((0,0), c1, c1 + c2) anchored at the origin. Fails when
    /// det S <= 0 (the columns would describe a clockwise triangle).
    pub fn triangle(&self) -> Result<Triangle, MeshError> {
        let v1 = Point2::new(0.0, 0.0);
        let v2 = v1 + self.col1();
        let v3 = v2 + self.col2();
        Triangle::new(v1, v2, v3)
    }

    /// S * M (matrix product).
    pub fn mul(&self, m: &FactorMatrix) -> FactorMatrix {
        FactorMatrix {
            s11: self.s11 * m.s11 + self.s12 * m.s21,
            s12: self.s11 * m.s12 + self.s12 * m.s22,
            s21: self.s21 * m.s11 + self.s22 * m.s21,
            s22: self.s21 * m.s12 + self.s22 * m.s22,
        }
    }

    /// S * St for an integer lattice transform St (row-major).
    pub fn apply_transform(&self, st: &[[i32; 2]; 2]) -> FactorMatrix {
        self.mul(&FactorMatrix {
            s11: st[0][0] as f64,
            s12: st[0][1] as f64,
            s21: st[1][0] as f64,
            s22: st[1][1] as f64,
        })
    }
}

/// The tensor for which `t` is equilateral with pointwise energy `alpha`:
/// A = S * Ahat_alpha * S^T.
pub fn tensor_from_triangle(t: &Triangle, alpha: f64) -> Result<SpdTensor2, TensorError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(TensorError::BadAlpha(alpha));
    }
    let s = FactorMatrix::from_triangle(t);
    // S * [1, 1/2; 1/2, 1] * S^T, scaled by alpha
    let b11 = s.s11 + 0.5 * s.s12;
    let b12 = 0.5 * s.s11 + s.s12;
    let b21 = s.s21 + 0.5 * s.s22;
    let b22 = 0.5 * s.s21 + s.s22;
    SpdTensor2::new(
        alpha * (b11 * s.s11 + b12 * s.s12),
        alpha * (b11 * s.s21 + b12 * s.s22),
        alpha * (b21 * s.s21 + b22 * s.s22),
    )
}

/// The factor matrix of a triangle that is A-equilateral with energy
/// `alpha`: S = (1/sqrt(alpha)) * L * R^{-1}, Cholesky gauge. The triangle
/// itself is `result.triangle()`; its det is sqrt(det A / det Ahat_alpha),
/// always positive.
pub fn triangle_from_tensor(a: &SpdTensor2, alpha: f64) -> Result<FactorMatrix, TensorError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(TensorError::BadAlpha(alpha));
    }
    let l = a.cholesky();
    // R = chol(Ahat_1) = [1, 0; 1/2, sqrt(3)/2], inverted in closed form.
    let sqrt3 = fmath::sqrt(3.0);
    let r_inv = FactorMatrix {
        s11: 1.0,
        s12: 0.0,
        s21: -1.0 / sqrt3,
        s22: 2.0 / sqrt3,
    };
    let s = l.mul(&r_inv);
    let scale = 1.0 / fmath::sqrt(alpha);
    Ok(FactorMatrix {
        s11: scale * s.s11,
        s12: scale * s.s12,
        s21: scale * s.s21,
        s22: scale * s.s22,
    })
}

/// Four integer lattice transforms St with St * Ahat_1 * St^T = Ahat_1:
/// right-multiplying a factor matrix by any of them yields another triangle
/// that is A-equilateral with the same alpha. (det St)^2 = 1 for all four.
///
/// These are the symmetric members of the full integer symmetry set of
/// Ahat_1, which has twelve elements (the hexagonal point group in lattice
/// coordinates; see the calibration tests). The four returned here are
/// closed under products and keep the anchor vertex in the same corner role
/// of the two cell shapes, which is what the mesh construction uses.
pub fn compatible_transforms() -> [[[i32; 2]; 2]; 4] {
    [
        [[1, 0], [0, 1]],
        [[-1, 0], [0, -1]],
        [[0, 1], [1, 0]],
        [[0, -1], [-1, 0]],
    ]
}

/// Rigid translation; the certificate of the shifted triangle agrees with
/// the original up to the rounding of the shifted vertices (exactly, when
/// vertices and shift are exactly representable sums).
pub fn translate_triangle(t: &Triangle, shift: Vec2) -> Triangle {
    let [v1, v2, v3] = t.vertices();
    Triangle::new_unchecked(v1 + shift, v2 + shift, v3 + shift)
}
