//! Convergence studies of the gap u_h - u_I between the discrete solution
//! and the nodal interpolant.
//!
//! On a uniformly A-equilateral mesh this gap closes at fourth order in
//! h = 1/n, two orders beyond the interpolation error itself; measuring it
//! is the entire point of the crate. All three norms of the gap are exact
//! up to rounding: the difference is piecewise linear, so its square is
//! piecewise quadratic (edge-midpoint rule), its gradient is piecewise
//! constant, and its maximum sits on a node.

use alloc::vec::Vec;

use crate::fem::{FemSolution, solve_dirichlet};
use crate::fmath;
use crate::geometry::shape_gradients;
use crate::manufactured::{ManufacturedSolution, source_term};
use crate::mesh::{MeshError, Parallelogram, StructuredMesh};
use crate::quadrature::QuadratureRule;
use crate::sparse::{CgOptions, SolveError};
use crate::tensor::{MeshCertificate, SpdTensor2, certify_mesh};

/// Nodal interpolant u_I of a manufactured solution.
pub fn interpolate(mesh: &StructuredMesh, u: &ManufacturedSolution) -> FemSolution {
    let nodal_values = mesh.nodes().iter().map(|p| u.value(p.x, p.y)).collect();
    FemSolution { nodal_values }
}

/// Norms of the P1 function with nodal values a - b on the given mesh.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorReport {
    /// Lattice mesh parameter 1/n.
    pub h: f64,
    /// L2 norm, exact via the edge-midpoint rule.
    pub l2: f64,
    /// H1 seminorm (Euclidean gradient), exact via per-element constants.
    pub h1_semi: f64,
    /// Max nodal deviation; for a piecewise linear function this is the
    /// true sup norm.
    pub linf: f64,
}

pub fn diff_norms(mesh: &StructuredMesh, a: &[f64], b: &[f64]) -> ErrorReport {
    assert_eq!(a.len(), mesh.node_count());
    assert_eq!(b.len(), mesh.node_count());
    let mut l2_sq = 0.0;
    let mut h1_sq = 0.0;
    for k in 0..mesh.triangle_count() {
        let t = mesh.triangle(k);
        let nodes = mesh.triangle_nodes(k);
        let d = [
            a[nodes[0]] - b[nodes[0]],
            a[nodes[1]] - b[nodes[1]],
            a[nodes[2]] - b[nodes[2]],
        ];
        let area = t.area();
        // edge midpoints carry the mean of the endpoint values
        let m01 = 0.5 * (d[0] + d[1]);
        let m12 = 0.5 * (d[1] + d[2]);
        let m20 = 0.5 * (d[2] + d[0]);
        l2_sq += area / 3.0 * (m01 * m01 + m12 * m12 + m20 * m20);
        let g = shape_gradients(&t);
        let grad = g[0] * d[0] + g[1] * d[1] + g[2] * d[2];
        h1_sq += area * grad.dot(grad);
    }
    let linf = a
        .iter()
        .zip(b)
        .map(|(x, y)| fmath::abs(x - y))
        .fold(0.0f64, f64::max);
    ErrorReport {
        h: mesh.lattice_parameter(),
        l2: fmath::sqrt(l2_sq),
        h1_semi: fmath::sqrt(h1_sq),
        linf,
    }
}

/// Observed convergence order between two refinement levels:
/// ln(e_coarse/e_fine) / ln(n_fine/n_coarse). `None` when either error is
/// not positive (the gap has hit rounding noise) or the levels do not refine.
pub fn observed_order(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> Option<f64> {
    if !(e_coarse > 0.0 && e_fine > 0.0 && n_fine > n_coarse) {
        return None;
    }
    Some(fmath::ln(e_coarse / e_fine) / fmath::ln(n_fine as f64 / n_coarse as f64))
}

#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub l2: f64,
    pub l2_order: Option<f64>,
    pub h1_semi: f64,
    pub h1_order: Option<f64>,
    pub linf: f64,
    pub linf_order: Option<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Assembles rows from per-level reports, deriving each order column
    /// from the preceding level.
    pub fn from_errors(entries: &[(usize, ErrorReport)]) -> Self {
        let mut rows = Vec::with_capacity(entries.len());
        for (idx, &(n, e)) in entries.iter().enumerate() {
            let prev = idx.checked_sub(1).map(|i| entries[i]);
            let order = |pick: fn(&ErrorReport) -> f64| {
                prev.and_then(|(pn, pe)| observed_order(pick(&pe), pick(&e), pn, n))
            };
            rows.push(ConvergenceRow {
                n,
                h: e.h,
                l2: e.l2,
                l2_order: order(|e| e.l2),
                h1_semi: e.h1_semi,
                h1_order: order(|e| e.h1_semi),
                linf: e.linf,
                linf_order: order(|e| e.linf),
            });
        }
        Self { rows }
    }
}

/// What to do when a mesh fails the equal-energy certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertMode {
    /// Refuse to solve.
    Strict,
    /// Solve anyway; the certificate is reported in the outcome.
    Warn,
    /// Skip certification entirely.
    Off,
}

#[derive(Clone, Copy, Debug)]
pub struct CertPolicy {
    pub mode: CertMode,
    pub tol: f64,
}

impl CertPolicy {
    pub fn strict(tol: f64) -> Self {
        Self { mode: CertMode::Strict, tol }
    }

    pub fn warn(tol: f64) -> Self {
        Self { mode: CertMode::Warn, tol }
    }

    pub fn off() -> Self {
        Self { mode: CertMode::Off, tol: 0.0 }
    }
}

/// One convergence study: a family of refinements of one domain, one tensor,
/// one manufactured solution.
pub struct StudySetup {
    pub domain: Parallelogram,
    pub tensor: SpdTensor2,
    pub solution: ManufacturedSolution,
    pub n_list: Vec<usize>,
    pub quadrature: QuadratureRule,
    pub solver: CgOptions,
    pub certification: CertPolicy,
}

#[derive(Clone, Debug)]
pub struct StudyOutcome {
    pub table: ConvergenceTable,
    /// Per-level certificates, in n order; empty when certification is off.
    pub certificates: Vec<(usize, MeshCertificate)>,
}

#[derive(Debug, thiserror::Error)]
pub enum StudyError {
    #[error(
        "mesh at n = {n} is not uniformly equilateral for the tensor: relative energy spread \
         {spread:e} exceeds {tol:e}",
        spread = .certificate.max_relative_spread,
        tol = .tol
    )]
    Certification {
        n: usize,
        tol: f64,
        certificate: MeshCertificate,
    },
    #[error("solve failed at n = {n}: {source}")]
    Solve { n: usize, source: SolveError },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Runs the study level by level in the order given; rows and certificates
/// come back in that same order.
pub fn run_study(setup: &StudySetup) -> Result<StudyOutcome, StudyError> {
    let mut entries = Vec::with_capacity(setup.n_list.len());
    let mut certificates = Vec::new();
    for &n in &setup.n_list {
        let mesh = setup.domain.mesh(n)?;
        if setup.certification.mode != CertMode::Off {
            let cert = certify_mesh(&setup.tensor, &mesh, setup.certification.tol);
            if !cert.certified && setup.certification.mode == CertMode::Strict {
                return Err(StudyError::Certification {
                    n,
                    tol: setup.certification.tol,
                    certificate: cert,
                });
            }
            certificates.push((n, cert));
        }
        let mut f = source_term(setup.tensor, &setup.solution);
        let mut g = |x, y| setup.solution.value(x, y);
        let u_h = solve_dirichlet(&mesh, &setup.tensor, &mut f, &mut g, &setup.quadrature, &setup.solver)
            .map_err(|source| StudyError::Solve { n, source })?;
        let u_i = interpolate(&mesh, &setup.solution);
        entries.push((n, diff_norms(&mesh, &u_h.nodal_values, &u_i.nodal_values)));
    }
    Ok(StudyOutcome { table: ConvergenceTable::from_errors(&entries), certificates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point2, Vec2};

    fn unit_square() -> Parallelogram {
        Parallelogram::new(
            Point2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        )
        .unwrap()
    }

    #[test]
    fn observed_order_basics() {
        // e ~ n^-2 halvings
        assert!((observed_order(4.0, 1.0, 2, 4).unwrap() - 2.0).abs() < 1e-15);
        assert!((observed_order(1.0, 1.0 / 16.0, 2, 4).unwrap() - 4.0).abs() < 1e-14);
        // non-dyadic refinement
        let o = observed_order(27.0, 1.0, 1, 3).unwrap();
        assert!((o - 3.0).abs() < 1e-14);
        assert_eq!(observed_order(0.0, 1.0, 2, 4), None);
        assert_eq!(observed_order(1.0, 0.0, 2, 4), None);
        assert_eq!(observed_order(1.0, 0.5, 4, 4), None);
    }

    #[test]
    fn diff_norms_of_linear_field_against_closed_forms() {
        // d = x + y on the unit square: ||d||_0^2 = 7/6, |d|_1^2 = 2,
        // ||d||_inf = 2, independent of the mesh since d is in the P1 space
        for n in [1usize, 3, 4] {
            let mesh = unit_square().mesh(n).unwrap();
            let a: Vec<f64> = mesh.nodes().iter().map(|p| p.x + p.y).collect();
            let b = alloc::vec![0.0; mesh.node_count()];
            let r = diff_norms(&mesh, &a, &b);
            assert!((r.l2 - (7.0f64 / 6.0).sqrt()).abs() <= 1e-14, "n = {n}");
            assert!((r.h1_semi - 2.0f64.sqrt()).abs() <= 1e-14);
            assert_eq!(r.linf, 2.0);
            assert_eq!(r.h, 1.0 / n as f64);
        }
    }

    #[test]
    fn diff_norms_zero_for_equal_vectors() {
        let mesh = unit_square().mesh(3).unwrap();
        let a: Vec<f64> = (0..mesh.node_count()).map(|k| k as f64).collect();
        let r = diff_norms(&mesh, &a, &a);
        assert_eq!((r.l2, r.h1_semi, r.linf), (0.0, 0.0, 0.0));
    }

    #[test]
    fn interpolant_matches_nodal_values() {
        let mesh = unit_square().mesh(4).unwrap();
        let u = ManufacturedSolution::sin_sin();
        let ui = interpolate(&mesh, &u);
        for (k, p) in mesh.nodes().iter().enumerate() {
            assert_eq!(ui.nodal_values[k], p.x.sin() * p.y.sin());
        }
    }

    #[test]
    fn table_order_columns() {
        let entries = [
            (2usize, ErrorReport { h: 0.5, l2: 1.0, h1_semi: 2.0, linf: 4.0 }),
            (4usize, ErrorReport { h: 0.25, l2: 0.25, h1_semi: 0.25, linf: 0.0 }),
        ];
        let t = ConvergenceTable::from_errors(&entries);
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0].l2_order, None);
        assert!((t.rows[1].l2_order.unwrap() - 2.0).abs() < 1e-14);
        assert!((t.rows[1].h1_order.unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(t.rows[1].linf_order, None); // zero fine error
    }

    #[test]
    fn linear_study_is_exact_and_certified() {
        let setup = StudySetup {
            domain: unit_square(),
            tensor: SpdTensor2::new(2.0, 1.0, 2.0).unwrap(),
            solution: ManufacturedSolution::linear(),
            n_list: alloc::vec![2, 4],
            quadrature: QuadratureRule::with_degree(4).unwrap(),
            solver: CgOptions::default(),
            certification: CertPolicy::strict(crate::tensor::CERT_TOL_STRICT),
        };
        let out = run_study(&setup).unwrap();
        assert_eq!(out.table.rows.len(), 2);
        for row in &out.table.rows {
            assert!(row.linf <= 1e-12, "n = {}, linf = {:e}", row.n, row.linf);
        }
        // pointwise alpha scales as 2 n^2 on the unit square for this tensor
        for (n, cert) in &out.certificates {
            assert!(cert.certified);
            let expect = 2.0 * (*n as f64) * (*n as f64);
            assert!((cert.alpha - expect).abs() <= 1e-9 * expect);
        }
    }

    #[test]
    fn strict_certification_rejects_identity_tensor() {
        let setup = StudySetup {
            domain: unit_square(),
            tensor: SpdTensor2::identity(),
            solution: ManufacturedSolution::linear(),
            n_list: alloc::vec![4, 2],
            quadrature: QuadratureRule::with_degree(4).unwrap(),
            solver: CgOptions::default(),
            certification: CertPolicy::strict(crate::tensor::CERT_TOL_STRICT),
        };
        match run_study(&setup) {
            Err(StudyError::Certification { n, certificate, .. }) => {
                assert_eq!(n, 4); // fails on the first level attempted
                assert!(certificate.max_relative_spread > 0.3);
            }
            other => panic!("expected certification failure, got {other:?}"),
        }
    }

    #[test]
    fn warn_mode_solves_anyway() {
        let setup = StudySetup {
            domain: unit_square(),
            tensor: SpdTensor2::identity(),
            solution: ManufacturedSolution::linear(),
            n_list: alloc::vec![3],
            quadrature: QuadratureRule::with_degree(4).unwrap(),
            solver: CgOptions::default(),
            certification: CertPolicy::warn(crate::tensor::CERT_TOL_STRICT),
        };
        let out = run_study(&setup).unwrap();
        assert_eq!(out.certificates.len(), 1);
        assert!(!out.certificates[0].1.certified);
        assert!(out.table.rows[0].linf <= 1e-12); // linear is still exact
    }

    #[test]
    fn off_mode_reports_no_certificates() {
        let setup = StudySetup {
            domain: unit_square(),
            tensor: SpdTensor2::identity(),
            solution: ManufacturedSolution::linear(),
            n_list: alloc::vec![2],
            quadrature: QuadratureRule::with_degree(4).unwrap(),
            solver: CgOptions::default(),
            certification: CertPolicy::off(),
        };
        let out = run_study(&setup).unwrap();
        assert!(out.certificates.is_empty());
    }
}
