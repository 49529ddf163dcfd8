//! Solver kernels for the Dirichlet problem -div(A grad u) = f with a
//! constant symmetric positive definite coefficient tensor A, discretized
//! with piecewise linear elements on structured parallelogram meshes.
//!
//! The point of the crate is not the solver itself but the mesh calibration
//! around it: a triangle is called A-equilateral when the three shape
//! function energies (A grad phi_i, grad phi_i) agree, and a uniform mesh of
//! such triangles makes the finite element solution agree with the nodal
//! interpolant of the exact solution to fourth order in the mesh parameter.
//! The crate builds and certifies such meshes ([`mesh`], [`tensor`]),
//! assembles and solves the resulting linear systems ([`fem`], [`sparse`]),
//! measures interpolant/solution gaps across mesh refinements ([`study`]),
//! and numerically verifies the one dimensional quadrature identities the
//! construction rests on ([`euler_maclaurin`], [`identities`]).
//!
//! The crate is `no_std` (with `alloc`); everything that touches files,
//! terminals, or configuration lives in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod euler_maclaurin;
pub mod fem;
pub mod geometry;
pub mod identities;
pub mod manufactured;
pub mod mesh;
pub mod poly;
pub mod quadrature;
pub mod sparse;
pub mod study;
pub mod tensor;

mod fmath;

pub use geometry::{Point2, Triangle, Vec2, edge_lengths, shape_gradients, signed_area};
pub use mesh::{MeshError, Parallelogram, StructuredMesh, total_area};
pub use tensor::{
    CERT_TOL_QUOTED, CERT_TOL_STRICT, EquilateralCertificate, FactorMatrix, MeshCertificate,
    SpdTensor2, TensorError, certify_mesh, compatible_transforms, edge_energies,
    tensor_from_triangle, translate_triangle, triangle_from_tensor,
};
pub use fem::{
    DirichletSystem, FemSolution, SparseSpdSystem, apply_dirichlet, assemble,
    element_load, element_stiffness, solve, solve_dirichlet,
};
pub use manufactured::{ManufacturedSolution, source_term};
pub use poly::{Poly2, Term};
pub use quadrature::{GaussLegendre, QuadratureError, QuadratureRule};
pub use sparse::{CgOptions, CsrMatrix, SolveError};
pub use study::{
    CertMode, CertPolicy, ConvergenceRow, ConvergenceTable, ErrorReport, StudyError,
    StudyOutcome, StudySetup, diff_norms, interpolate, observed_order, run_study,
};
pub use euler_maclaurin::{EmDecomposition, Interval, SmoothFunction1D, em_decompose, em_weight};
pub use identities::{TransferCheck, verify_edge_transfer, verify_normal_identity};
