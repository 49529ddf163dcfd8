//! P1 element matrices, global assembly, Dirichlet elimination, solve.

use alloc::vec::Vec;

use crate::geometry::Triangle;
use crate::mesh::StructuredMesh;
use crate::quadrature::QuadratureRule;
use crate::sparse::{CgOptions, CsrMatrix, SolveError, solve_cg};
use crate::tensor::SpdTensor2;

/// Element stiffness K_ij = |T| (A grad phi_j) . grad phi_i. Gradients are
/// constant on the element, so this is exact; no quadrature enters. The
/// matrix is filled symmetrically (upper triangle mirrored), has zero row
/// sums, and is positive semidefinite with the constants as kernel.
pub fn element_stiffness(a: &SpdTensor2, t: &Triangle) -> [[f64; 3]; 3] {
    let g = crate::geometry::shape_gradients(t);
    let area = t.area();
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = area * a.apply(g[j]).dot(g[i]);
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    k
}

/// Element load b_i = integral of f phi_i over T, by the given rule. The
/// shape function value at a quadrature point is its barycentric coordinate.
pub fn element_load(
    f: &mut impl FnMut(f64, f64) -> f64,
    t: &Triangle,
    rule: &QuadratureRule,
) -> [f64; 3] {
    let area = t.area();
    let mut b = [0.0; 3];
    for (bary, w) in rule.points().iter().zip(rule.weights()) {
        let p = t.point_at(*bary);
        let fv = w * f(p.x, p.y);
        b[0] += fv * bary[0];
        b[1] += fv * bary[1];
        b[2] += fv * bary[2];
    }
    [b[0] * area, b[1] * area, b[2] * area]
}

/// The assembled global system before boundary conditions: singular with
/// the constant vector in its kernel, symmetric bitwise.
#[derive(Clone, Debug)]
pub struct SparseSpdSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
}

/// Assembles stiffness and load over all elements in index order.
pub fn assemble(
    mesh: &StructuredMesh,
    a: &SpdTensor2,
    f: &mut impl FnMut(f64, f64) -> f64,
    rule: &QuadratureRule,
) -> SparseSpdSystem {
    let dim = mesh.node_count();
    let mut triplets = Vec::with_capacity(9 * mesh.triangle_count());
    let mut rhs = alloc::vec![0.0; dim];
    for k in 0..mesh.triangle_count() {
        let t = mesh.triangle(k);
        let nodes = mesh.triangle_nodes(k);
        let ke = element_stiffness(a, &t);
        let be = element_load(f, &t, rule);
        for i in 0..3 {
            rhs[nodes[i]] += be[i];
            for j in 0..3 {
                triplets.push((nodes[i], nodes[j], ke[i][j]));
            }
        }
    }
    SparseSpdSystem { matrix: CsrMatrix::from_triplets(dim, triplets), rhs }
}

/// The reduced (interior-only) system after symmetric elimination of the
/// Dirichlet nodes, plus everything needed to scatter a solution back.
#[derive(Clone, Debug)]
pub struct DirichletSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// Global indices of the interior unknowns, ascending.
    pub interior: Vec<usize>,
    /// Full-length vector holding g at boundary nodes, zero elsewhere.
    pub boundary_values: Vec<f64>,
    pub full_dim: usize,
}

/// Eliminates boundary nodes: keeps interior rows/columns and moves the
/// known boundary values to the right-hand side. The prescribed values are
/// g evaluated at the boundary node positions (the nodal interpolant of g).
pub fn apply_dirichlet(
    sys: &SparseSpdSystem,
    mesh: &StructuredMesh,
    g: &mut impl FnMut(f64, f64) -> f64,
) -> DirichletSystem {
    let full_dim = mesh.node_count();
    debug_assert_eq!(sys.matrix.dim(), full_dim);
    let mut boundary_values = alloc::vec![0.0; full_dim];
    let mut reduced_index = alloc::vec![usize::MAX; full_dim];
    let mut interior = Vec::new();
    for idx in 0..full_dim {
        if mesh.is_boundary(idx) {
            let p = mesh.node(idx);
            boundary_values[idx] = g(p.x, p.y);
        } else {
            reduced_index[idx] = interior.len();
            interior.push(idx);
        }
    }
    let m = interior.len();
    let mut triplets = Vec::new();
    let mut rhs = Vec::with_capacity(m);
    for (r, &gi) in interior.iter().enumerate() {
        let mut b = sys.rhs[gi];
        let (cols, vals) = sys.matrix.row(gi);
        for (&c, &v) in cols.iter().zip(vals) {
            if reduced_index[c] != usize::MAX {
                triplets.push((r, reduced_index[c], v));
            } else {
                b -= v * boundary_values[c];
            }
        }
        rhs.push(b);
    }
    DirichletSystem {
        matrix: CsrMatrix::from_triplets(m, triplets),
        rhs,
        interior,
        boundary_values,
        full_dim,
    }
}

/// Nodal coefficient vector of a finite element solution; boundary entries
/// hold the prescribed data exactly as evaluated.
#[derive(Clone, Debug)]
pub struct FemSolution {
    pub nodal_values: Vec<f64>,
}

/// Solves the reduced system by preconditioned conjugate gradients and
/// scatters interior values and boundary data into one nodal vector.
pub fn solve(sys: &DirichletSystem, opts: &CgOptions) -> Result<FemSolution, SolveError> {
    let interior_values = solve_cg(&sys.matrix, &sys.rhs, opts)?;
    let mut nodal_values = sys.boundary_values.clone();
    for (r, &gi) in sys.interior.iter().enumerate() {
        nodal_values[gi] = interior_values[r];
    }
    Ok(FemSolution { nodal_values })
}

/// The whole pipeline for one mesh: assemble, eliminate, solve.
pub fn solve_dirichlet(
    mesh: &StructuredMesh,
    a: &SpdTensor2,
    f: &mut impl FnMut(f64, f64) -> f64,
    g: &mut impl FnMut(f64, f64) -> f64,
    rule: &QuadratureRule,
    opts: &CgOptions,
) -> Result<FemSolution, SolveError> {
    let sys = assemble(mesh, a, f, rule);
    let reduced = apply_dirichlet(&sys, mesh, g);
    solve(&reduced, opts)
}
