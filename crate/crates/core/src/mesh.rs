//! Structured triangulations of parallelograms.
//!
//! The mesh is the n x n lattice refinement of a parallelogram: nodes
//! P(i,j) = origin + i*e_u + j*e_v for 0 <= i,j <= n, each cell split along
//! the lattice diagonal P(i,j) -> P(i+1,j+1). Splitting along the other
//! diagonal would destroy the equal-energy property the meshes exist for,
//! so it is not offered.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::geometry::{DEGENERACY_REL_TOL, Point2, Triangle, Vec2};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MeshError {
    #[error("degenerate element (area {area:e}, edge scale {edge:e})")]
    DegenerateTriangle { area: f64, edge: f64 },
    #[error("clockwise vertex order (signed area {area:e}); vertices must be counterclockwise")]
    ClockwiseTriangle { area: f64 },
    #[error("cell edges must be independent and counterclockwise (det {det:e})")]
    DegenerateCell { det: f64 },
    #[error("subdivision count must be at least 1")]
    ZeroSubdivision,
    #[error(
        "vertices do not close a parallelogram: v4 = {got:?}, v1 + v3 - v2 = {expected:?} \
         (tolerance {tol:e})"
    )]
    NotAParallelogram {
        got: (f64, f64),
        expected: (f64, f64),
        tol: f64,
    },
}

/// Relative tolerance on the fourth vertex of an explicitly given
/// parallelogram: it must equal v1 + v3 - v2 to this fraction of the
/// diameter.
pub const PARALLELOGRAM_CLOSURE_REL_TOL: f64 = 1e-9;

/// A parallelogram described by one corner and the two spanning sides, kept
/// separate from any particular mesh resolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Parallelogram {
    pub origin: Point2,
    pub side_u: Vec2,
    pub side_v: Vec2,
}

impl Parallelogram {
    pub fn new(origin: Point2, side_u: Vec2, side_v: Vec2) -> Result<Self, MeshError> {
        check_cell(side_u, side_v)?;
        Ok(Self { origin, side_u, side_v })
    }

    /// Accepts the four corners in counterclockwise order (v1, v2, v3, v4)
    /// and checks that v4 closes the parallelogram: v4 = v1 + v3 - v2.
    pub fn from_vertices(v: [Point2; 4]) -> Result<Self, MeshError> {
        let side_u = v[1] - v[0];
        let side_v = v[2] - v[1];
        let expected = v[0] + (v[2] - v[1]);
        let diam = diameter(&v);
        let gap = (v[3] - expected).norm();
        if gap > PARALLELOGRAM_CLOSURE_REL_TOL * diam {
            return Err(MeshError::NotAParallelogram {
                got: (v[3].x, v[3].y),
                expected: (expected.x, expected.y),
                tol: PARALLELOGRAM_CLOSURE_REL_TOL,
            });
        }
        Self::new(v[0], side_u, side_v)
    }

    pub fn vertices(&self) -> [Point2; 4] {
        [
            self.origin,
            self.origin + self.side_u,
            self.origin + self.side_u + self.side_v,
            self.origin + self.side_v,
        ]
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.vertices())
    }

    /// The n x n structured refinement of the parallelogram.
    pub fn mesh(&self, n: usize) -> Result<StructuredMesh, MeshError> {
        let nf = n as f64;
        StructuredMesh::build(
            self.origin,
            self.side_u * (1.0 / nf),
            self.side_v * (1.0 / nf),
            n,
        )
    }
}

fn diameter(v: &[Point2]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            d = d.max(v[i].distance(v[j]));
        }
    }
    d
}

fn check_cell(e_u: Vec2, e_v: Vec2) -> Result<(), MeshError> {
    let det = e_u.cross(e_v);
    let scale = e_u.norm().max(e_v.norm());
    if !(det > DEGENERACY_REL_TOL * scale * scale) {
        return Err(MeshError::DegenerateCell { det });
    }
    Ok(())
}

/// Uniform triangulation of a parallelogram.
///
/// Node (i, j) has index j*(n+1) + i (i runs fastest). Cell (i, j) holds two
/// triangles, the lower one (P(i,j), P(i+1,j), P(i+1,j+1)) listed before the
/// upper one (P(i,j), P(i+1,j+1), P(i,j+1)); both are counterclockwise.
#[derive(Clone, Debug)]
pub struct StructuredMesh {
    origin: Point2,
    cell_edge_u: Vec2,
    cell_edge_v: Vec2,
    n: usize,
    nodes: Vec<Point2>,
}

impl StructuredMesh {
    pub fn build(
        origin: Point2,
        cell_edge_u: Vec2,
        cell_edge_v: Vec2,
        n: usize,
    ) -> Result<Self, MeshError> {
        if n == 0 {
            return Err(MeshError::ZeroSubdivision);
        }
        check_cell(cell_edge_u, cell_edge_v)?;
        let mut nodes = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            for i in 0..=n {
                nodes.push(origin + cell_edge_u * (i as f64) + cell_edge_v * (j as f64));
            }
        }
        Ok(Self { origin, cell_edge_u, cell_edge_v, n, nodes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn origin(&self) -> Point2 {
        self.origin
    }

    pub fn cell_edge_u(&self) -> Vec2 {
        self.cell_edge_u
    }

    pub fn cell_edge_v(&self) -> Vec2 {
        self.cell_edge_v
    }

    /// Mesh parameter h = 1/n (lattice convention, independent of the
    /// physical cell size).
    pub fn lattice_parameter(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Physical scale of one cell.
    pub fn cell_scale(&self) -> f64 {
        self.cell_edge_u.norm().max(self.cell_edge_v.norm())
    }

    pub fn node_count(&self) -> usize {
        (self.n + 1) * (self.n + 1)
    }

    pub fn triangle_count(&self) -> usize {
        2 * self.n * self.n
    }

    pub fn node_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.n && j <= self.n);
        j * (self.n + 1) + i
    }

    pub fn node_ij(&self, index: usize) -> (usize, usize) {
        (index % (self.n + 1), index / (self.n + 1))
    }

    pub fn node(&self, index: usize) -> Point2 {
        self.nodes[index]
    }

    pub fn nodes(&self) -> &[Point2] {
        &self.nodes
    }

    /// Global node indices of triangle k, in the element's vertex order.
    pub fn triangle_nodes(&self, k: usize) -> [usize; 3] {
        debug_assert!(k < self.triangle_count());
        let cell = k / 2;
        let i = cell % self.n;
        let j = cell / self.n;
        if k % 2 == 0 {
            [
                self.node_index(i, j),
                self.node_index(i + 1, j),
                self.node_index(i + 1, j + 1),
            ]
        } else {
            [
                self.node_index(i, j),
                self.node_index(i + 1, j + 1),
                self.node_index(i, j + 1),
            ]
        }
    }

    pub fn triangle(&self, k: usize) -> Triangle {
        let [a, b, c] = self.triangle_nodes(k);
        Triangle::new_unchecked(self.nodes[a], self.nodes[b], self.nodes[c])
    }

    pub fn triangles(&self) -> impl Iterator<Item = Triangle> + '_ {
        (0..self.triangle_count()).map(|k| self.triangle(k))
    }

    pub fn is_boundary(&self, index: usize) -> bool {
        let (i, j) = self.node_ij(index);
        i == 0 || j == 0 || i == self.n || j == self.n
    }

    /// Indices of the 4n boundary nodes, in ascending index order.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&k| self.is_boundary(k)).collect()
    }

    /// Moves one node off its lattice position. This deliberately breaks the
    /// uniformity the solver analysis relies on; it exists so that
    /// [`StructuredMesh::is_uniform`] and the certification path can be
    /// exercised against bad meshes.
    pub fn displace_node(&mut self, index: usize, delta: Vec2) {
        self.nodes[index] = self.nodes[index] + delta;
    }

    /// Checks the parallelogram property: for every interior edge, the two
    /// opposite vertices of the adjacent triangles are reflections of each
    /// other through the edge midpoint, within tol times the cell scale.
    pub fn is_uniform(&self, tol: f64) -> bool {
        let scale = self.cell_scale();
        // interior edge -> opposite vertices of the triangles sharing it
        let mut opposite: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for k in 0..self.triangle_count() {
            let nodes = self.triangle_nodes(k);
            for i in 0..3 {
                let a = nodes[(i + 1) % 3];
                let b = nodes[(i + 2) % 3];
                let key = (a.min(b), a.max(b));
                opposite.entry(key).or_default().push(nodes[i]);
            }
        }
        for ((a, b), opp) in &opposite {
            if opp.len() != 2 {
                continue;
            }
            let mid = midpoint(self.nodes[*a], self.nodes[*b]);
            let refl = midpoint(self.nodes[opp[0]], self.nodes[opp[1]]);
            if (refl - mid).norm() > tol * scale {
                return false;
            }
        }
        true
    }

    /// All triangles must be valid; holds by construction but the materialized
    /// node array is what assembly consumes, so offer the explicit check.
    pub fn validate(&self) -> Result<(), MeshError> {
        for k in 0..self.triangle_count() {
            let [a, b, c] = self.triangle_nodes(k);
            Triangle::new(self.nodes[a], self.nodes[b], self.nodes[c])?;
        }
        Ok(())
    }
}

fn midpoint(a: Point2, b: Point2) -> Point2 {
    Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
}

/// Total (unsigned) mesh area; equals n^2 times the cell area.
pub fn total_area(mesh: &StructuredMesh) -> f64 {
    mesh.triangles().map(|t| t.area()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::signed_area;

    fn area_of(mesh: &StructuredMesh, k: usize) -> f64 {
        let [a, b, c] = mesh.triangle_nodes(k);
        signed_area(mesh.node(a), mesh.node(b), mesh.node(c))
    }

    fn unit_square(n: usize) -> StructuredMesh {
        StructuredMesh::build(
            Point2::new(0.0, 0.0),
            Vec2::new(1.0 / n as f64, 0.0),
            Vec2::new(0.0, 1.0 / n as f64),
            n,
        )
        .unwrap()
    }

    #[test]
    fn counts() {
        let m = unit_square(1);
        assert_eq!(m.node_count(), 4);
        assert_eq!(m.triangle_count(), 2);
        let m = unit_square(4);
        assert_eq!(m.node_count(), 25);
        assert_eq!(m.triangle_count(), 32);
        assert_eq!(m.boundary_nodes().len(), 16);
    }

    #[test]
    fn boundary_nodes_small() {
        let m = unit_square(2);
        assert_eq!(m.boundary_nodes(), alloc::vec![0, 1, 2, 3, 5, 6, 7, 8]);
        let m = unit_square(1);
        assert_eq!(m.boundary_nodes(), alloc::vec![0, 1, 2, 3]);
    }

    #[test]
    fn all_triangles_counterclockwise_with_equal_area() {
        // power-of-two cell edges make the node arithmetic exact, so areas
        // match the cell determinant bitwise
        let m = unit_square(4);
        let cell_area = 0.5 * m.cell_edge_u().cross(m.cell_edge_v());
        for k in 0..m.triangle_count() {
            assert_eq!(area_of(&m, k), cell_area);
        }
        m.validate().unwrap();
    }

    #[test]
    fn skewed_triangle_areas_match_cell_det() {
        let m = StructuredMesh::build(
            Point2::new(0.3, -0.1),
            Vec2::new(0.2867, 0.2261),
            Vec2::new(-0.113, 0.347),
            5,
        )
        .unwrap();
        let cell_area = 0.5 * m.cell_edge_u().cross(m.cell_edge_v());
        for k in 0..m.triangle_count() {
            let a = area_of(&m, k);
            // node coordinates are short sums, so cancellation in the area
            // formula stays within a few ulps
            assert!((a - cell_area).abs() <= 32.0 * f64::EPSILON * cell_area);
        }
        let total = total_area(&m);
        assert!((total - 50.0 * cell_area).abs() <= 1e-12 * total);
    }

    #[test]
    fn triangle_ordering_convention() {
        let m = unit_square(2);
        assert_eq!(m.triangle_nodes(0), [0, 1, 4]); // lower of cell (0,0)
        assert_eq!(m.triangle_nodes(1), [0, 4, 3]); // upper of cell (0,0)
        assert_eq!(m.triangle_nodes(2), [1, 2, 5]); // lower of cell (1,0)
    }

    #[test]
    fn clockwise_cell_rejected() {
        let r = StructuredMesh::build(
            Point2::new(0.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 0.0),
            2,
        );
        assert!(matches!(r, Err(MeshError::DegenerateCell { .. })));
        let r = StructuredMesh::build(
            Point2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, 0.0),
            2,
        );
        assert!(matches!(r, Err(MeshError::DegenerateCell { .. })));
    }

    #[test]
    fn uniformity_detects_displaced_node() {
        let mut m = unit_square(4);
        assert!(m.is_uniform(1e-12));
        let center = m.node_index(2, 2);
        m.displace_node(center, Vec2::new(0.1 * m.cell_scale(), 0.0));
        assert!(!m.is_uniform(1e-2));
    }

    #[test]
    fn parallelogram_closure() {
        let v = [
            Point2::new(0.0, 0.0),
            Point2::new(1.1462, 0.9042),
            Point2::new(0.6941, 2.2924),
            Point2::new(-0.4521, 1.3882),
        ];
        let p = Parallelogram::from_vertices(v).unwrap();
        assert_eq!(p.vertices()[2], v[2]);

        let mut bad = v;
        bad[3] = Point2::new(-0.4521 + 1e-4, 1.3882);
        assert!(matches!(
            Parallelogram::from_vertices(bad),
            Err(MeshError::NotAParallelogram { .. })
        ));
    }

    #[test]
    fn mesh_of_parallelogram_spans_it() {
        let p = Parallelogram::new(
            Point2::new(0.0, 0.0),
            Vec2::new(1.1462, 0.9042),
            Vec2::new(-0.4521, 1.3882),
        )
        .unwrap();
        let m = p.mesh(8).unwrap();
        assert_eq!(m.node(0), p.origin);
        let far = m.node(m.node_index(8, 8));
        let expect = p.vertices()[2];
        assert!((far - expect).norm() < 1e-12 * p.diameter());
    }
}
