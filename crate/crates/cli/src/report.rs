//! Table rendering and file emission. Errors print in scientific notation
//! with five significant digits and orders with four decimals, mirroring the
//! layout the studies are compared against; files are written atomically.

use std::io::Write as _;
use std::path::Path;

use equifem_core::{ConvergenceTable, FemSolution, StructuredMesh};

/// Five significant digits, scientific: 7.2445e-7.
pub fn sci5(x: f64) -> String {
    format!("{x:.4e}")
}

/// Four decimals, or the empty cell for the first row.
pub fn ord4(o: Option<f64>) -> String {
    o.map(|v| format!("{v:.4}")).unwrap_or_default()
}

pub fn convergence_csv(table: &ConvergenceTable) -> String {
    let mut out = String::from("n,h,l2,l2_order,h1_semi,h1_order,linf,linf_order\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n,
            r.h,
            sci5(r.l2),
            ord4(r.l2_order),
            sci5(r.h1_semi),
            ord4(r.h1_order),
            sci5(r.linf),
            ord4(r.linf_order),
        ));
    }
    out
}

pub fn convergence_markdown(table: &ConvergenceTable) -> String {
    let mut out = String::new();
    out.push_str("| 1/h | L2 error | order | H1 error | order | max error | order |\n");
    out.push_str("| ---:| ---:| ---:| ---:| ---:| ---:| ---:|\n");
    for r in &table.rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            r.n,
            sci5(r.l2),
            ord4(r.l2_order),
            sci5(r.h1_semi),
            ord4(r.h1_order),
            sci5(r.linf),
            ord4(r.linf_order),
        ));
    }
    out
}

/// Per-node dump of a solve: lattice indices, position, u_h, u_I, gap.
pub fn solve_dump_csv(mesh: &StructuredMesh, u_h: &FemSolution, u_i: &FemSolution) -> String {
    let mut out = String::from("i,j,x,y,u_h,u_I,diff\n");
    for idx in 0..mesh.node_count() {
        let (i, j) = mesh.node_ij(idx);
        let p = mesh.node(idx);
        let a = u_h.nodal_values[idx];
        let b = u_i.nodal_values[idx];
        out.push_str(&format!("{i},{j},{},{},{a},{b},{}\n", p.x, p.y, a - b));
    }
    out
}

/// Writes through a temporary file in the target directory, so a crash
/// cannot leave a half-written report.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    if let Some(d) = dir {
        std::fs::create_dir_all(d)?;
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
