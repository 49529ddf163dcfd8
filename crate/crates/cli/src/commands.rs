//! The five subcommands. Each returns a typed failure so main can honor the
//! exit-code contract: 0 success, 1 verification failure, 2 certification
//! failure, 3 solver failure, 64 configuration error.

use std::path::{Path, PathBuf};

use equifem_core::{
    CERT_TOL_STRICT, CertMode, GaussLegendre, Interval, Parallelogram, Point2, Poly2,
    SmoothFunction1D, SpdTensor2, StudyError, Triangle, certify_mesh, diff_norms, em_decompose,
    interpolate, run_study, solve_dirichlet, source_term, triangle_from_tensor,
    verify_edge_transfer, verify_normal_identity,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{OutputFormat, Resolved, StudyConfig, resolve_output_path};
use crate::report;

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Verification(String),
    Certification(String),
    Solver(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 64,
            Failure::Verification(_) | Failure::Io(_) => 1,
            Failure::Certification(_) => 2,
            Failure::Solver(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m)
            | Failure::Verification(m)
            | Failure::Certification(m)
            | Failure::Solver(m)
            | Failure::Io(m) => m,
        }
    }
}

impl From<crate::config::ConfigError> for Failure {
    fn from(e: crate::config::ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

fn load(config: &Path) -> Result<Resolved, Failure> {
    Ok(StudyConfig::from_path(config)?.resolve()?)
}

fn study_failure(e: StudyError) -> Failure {
    match e {
        StudyError::Certification { .. } => Failure::Certification(e.to_string()),
        StudyError::Solve { .. } => Failure::Solver(e.to_string()),
        StudyError::Mesh(m) => Failure::Config(m.to_string()),
    }
}

pub fn gen_domain(a11: f64, a12: f64, a22: f64, alpha: f64) -> Result<(), Failure> {
    let tensor =
        SpdTensor2::new(a11, a12, a22).map_err(|e| Failure::Config(format!("tensor: {e}")))?;
    let fm = triangle_from_tensor(&tensor, alpha)
        .map_err(|e| Failure::Config(format!("cannot factor the tensor: {e}")))?;
    let (c1, c2) = (fm.col1(), fm.col2());
    println!("vertices:");
    println!("  v1 = (0, 0)");
    println!("  v2 = ({}, {})", c1.x, c1.y);
    println!("  v3 = ({}, {})", c1.x + c2.x, c1.y + c2.y);
    println!("  v4 = ({}, {})", c2.x, c2.y);
    println!("cell edges:");
    println!("  e_u = ({}, {})", c1.x, c1.y);
    println!("  e_v = ({}, {})", c2.x, c2.y);

    let domain = Parallelogram::new(Point2::new(0.0, 0.0), c1, c2)
        .map_err(|e| Failure::Config(e.to_string()))?;
    let mesh = domain.mesh(1).map_err(|e| Failure::Config(e.to_string()))?;
    let cert = certify_mesh(&tensor, &mesh, CERT_TOL_STRICT);
    println!(
        "certification: alpha = {}, spread = {}, {}",
        cert.alpha,
        report::sci5(cert.max_relative_spread),
        if cert.certified { "certified" } else { "NOT certified" }
    );
    if !cert.certified {
        return Err(Failure::Certification(
            "generated domain failed strict certification".into(),
        ));
    }
    Ok(())
}

pub fn check(config: &Path) -> Result<(), Failure> {
    let resolved = load(config)?;
    let setup = &resolved.setup;
    let tol = if setup.certification.tol > 0.0 {
        setup.certification.tol
    } else {
        CERT_TOL_STRICT
    };
    let mut all = true;
    for &n in &setup.n_list {
        let mesh = setup
            .domain
            .mesh(n)
            .map_err(|e| Failure::Config(e.to_string()))?;
        let cert = certify_mesh(&setup.tensor, &mesh, tol);
        println!(
            "n = {n}: alpha = {}, spread = {} (tolerance {}), worst triangle {}, {}",
            cert.alpha,
            report::sci5(cert.max_relative_spread),
            report::sci5(tol),
            cert.worst_triangle,
            if cert.certified { "certified" } else { "NOT certified" }
        );
        all &= cert.certified;
    }
    if !all {
        return Err(Failure::Certification(
            "mesh is not uniformly equilateral for the tensor".into(),
        ));
    }
    Ok(())
}

pub fn solve(config: &Path, n: usize) -> Result<(), Failure> {
    let resolved = load(config)?;
    let setup = &resolved.setup;
    let mesh = setup
        .domain
        .mesh(n)
        .map_err(|e| Failure::Config(e.to_string()))?;
    if setup.certification.mode != CertMode::Off {
        let cert = certify_mesh(&setup.tensor, &mesh, setup.certification.tol);
        if !cert.certified {
            let msg = format!(
                "mesh at n = {n} is not uniformly equilateral (spread {})",
                report::sci5(cert.max_relative_spread)
            );
            if setup.certification.mode == CertMode::Strict {
                return Err(Failure::Certification(msg));
            }
            eprintln!("warning: {msg}");
        }
    }
    let mut f = source_term(setup.tensor, &setup.solution);
    let mut g = |x, y| setup.solution.value(x, y);
    let u_h = solve_dirichlet(&mesh, &setup.tensor, &mut f, &mut g, &setup.quadrature, &setup.solver)
        .map_err(|e| Failure::Solver(e.to_string()))?;
    let u_i = interpolate(&mesh, &setup.solution);
    let r = diff_norms(&mesh, &u_h.nodal_values, &u_i.nodal_values);
    let dump = report::solve_dump_csv(&mesh, &u_h, &u_i);
    match &resolved.output.path {
        Some(path) => {
            let target = resolve_output_path(&dump_path(path, n));
            report::write_atomic(&target, &dump).map_err(|e| Failure::Io(e.to_string()))?;
            println!("wrote {}", target.display());
        }
        None => print!("{dump}"),
    }
    println!("n = {n}: max |u_h - u_I| = {}", report::sci5(r.linf));
    Ok(())
}

/// table1.csv -> table1-solve-n8.csv
fn dump_path(report_path: &Path, n: usize) -> PathBuf {
    let stem = report_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "solve".into());
    report_path.with_file_name(format!("{stem}-solve-n{n}.csv"))
}

pub fn convergence(config: &Path) -> Result<(), Failure> {
    let resolved = load(config)?;
    let out = run_study(&resolved.setup).map_err(study_failure)?;
    for (n, cert) in &out.certificates {
        println!(
            "n = {n}: alpha = {}, spread = {}, {}",
            cert.alpha,
            report::sci5(cert.max_relative_spread),
            if cert.certified { "certified" } else { "NOT certified" }
        );
    }
    print!("{}", report::convergence_markdown(&out.table));
    if let Some(path) = &resolved.output.path {
        let text = match resolved.output.format {
            OutputFormat::Csv => report::convergence_csv(&out.table),
            OutputFormat::Markdown => report::convergence_markdown(&out.table),
        };
        let target = resolve_output_path(path);
        report::write_atomic(&target, &text).map_err(|e| Failure::Io(e.to_string()))?;
        println!("wrote {}", target.display());
    }
    Ok(())
}

struct CheckLine {
    name: &'static str,
    detail: String,
    passed: bool,
}

pub fn em_verify() -> Result<(), Failure> {
    // Fixed seeds: the command must be deterministic run to run.
    let mut lines = Vec::new();
    lines.push(em_cubic_exactness());
    lines.push(em_quartic_components());
    lines.push(normal_identity_sweep());
    lines.push(edge_transfer_sweep());
    let mut all = true;
    for line in &lines {
        println!(
            "{}  {:<38} {}",
            if line.passed { "PASS" } else { "FAIL" },
            line.name,
            line.detail
        );
        all &= line.passed;
    }
    if !all {
        return Err(Failure::Verification(
            "one or more identity checks exceeded tolerance".into(),
        ));
    }
    Ok(())
}

fn em_cubic_exactness() -> CheckLine {
    let oracle = GaussLegendre::new(32);
    let mut rng = ChaCha8Rng::seed_from_u64(0x45_01);
    // Residuals are put on the scale of the integral: the integrands reach
    // magnitude ~1e2 on these intervals, where an absolute 1e-14 would sit
    // below f64 roundoff. Exactness also demands an identically zero
    // remainder term, which is checked bitwise.
    let mut worst = 0.0f64;
    let mut remainder_free = true;
    for _ in 0..50 {
        let a: f64 = rng.random_range(-2.0..2.0);
        let len: f64 = rng.random_range(0.3..2.5);
        let iv = Interval::new(a, a + len).expect("positive length");
        let degree = rng.random_range(0..=3usize);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        let d = em_decompose(&SmoothFunction1D::from_coeffs(&coeffs), iv, &oracle);
        worst = worst.max(d.residual / d.reference.abs().max(1.0));
        remainder_free &= d.remainder == 0.0;
    }
    CheckLine {
        name: "euler-maclaurin exactness through cubics",
        detail: format!(
            "worst relative residual {} (tolerance 1e-14), remainder {}",
            report::sci5(worst),
            if remainder_free { "identically zero" } else { "NONZERO" }
        ),
        passed: worst <= 1e-14 && remainder_free,
    }
}

fn em_quartic_components() -> CheckLine {
    let oracle = GaussLegendre::new(32);
    let f = SmoothFunction1D::from_coeffs(&[0.0, 0.0, 0.0, 0.0, 1.0]);
    let iv = Interval::new(-1.0, 1.0).expect("unit interval");
    let d = em_decompose(&f, iv, &oracle);
    let ok = (d.trapezoid - 2.0).abs() <= 1e-14
        && (d.correction + 8.0 / 3.0).abs() <= 1e-14
        && (d.remainder - 16.0 / 15.0).abs() <= 1e-14
        && (d.total - 0.4).abs() <= 1e-14
        && d.residual <= 1e-14;
    CheckLine {
        name: "euler-maclaurin quartic decomposition",
        detail: format!(
            "trapezoid {:.10}, correction {:.10}, remainder {:.10}, total {:.10}",
            d.trapezoid, d.correction, d.remainder, d.total
        ),
        passed: ok,
    }
}

fn random_triangle(rng: &mut ChaCha8Rng) -> Triangle {
    loop {
        let p: [Point2; 3] = core::array::from_fn(|_| {
            Point2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
        });
        let cross = (p[1] - p[0]).cross(p[2] - p[0]);
        if cross.abs() < 0.2 {
            continue;
        }
        let (b, c) = if cross > 0.0 { (p[1], p[2]) } else { (p[2], p[1]) };
        if let Ok(t) = Triangle::new(p[0], b, c) {
            return t;
        }
    }
}

fn normal_identity_sweep() -> CheckLine {
    let mut rng = ChaCha8Rng::seed_from_u64(0x45_02);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        worst = worst.max(verify_normal_identity(&random_triangle(&mut rng)));
    }
    CheckLine {
        name: "normal-gradient identity",
        detail: format!("worst residual {} (tolerance 1e-12)", report::sci5(worst)),
        passed: worst <= 1e-12,
    }
}

fn edge_transfer_sweep() -> CheckLine {
    let mut rng = ChaCha8Rng::seed_from_u64(0x45_03);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let t = random_triangle(&mut rng);
        let mut terms = Vec::new();
        for px in 0..=4u32 {
            for py in 0..=4 - px {
                terms.push((px, py, rng.random_range(-1.0..1.0)));
            }
        }
        let w = Poly2::new(terms);
        for k in 0..3 {
            let c = verify_edge_transfer(&t, &w, k);
            worst = worst.max(c.residual / c.scale.max(1.0));
        }
    }
    CheckLine {
        name: "edge transfer identities",
        detail: format!("worst relative residual {} (tolerance 1e-11)", report::sci5(worst)),
        passed: worst <= 1e-11,
    }
}
