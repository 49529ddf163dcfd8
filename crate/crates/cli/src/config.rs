//! Study configuration: a small TOML schema with sections [domain],
//! [tensor], [study], [output]. Parsing is strict (unknown keys are
//! rejected) and re-serialization is idempotent, so configs survive
//! round-trips through tooling unchanged.

use std::path::PathBuf;

use equifem_core::{
    CERT_TOL_STRICT, CertPolicy, CgOptions, ManufacturedSolution, Parallelogram, Point2, Poly2,
    QuadratureRule, SpdTensor2, StudySetup, triangle_from_tensor,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub domain: DomainSection,
    pub tensor: TensorSection,
    pub study: StudySection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    /// "explicit" (four vertices) or "auto" (built from the tensor).
    /// Inferred from the fields present when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Four corners in counterclockwise order; the fourth must close the
    /// parallelogram: v4 = v1 + v3 - v2 (relative tolerance 1e-9).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
    /// Auto mode only: the pointwise energy level passed to the generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorSection {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudySection {
    /// Registry name (sin_sin, cos_cos, linear, cubic) or "custom".
    pub solution: String,
    /// Monomial triples (px, py, coefficient) for solution = "custom".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_terms: Option<Vec<(u32, u32, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver_tolerance: Option<f64>,
    /// strict | warn | off (default strict).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification: Option<String>,
    /// Relative energy-spread tolerance for certification (default 1e-9).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification_tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// csv | markdown (default csv).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Everything a command needs, with defaults applied and inputs validated.
pub struct Resolved {
    pub setup: StudySetup,
    pub output: OutputSpec,
}

pub const DEFAULT_N_LIST: [usize; 6] = [2, 4, 8, 16, 32, 64];
pub const DEFAULT_QUADRATURE_DEGREE: u32 = 6;
pub const DEFAULT_SOLVER_TOLERANCE: f64 = 1e-13;

impl StudyConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(format!("config parse error: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialization cannot fail")
    }

    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let t = &self.tensor;
        let tensor = SpdTensor2::new(t.a11, t.a12, t.a22)
            .map_err(|e| ConfigError(format!("[tensor]: {e}")))?;

        let domain = self.resolve_domain(&tensor)?;
        let solution = self.resolve_solution()?;

        let mut n_list = self
            .study
            .n_list
            .clone()
            .unwrap_or_else(|| DEFAULT_N_LIST.to_vec());
        if n_list.is_empty() {
            return err("[study] n_list: must name at least one refinement level");
        }
        if n_list.contains(&0) {
            return err("[study] n_list: levels must be positive");
        }
        n_list.sort_unstable();
        n_list.dedup();

        let degree = self
            .study
            .quadrature_degree
            .unwrap_or(DEFAULT_QUADRATURE_DEGREE);
        if degree < 2 {
            return err("[study] quadrature_degree: load assembly needs degree >= 2");
        }
        let quadrature = QuadratureRule::with_degree(degree)
            .map_err(|e| ConfigError(format!("[study] quadrature_degree: {e}")))?;

        let rel_tol = self
            .study
            .solver_tolerance
            .unwrap_or(DEFAULT_SOLVER_TOLERANCE);
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return err("[study] solver_tolerance: must lie in (0, 1)");
        }
        let solver = CgOptions { rel_tol, max_iter: None };

        let cert_tol = self.study.certification_tolerance.unwrap_or(CERT_TOL_STRICT);
        if !(cert_tol > 0.0) {
            return err("[study] certification_tolerance: must be positive");
        }
        let certification = match self.study.certification.as_deref().unwrap_or("strict") {
            "strict" => CertPolicy::strict(cert_tol),
            "warn" => CertPolicy::warn(cert_tol),
            "off" => CertPolicy::off(),
            other => {
                return err(format!(
                    "[study] certification: unknown mode {other:?} (expected strict, warn, off)"
                ));
            }
        };

        let output = self.resolve_output()?;

        Ok(Resolved {
            setup: StudySetup {
                domain,
                tensor,
                solution,
                n_list,
                quadrature,
                solver,
                certification,
            },
            output,
        })
    }

    fn resolve_domain(&self, tensor: &SpdTensor2) -> Result<Parallelogram, ConfigError> {
        let d = &self.domain;
        let mode = match d.mode.as_deref() {
            Some("explicit") => "explicit",
            Some("auto") => "auto",
            Some(other) => {
                return err(format!(
                    "[domain] mode: unknown mode {other:?} (expected explicit or auto)"
                ));
            }
            None if d.vertices.is_some() => "explicit",
            None => "auto",
        };
        match mode {
            "explicit" => {
                let Some(v) = &d.vertices else {
                    return err("[domain]: explicit mode needs a vertices list");
                };
                if d.alpha.is_some() {
                    return err("[domain]: alpha applies only to auto mode");
                }
                if v.len() != 4 {
                    return err(format!("[domain] vertices: need 4 corners, got {}", v.len()));
                }
                let pts: [Point2; 4] =
                    core::array::from_fn(|i| Point2::new(v[i][0], v[i][1]));
                Parallelogram::from_vertices(pts)
                    .map_err(|e| ConfigError(format!("[domain] vertices: {e}")))
            }
            _ => {
                if d.vertices.is_some() {
                    return err("[domain]: vertices apply only to explicit mode");
                }
                let alpha = d.alpha.unwrap_or(1.0);
                let fm = triangle_from_tensor(tensor, alpha)
                    .map_err(|e| ConfigError(format!("[domain] auto: {e}")))?;
                let base = Parallelogram::new(Point2::new(0.0, 0.0), fm.col1(), fm.col2())
                    .map_err(|e| ConfigError(format!("[domain] auto: {e}")))?;
                // normalize to unit diameter so error magnitudes stay
                // comparable across tensors
                let s = 1.0 / base.diameter();
                Parallelogram::new(Point2::new(0.0, 0.0), fm.col1() * s, fm.col2() * s)
                    .map_err(|e| ConfigError(format!("[domain] auto: {e}")))
            }
        }
    }

    fn resolve_solution(&self) -> Result<ManufacturedSolution, ConfigError> {
        let s = &self.study;
        if s.solution == "custom" {
            let Some(terms) = &s.custom_terms else {
                return err("[study]: solution = \"custom\" needs custom_terms");
            };
            if terms.is_empty() {
                return err("[study] custom_terms: must not be empty");
            }
            let poly = Poly2::new(terms.iter().map(|&(px, py, c)| (px, py, c)));
            return Ok(ManufacturedSolution::polynomial("custom", poly));
        }
        if s.custom_terms.is_some() {
            return err("[study]: custom_terms apply only to solution = \"custom\"");
        }
        ManufacturedSolution::from_name(&s.solution).ok_or_else(|| {
            ConfigError(format!(
                "[study] solution: unknown name {:?} (registry: {}, or custom)",
                s.solution,
                ManufacturedSolution::registry_names().join(", ")
            ))
        })
    }

    fn resolve_output(&self) -> Result<OutputSpec, ConfigError> {
        let Some(o) = &self.output else {
            return Ok(OutputSpec { path: None, format: OutputFormat::Csv });
        };
        let format = match o.format.as_deref().unwrap_or("csv") {
            "csv" => OutputFormat::Csv,
            "markdown" => OutputFormat::Markdown,
            other => {
                return err(format!(
                    "[output] format: unknown format {other:?} (expected csv or markdown)"
                ));
            }
        };
        Ok(OutputSpec { path: o.path.as_ref().map(PathBuf::from), format })
    }
}

/// Resolves a configured output path against EQUIFEM_OUTPUT_DIR: relative
/// paths land inside the override directory when it is set.
pub fn resolve_output_path(path: &std::path::Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("EQUIFEM_OUTPUT_DIR") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.to_path_buf(),
    }
}
