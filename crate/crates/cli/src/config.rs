//! Problem configuration files.

use std::path::Path;

use pseudocone::geometry::ConeSpec;
use pseudocone::linalg::{vector, Vector};
use pseudocone::measures::Route;
use pseudocone::quadrature::{QuadratureSettings, WeightDensity};
use pseudocone::solver::{SolveConfig, TargetMeasure};
use serde::{Deserialize, Serialize};

use crate::failure::Failure;

pub const SCHEMA_VERSION: u32 = 1;

/// Tolerance on `|‖u‖ - 1|` for directions read from a config.
pub const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub schema_version: u32,
    pub cone: ConeConfig,
    pub density: DensityConfig,
    pub target: TargetConfig,
    #[serde(default)]
    pub solver: SolveConfig,
    #[serde(default)]
    pub quadrature: QuadratureSettings,
    /// Overrides the seeds of `solver` and `quadrature`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub routes: Option<Vec<Route>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nest: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "OutputConfig::is_empty")]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub rays: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiName {
    Constant,
    AxisPower,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub q: f64,
    #[serde(default = "default_psi")]
    pub psi: PsiName,
    /// Exponent `p` of `ψ(v) = ⟨v, 𝔳⟩^p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<f64>,
}

fn default_psi() -> PsiName {
    PsiName::Constant
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub directions: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masses: Option<Vec<f64>>,
    /// Support magnitudes `f_i` of a body to evaluate or audit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

impl OutputConfig {
    fn is_empty(&self) -> bool {
        self.dir.is_none()
    }
}

/// A config turned into library objects.
pub struct Problem {
    pub config: ProblemConfig,
    pub cone: ConeSpec,
    pub density: WeightDensity,
    pub directions: Vec<Vector>,
}

impl ProblemConfig {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let config: ProblemConfig =
            serde_json::from_str(text).map_err(|e| Failure::Input(format!("malformed config: {e}")))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(Failure::Input(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn apply_seed(&mut self, seed: Option<u64>) {
        if let Some(s) = seed.or(self.seed) {
            self.seed = Some(s);
            self.solver.seed = s;
            self.quadrature.seed = s;
        }
    }

    pub fn build(mut self) -> Result<Problem, Failure> {
        let rays: Vec<Vector> = self.cone.rays.iter().map(|r| vector(r)).collect();
        let cone = match &self.cone.axis {
            Some(a) => ConeSpec::with_axis(&rays, &vector(a))?,
            None => ConeSpec::new(&rays)?,
        };
        let n = cone.dim();
        let q = self.density.q;
        let density = match (self.density.psi, self.density.parameter) {
            (PsiName::Constant, None) => WeightDensity::constant(n, q)?,
            (PsiName::Constant, Some(_)) => {
                return Err(Failure::Input("psi \"constant\" takes no parameter".into()));
            }
            (PsiName::AxisPower, p) => WeightDensity::axis_power(n, q, p.unwrap_or(1.0), cone.axis())?,
        };
        let mut directions = Vec::with_capacity(self.target.directions.len());
        for (i, d) in self.target.directions.iter_mut().enumerate() {
            if d.len() != n {
                return Err(Failure::Input(format!("direction {i} has dimension {} != {n}", d.len())));
            }
            let u = vector(d);
            let norm = u.norm();
            if !((norm - 1.0).abs() <= UNIT_TOL) {
                return Err(Failure::Input(format!("direction {i} is not a unit vector (norm {norm})")));
            }
            let u = u / norm;
            d.copy_from_slice(u.as_slice());
            directions.push(u);
        }
        let m = directions.len();
        for (name, values) in [("masses", &self.target.masses), ("support", &self.target.support)] {
            if let Some(v) = values {
                if v.len() != m {
                    return Err(Failure::Input(format!("target has {m} directions but {} {name}", v.len())));
                }
            }
        }
        Ok(Problem { config: self, cone, density, directions })
    }
}

impl Problem {
    pub fn target(&self) -> Result<TargetMeasure, Failure> {
        let masses =
            self.config.target.masses.clone().ok_or_else(|| Failure::Input("target.masses is required".into()))?;
        Ok(TargetMeasure::new(self.directions.clone(), masses)?)
    }

    pub fn support(&self) -> Result<&[f64], Failure> {
        self.config.target.support.as_deref().ok_or_else(|| Failure::Input("target.support is required".into()))
    }

    /// Routes from the command line, else the config, else facet only.
    pub fn routes(&self, flag: Option<&[Route]>) -> Vec<Route> {
        flag.map(<[Route]>::to_vec).or_else(|| self.config.routes.clone()).unwrap_or_default()
    }
}

/// Parses `facet,radial,mc` or `all`.
pub fn parse_routes(s: &str) -> Result<Vec<Route>, String> {
    if s.trim() == "all" {
        return Ok(vec![Route::Facet, Route::Radial, Route::Mc]);
    }
    s.split(',').filter(|p| !p.trim().is_empty()).map(|p| p.parse::<Route>().map_err(|e| e.to_string())).collect()
}

/// Parses `all`, an empty string, or comma-separated atom indices.
pub fn parse_indices(s: &str) -> Result<Option<Vec<usize>>, String> {
    if s.trim() == "all" {
        return Ok(None);
    }
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|_| format!("invalid atom index {p:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

/// Parses levels separated by `;`, each a comma-separated index list.
pub fn parse_nest(s: &str) -> Result<Vec<Vec<usize>>, String> {
    s.split(';').map(|level| parse_indices(level).map(Option::unwrap_or_default)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUADRANT: &str = r#"{
        "schema_version": 1,
        "cone": {"rays": [[1, 0], [0, 1]]},
        "density": {"q": 1.5},
        "target": {"directions": [[-0.7071067811865476, -0.7071067811865476]], "masses": [1.0]}
    }"#;

    #[test]
    fn parses_with_defaults() {
        let p = ProblemConfig::parse(QUADRANT).unwrap().build().unwrap();
        assert_eq!(p.cone.dim(), 2);
        assert_eq!(p.config.solver, SolveConfig::default());
        assert!((p.directions[0].norm() - 1.0).abs() < 1e-15);
        assert!(p.routes(None).is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        let far = QUADRANT.replace("-0.7071067811865476, -0.7071067811865476", "-0.8, -0.7");
        assert!(ProblemConfig::parse(&far).unwrap().build().is_err());
        let q = QUADRANT.replace("1.5", "2");
        let err = ProblemConfig::parse(&q).unwrap().build().err().unwrap();
        assert!(err.to_string().contains("q must lie in (n−1, n)"));
        assert!(ProblemConfig::parse(&QUADRANT.replace("\"schema_version\": 1", "\"schema_version\": 2")).is_err());
        assert!(ProblemConfig::parse(&QUADRANT.replace("\"q\"", "\"k\"")).is_err());
    }

    #[test]
    fn seed_overrides_both_settings() {
        let mut c = ProblemConfig::parse(QUADRANT).unwrap();
        c.apply_seed(Some(9));
        assert_eq!((c.solver.seed, c.quadrature.seed, c.seed), (9, 9, Some(9)));
    }

    #[test]
    fn list_syntax() {
        assert_eq!(parse_routes("all").unwrap().len(), 3);
        assert_eq!(parse_routes("radial,mc").unwrap(), vec![Route::Radial, Route::Mc]);
        assert!(parse_routes("exact").is_err());
        assert_eq!(parse_indices("all").unwrap(), None);
        assert_eq!(parse_indices("").unwrap(), Some(vec![]));
        assert_eq!(parse_indices("2, 0").unwrap(), Some(vec![2, 0]));
        assert_eq!(parse_nest("0;0,1").unwrap(), vec![vec![0], vec![0, 1]]);
    }
}
