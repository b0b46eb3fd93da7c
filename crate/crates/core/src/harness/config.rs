use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::ProbeError;
use crate::scalar::Tolerance;
use crate::weil::{WeilAlgebra, WeilPresentation};

/// Every suite, in run order.
pub const SUITES: [&str; 9] = [
    "derivatives",
    "ring_laws",
    "morphisms",
    "assoc",
    "products",
    "equivalence",
    "bifunctor",
    "fragments",
    "conjecture_probe",
];

fn all_suites() -> Vec<String> {
    SUITES.iter().map(|s| s.to_string()).collect()
}

fn default_cases() -> usize {
    200
}

fn default_degree() -> u32 {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimsGrid {
    #[serde(default = "DimsGrid::default_dims")]
    pub n: Vec<usize>,
    #[serde(default = "DimsGrid::default_dims")]
    pub m: Vec<usize>,
    /// Preset names or paths to presentation files.
    #[serde(default = "DimsGrid::default_algebras")]
    pub algebras: Vec<String>,
}

impl DimsGrid {
    fn default_dims() -> Vec<usize> {
        vec![0, 1, 2]
    }

    fn default_algebras() -> Vec<String> {
        ["real", "dual", "jet2", "d2", "jet3"].iter().map(|s| s.to_string()).collect()
    }
}

impl Default for DimsGrid {
    fn default() -> Self {
        DimsGrid { n: Self::default_dims(), m: Self::default_dims(), algebras: Self::default_algebras() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    pub rel: f64,
    pub abs: f64,
}

/// Suite configuration, read from JSON or TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default = "all_suites")]
    pub suites: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    /// Random cases per check.
    #[serde(default = "default_cases")]
    pub cases: usize,
    #[serde(default = "default_degree")]
    pub degree_bound: u32,
    #[serde(default)]
    pub dims_grid: DimsGrid,
    /// Record real wall times; off by default so reports are byte-stable.
    #[serde(default)]
    pub timing: bool,
    /// Real-mode comparison tolerance.
    #[serde(default)]
    pub tolerance: Option<ToleranceConfig>,
    /// Directory that file references in `dims_grid.algebras` resolve against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            suites: all_suites(),
            seed: 0,
            cases: default_cases(),
            degree_bound: default_degree(),
            dims_grid: DimsGrid::default(),
            timing: false,
            tolerance: None,
            base_dir: None,
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> ProbeError {
    ProbeError::Config(e.to_string())
}

impl Config {
    /// TOML for `.toml` files, JSON otherwise.
    pub fn parse(text: &str, ext: Option<&str>) -> Result<Config, ProbeError> {
        let cfg: Config = match ext {
            Some("toml") => toml::from_str(text).map_err(config_err)?,
            _ => serde_json::from_str(text).map_err(config_err)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, ProbeError> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        let mut cfg = Config::parse(&text, path.extension().and_then(|e| e.to_str()))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ProbeError> {
        if let Some(bad) = self.suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
            return Err(config_err(format!("unknown suite `{bad}` (known: {})", SUITES.join(", "))));
        }
        if let Some(t) = self.tolerance {
            if !(t.rel >= 0.0 && t.abs >= 0.0) {
                return Err(config_err("tolerances must be non-negative"));
            }
        }
        if self.degree_bound > 6 {
            return Err(config_err("degree_bound above 6 is not supported"));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tolerance.map(|t| Tolerance { rel: t.rel, abs: t.abs }).unwrap_or_default()
    }

    /// Grid algebras, labelled by their preset name or file stem.
    pub fn algebras(&self) -> Result<Vec<(String, Arc<WeilAlgebra>)>, ProbeError> {
        self.dims_grid.algebras.iter().map(|a| self.resolve_algebra(a)).collect()
    }

    fn resolve_algebra(&self, name: &str) -> Result<(String, Arc<WeilAlgebra>), ProbeError> {
        if let Ok(w) = WeilAlgebra::preset(name) {
            return Ok((name.to_string(), w));
        }
        let path = match &self.base_dir {
            Some(dir) => dir.join(name),
            None => PathBuf::from(name),
        };
        if !path.exists() {
            return Err(config_err(format!("`{name}` is neither a preset nor a presentation file")));
        }
        let pres = WeilPresentation::load(&path).map_err(config_err)?;
        let w = WeilAlgebra::from_presentation(&pres).map_err(config_err)?;
        let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or(name).to_string();
        Ok((label, w))
    }
}
