//! Run configuration: which surface, which grid, which tolerances, where
//! the output goes. Parsed from flags or a JSON document; unknown names
//! are rejected either way.

use std::collections::BTreeMap;
use std::path::PathBuf;

use klein_core::surface::{self, ParametricSurface};
use klein_core::verify::VerifyConfig;
use serde::{Deserialize, Serialize};

use crate::export::Format;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown surface `{0}` (try `klein list`)")]
    UnknownSurface(String),
    #[error("surface `{surface}` has no parameter `{name}`; expected one of: {expected}")]
    UnknownParameter { surface: String, name: String, expected: String },
    #[error("malformed parameter `{0}`; expected name=value")]
    MalformedParameter(String),
    #[error("invalid surface parameters: {0}")]
    Invalid(klein_core::error::Error),
    #[error("bad config document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceChoice {
    pub name: String,
    /// Overrides of the catalog defaults.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nu: usize,
    pub nv: usize,
    pub margin: f64,
    #[serde(default)]
    pub weld: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { nu: 128, nv: 64, margin: 1e-3, weld: false }
    }
}

/// Tolerance overrides; absent fields keep the verifier defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyOverrides {
    pub nu: Option<usize>,
    pub nv: Option<usize>,
    pub margin: Option<f64>,
    pub regularity_relative: Option<f64>,
    pub gluing_tolerance: Option<f64>,
    pub seam_tolerance: Option<f64>,
}

impl VerifyOverrides {
    pub fn apply(&self) -> VerifyConfig {
        let mut c = VerifyConfig::default();
        c.nu = self.nu.unwrap_or(c.nu);
        c.nv = self.nv.unwrap_or(c.nv);
        c.margin = self.margin.unwrap_or(c.margin);
        c.regularity_relative = self.regularity_relative.unwrap_or(c.regularity_relative);
        c.gluing_tolerance = self.gluing_tolerance.unwrap_or(c.gluing_tolerance);
        c.seam_tolerance = self.seam_tolerance.unwrap_or(c.seam_tolerance);
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
    #[serde(default)]
    pub normals: bool,
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub surface: SurfaceChoice,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub verify: VerifyOverrides,
    pub output: Option<OutputConfig>,
}

/// Parses `a=20,b=8` into a map; names are checked by [`RunConfig::build_surface`].
pub fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, ConfigError> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| ConfigError::MalformedParameter(item.to_owned()))?;
        let v: f64 = v.trim().parse().map_err(|_| ConfigError::MalformedParameter(item.to_owned()))?;
        out.insert(k.trim().to_owned(), v);
    }
    Ok(out)
}

/// Names accepted on the command line: the catalog plus the torus control.
pub fn surface_names() -> Vec<&'static str> {
    surface::CATALOG.iter().copied().chain(["torus"]).collect()
}

impl RunConfig {
    pub fn new(name: &str, params: BTreeMap<String, f64>) -> Result<Self, ConfigError> {
        let c = Self {
            surface: SurfaceChoice { name: name.to_owned(), params },
            grid: GridConfig::default(),
            verify: VerifyOverrides::default(),
            output: None,
        };
        c.resolved_params()?;
        Ok(c)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let c: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError::Document(e.to_string()))?;
        c.resolved_params()?;
        Ok(c)
    }

    /// Full parameter list in catalog order, overrides applied.
    pub fn resolved_params(&self) -> Result<Vec<(&'static str, f64)>, ConfigError> {
        let name = &self.surface.name;
        let mut defaults = surface::default_params(name).ok_or_else(|| ConfigError::UnknownSurface(name.clone()))?;
        for (k, v) in &self.surface.params {
            match defaults.iter_mut().find(|(d, _)| d == k) {
                Some(slot) => slot.1 = *v,
                None => {
                    let expected: Vec<&str> = defaults.iter().map(|d| d.0).collect();
                    return Err(ConfigError::UnknownParameter {
                        surface: name.clone(),
                        name: k.clone(),
                        expected: if expected.is_empty() { "(none)".into() } else { expected.join(", ") },
                    });
                }
            }
        }
        Ok(defaults)
    }

    pub fn build_surface(&self) -> Result<ParametricSurface, ConfigError> {
        let values: Vec<f64> = self.resolved_params()?.iter().map(|p| p.1).collect();
        match surface::build(&self.surface.name, &values) {
            Some(r) => r.map_err(ConfigError::Invalid),
            None => Err(ConfigError::UnknownSurface(self.surface.name.clone())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse_and_override() {
        let p = parse_params("c=6, d=0.3").unwrap();
        let c = RunConfig::new("piriform-tube", p).unwrap();
        assert_eq!(c.resolved_params().unwrap(), vec![("a", 20.0), ("b", 8.0), ("c", 6.0), ("d", 0.3)]);
    }

    #[test]
    fn unknown_names_rejected() {
        let p = parse_params("radius=2").unwrap();
        assert!(matches!(RunConfig::new("kb1", p), Err(ConfigError::UnknownParameter { .. })));
        assert!(matches!(RunConfig::new("kb9", BTreeMap::new()), Err(ConfigError::UnknownSurface(_))));
        assert!(matches!(parse_params("a:3"), Err(ConfigError::MalformedParameter(_))));
        let doc = r#"{"surface": {"name": "kb1"}, "colour": "red"}"#;
        assert!(matches!(RunConfig::from_json(doc), Err(ConfigError::Document(_))));
        let doc = r#"{"surface": {"name": "kb1", "params": {"b": 1}}}"#;
        assert!(matches!(RunConfig::from_json(doc), Err(ConfigError::UnknownParameter { .. })));
    }

    #[test]
    fn json_round_trip() {
        let mut c = RunConfig::new("dumbbell-tube", parse_params("sx=4").unwrap()).unwrap();
        c.verify.seam_tolerance = Some(1e-4);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), c);
        assert_eq!(c.verify.apply().seam_tolerance, 1e-4);
    }

    #[test]
    fn invalid_values_surface_as_errors() {
        let c = RunConfig::new("kb1", parse_params("a=1").unwrap()).unwrap();
        assert!(matches!(c.build_surface(), Err(ConfigError::Invalid(_))));
    }
}
