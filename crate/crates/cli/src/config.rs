//! Run configuration: one JSON document, with command-line overrides.

use std::fmt;
use std::path::Path;

use pennycrack::models::{AnnulusProblem, DiscProblem, DEFAULT_K, DEFAULT_N};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Disc,
    Annulus,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Disc => "disc",
            Model::Annulus => "annulus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Sample counts and windows of the emitted curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Points per stress or displacement curve.
    pub points: usize,
    /// Closest approach to a singular endpoint, as a fraction of the radius.
    pub edge_gap: f64,
    /// Outer end of the stress branch ahead of the tip, in units of `a`.
    pub outer_max: f64,
    /// Points of the λ sweep, including `λ = 0`.
    pub sif_points: usize,
    pub sif_lambda_max: f64,
    pub displacement_lambdas: Vec<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            points: 400,
            edge_gap: 1e-6,
            outer_max: 2.0,
            sif_points: 61,
            sif_lambda_max: 0.9,
            displacement_lambdas: vec![0.3, 0.5, 0.7],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: Model,
    /// `b/a` of the disc.
    pub lambda: f64,
    /// Inner and outer radius of the annulus over `a`.
    pub lambda0: f64,
    pub lambda1: f64,
    pub delta_over_a: f64,
    pub nu: f64,
    /// Enables dimensional output (`θ₁ = (1 − ν)/G`).
    pub shear_modulus: Option<f64>,
    pub a_radius: f64,
    pub truncation_n: usize,
    pub order_k: usize,
    pub output_format: OutputFormat,
    pub grid: GridConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: Model::Disc,
            lambda: 0.5,
            lambda0: 0.2,
            lambda1: 0.5,
            delta_over_a: 0.05,
            nu: 0.3,
            shear_modulus: None,
            a_radius: 1.0,
            truncation_n: DEFAULT_N,
            order_k: DEFAULT_K,
            output_format: OutputFormat::Csv,
            grid: GridConfig::default(),
        }
    }
}

/// A rejected field and the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Values given on the command line; `None` keeps the file value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub delta_over_a: Option<f64>,
    pub truncation_n: Option<usize>,
    pub output_format: Option<OutputFormat>,
}

fn open_unit(field: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(ConfigError::new(field, format!("must lie in (0, 1), got {v}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::new("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.lambda {
            match self.model {
                Model::Disc => self.lambda = v,
                Model::Annulus => self.lambda1 = v,
            }
        }
        if let Some(v) = o.delta_over_a {
            self.delta_over_a = v;
        }
        if let Some(v) = o.truncation_n {
            self.truncation_n = v;
        }
        if let Some(v) = o.output_format {
            self.output_format = v;
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.model {
            Model::Disc => open_unit("lambda", self.lambda)?,
            Model::Annulus => {
                open_unit("lambda1", self.lambda1)?;
                if !(self.lambda0 >= 0.0 && self.lambda0 < self.lambda1) {
                    return Err(ConfigError::new(
                        "lambda0",
                        format!("must satisfy 0 <= lambda0 < lambda1, got {}", self.lambda0),
                    ));
                }
            }
        }
        if !(self.delta_over_a > 0.0 && self.delta_over_a.is_finite()) {
            return Err(ConfigError::new(
                "delta_over_a",
                format!("must be positive, got {}", self.delta_over_a),
            ));
        }
        if !(self.nu > 0.0 && self.nu < 0.5) {
            return Err(ConfigError::new("nu", format!("must lie in (0, 0.5), got {}", self.nu)));
        }
        if let Some(g) = self.shear_modulus {
            if !(g > 0.0 && g.is_finite()) {
                return Err(ConfigError::new("shear_modulus", format!("must be positive, got {g}")));
            }
        }
        if !(self.a_radius > 0.0 && self.a_radius.is_finite()) {
            return Err(ConfigError::new("a_radius", format!("must be positive, got {}", self.a_radius)));
        }
        if self.truncation_n == 0 {
            return Err(ConfigError::new("truncation_n", "must be at least 1"));
        }
        if self.order_k == 0 {
            return Err(ConfigError::new("order_k", "must be at least 1"));
        }
        let g = &self.grid;
        if g.points < 2 {
            return Err(ConfigError::new("grid.points", "must be at least 2"));
        }
        if !(g.edge_gap > 0.0 && g.edge_gap < 0.5) {
            return Err(ConfigError::new("grid.edge_gap", format!("must lie in (0, 0.5), got {}", g.edge_gap)));
        }
        if !(g.outer_max > 1.0 + g.edge_gap && g.outer_max.is_finite()) {
            return Err(ConfigError::new("grid.outer_max", format!("must exceed 1, got {}", g.outer_max)));
        }
        if g.sif_points < 2 {
            return Err(ConfigError::new("grid.sif_points", "must be at least 2"));
        }
        open_unit("grid.sif_lambda_max", g.sif_lambda_max)?;
        if g.displacement_lambdas.is_empty() {
            return Err(ConfigError::new("grid.displacement_lambdas", "must not be empty"));
        }
        for &l in &g.displacement_lambdas {
            open_unit("grid.displacement_lambdas", l)?;
        }
        Ok(())
    }

    /// `θ₁ = (1 − ν)/G`, or 1 when no modulus is given.
    pub fn theta1(&self) -> f64 {
        self.shear_modulus.map_or(1.0, |g| (1.0 - self.nu) / g)
    }

    pub fn disc_problem(&self, lambda: f64) -> Result<DiscProblem, ConfigError> {
        DiscProblem::from_delta_over_a(lambda, self.delta_over_a, self.theta1(), self.a_radius)
            .map_err(|e| ConfigError::new("lambda", e.to_string()))
    }

    pub fn annulus_problem(&self) -> Result<AnnulusProblem, ConfigError> {
        let disc = self.disc_problem(self.lambda1)?;
        let p = AnnulusProblem {
            lambda0: self.lambda0,
            lambda1: self.lambda1,
            delta_star: disc.delta_star,
            theta1: disc.theta1,
            a_radius: disc.a_radius,
        };
        p.validate()
            .map_err(|e| ConfigError::new("lambda0", e.to_string()))?;
        Ok(p)
    }

    /// `key=value` pairs for table headers.
    pub fn header(&self) -> Vec<(String, String)> {
        let mut h = vec![("model".to_string(), self.model.to_string())];
        match self.model {
            Model::Disc => h.push(("lambda".into(), self.lambda.to_string())),
            Model::Annulus => {
                h.push(("lambda0".into(), self.lambda0.to_string()));
                h.push(("lambda1".into(), self.lambda1.to_string()));
            }
        }
        h.push(("delta_over_a".into(), self.delta_over_a.to_string()));
        h.push(("nu".into(), self.nu.to_string()));
        if let Some(g) = self.shear_modulus {
            h.push(("shear_modulus".into(), g.to_string()));
        }
        h.push(("theta1".into(), self.theta1().to_string()));
        h.push(("truncation_n".into(), self.truncation_n.to_string()));
        h.push(("order_k".into(), self.order_k.to_string()));
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn partial_document_keeps_defaults() {
        let c = RunConfig::from_json(r#"{"lambda": 0.3, "grid": {"points": 50}}"#).unwrap();
        assert_eq!(c.lambda, 0.3);
        assert_eq!(c.grid.points, 50);
        assert_eq!(c.grid.sif_points, 61);
        assert_eq!(c.truncation_n, DEFAULT_N);
    }

    #[test]
    fn unknown_field_rejected() {
        let e = RunConfig::from_json(r#"{"lamda": 0.3}"#).unwrap_err();
        assert!(e.message.contains("lamda"));
    }

    #[test]
    fn rejects_bad_geometry() {
        for (json, field) in [
            (r#"{"lambda": 1.0}"#, "lambda"),
            (r#"{"lambda": 0.0}"#, "lambda"),
            (r#"{"model": "annulus", "lambda0": 0.5, "lambda1": 0.5}"#, "lambda0"),
            (r#"{"delta_over_a": 0.0}"#, "delta_over_a"),
            (r#"{"delta_over_a": -1.0}"#, "delta_over_a"),
            (r#"{"nu": 0.5}"#, "nu"),
        ] {
            let e = RunConfig::from_json(json).unwrap().validate().unwrap_err();
            assert_eq!(e.field, field, "{json}");
        }
    }

    #[test]
    fn overrides_win() {
        let mut c = RunConfig::from_json(r#"{"lambda": 0.3, "truncation_n": 10}"#).unwrap();
        c.apply(&Overrides {
            lambda: Some(0.6),
            truncation_n: Some(20),
            output_format: Some(OutputFormat::Json),
            ..Overrides::default()
        });
        assert_eq!((c.lambda, c.truncation_n), (0.6, 20));
        assert_eq!(c.output_format, OutputFormat::Json);
        assert_eq!(c.delta_over_a, 0.05);
    }

    #[test]
    fn theta1_from_modulus() {
        let c = RunConfig {
            shear_modulus: Some(2.0),
            nu: 0.25,
            ..RunConfig::default()
        };
        assert_eq!(c.theta1(), 0.375);
        assert_eq!(RunConfig::default().theta1(), 1.0);
    }
}
