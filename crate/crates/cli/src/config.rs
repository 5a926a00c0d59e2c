//! Configuration document: a single JSON object with top-level keys rank,
//! mode, singularities, mass, boundary_radius. Unknown fields are rejected;
//! mass defaults to zeros and boundary_radius to a sphere enclosing every
//! singularity. The boundary sphere is centered at the origin, so configs
//! must be authored in those coordinates.

use callias_core::model::{
    validate_config, ConfigMode, MassData, MonopoleConfig, SingularPoint, WeightVector,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularityDoc {
    pub position: [f64; 3],
    pub weights: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub rank: usize,
    pub mode: ConfigMode,
    #[serde(default)]
    pub singularities: Vec<SingularityDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_radius: Option<f64>,
}

/// Parse and schema errors, distinguished from the numerical ones; both map
/// to exit code 2.
#[derive(Debug)]
pub enum ConfigError {
    Parse(String),
    Schema(String),
    Validation(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Parse(m) => write!(f, "parse error: {m}"),
            ConfigError::Schema(m) => write!(f, "schema error: {m}"),
            ConfigError::Validation(m) => write!(f, "validation error: {m}"),
        }
    }
}

impl ConfigDoc {
    pub fn resolve(&self) -> Result<MonopoleConfig, ConfigError> {
        for (i, s) in self.singularities.iter().enumerate() {
            if s.weights.len() != self.rank {
                return Err(ConfigError::Schema(format!(
                    "singularities[{i}].weights: length {} ≠ rank {}",
                    s.weights.len(),
                    self.rank
                )));
            }
        }
        if let Some(m) = &self.mass {
            if m.len() != self.rank {
                return Err(ConfigError::Schema(format!(
                    "mass: length {} ≠ rank {}",
                    m.len(),
                    self.rank
                )));
            }
        }
        let max_dist = self
            .singularities
            .iter()
            .map(|s| (s.position[0].powi(2) + s.position[1].powi(2) + s.position[2].powi(2)).sqrt())
            .fold(0.0f64, f64::max);
        let cfg = MonopoleConfig {
            rank: self.rank,
            mode: self.mode,
            singularities: self
                .singularities
                .iter()
                .map(|s| SingularPoint {
                    position: s.position,
                    weights: WeightVector::new(s.weights.clone()),
                })
                .collect(),
            mass: MassData {
                values: self.mass.clone().unwrap_or_else(|| vec![0.0; self.rank]),
            },
            boundary_radius: self.boundary_radius.unwrap_or(2.0 * max_dist + 1.0),
        };
        let report = validate_config(&cfg);
        if !report.is_ok() {
            return Err(ConfigError::Validation(report.violations.join("; ")));
        }
        Ok(cfg)
    }
}

/// Parses a UTF-8 JSON document into a validated configuration.
pub fn parse_config(text: &str) -> Result<(ConfigDoc, MonopoleConfig), ConfigError> {
    let doc: ConfigDoc =
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let cfg = doc.resolve()?;
    Ok((doc, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_compact_config_parses() {
        let doc = r#"{"rank":1,"mode":"compact-model",
            "singularities":[{"position":[0,0,0],"weights":[1]},
                             {"position":[1,0,0],"weights":[-1]}]}"#;
        let (_, cfg) = parse_config(doc).unwrap();
        assert_eq!(cfg.rank, 1);
        assert_eq!(cfg.mass.values, vec![0.0]);
        assert!(cfg.boundary_radius > 1.0);
    }

    #[test]
    fn weight_length_mismatch_is_schema_error() {
        let doc = r#"{"rank":2,"mode":"compact-model",
            "singularities":[{"position":[0,0,0],"weights":[1]}]}"#;
        assert!(matches!(parse_config(doc), Err(ConfigError::Schema(_))));
    }

    #[test]
    fn small_boundary_is_validation_error() {
        let doc = r#"{"rank":1,"mode":"complete-with-boundary","boundary_radius":0.5,
            "mass":[1.0],
            "singularities":[{"position":[2,0,0],"weights":[1]}]}"#;
        assert!(matches!(parse_config(doc), Err(ConfigError::Validation(_))));
    }

    #[test]
    fn unknown_fields_rejected() {
        let doc = r#"{"rank":1,"mode":"compact-model","singularities":[],"extra":1}"#;
        assert!(matches!(parse_config(doc), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn round_trip_is_semantically_identical() {
        let doc = r#"{"rank":2,"mode":"complete-with-boundary",
            "singularities":[{"position":[0.1,0,0],"weights":[2,-1]}],
            "mass":[1.0,-0.5],"boundary_radius":3.0}"#;
        let (parsed, cfg) = parse_config(doc).unwrap();
        let serialized = serde_json::to_string(&parsed).unwrap();
        let (_, cfg2) = parse_config(&serialized).unwrap();
        assert_eq!(cfg, cfg2);
    }
}
