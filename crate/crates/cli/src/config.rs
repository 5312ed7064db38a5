//! Experiment configuration: a flat JSON object whose keys are the field
//! names below. Missing keys take the defaults; command-line flags override
//! file values.

use std::path::{Path, PathBuf};

use mesoent_core::ModelParams;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub epsilon: f64,
    pub temperature: f64,
    pub gamma: f64,
    pub squeeze_r: f64,
    pub t_max: f64,
    /// Number of grid intervals; curves carry `t_steps + 1` samples.
    pub t_steps: usize,
    pub gamma_list: Vec<f64>,
    pub temperature_list: Vec<f64>,
    /// Curve: CSV file (stdout when absent). Sweeps: output directory.
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            epsilon: 1.0,
            temperature: 0.1,
            gamma: 0.5,
            squeeze_r: 1.0,
            t_max: 5.0,
            t_steps: 500,
            gamma_list: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            temperature_list: vec![0.1, 0.5, 1.0],
            output: None,
        }
    }
}

/// Flag values that replace file values when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub epsilon: Option<f64>,
    pub temperature: Option<f64>,
    pub gamma: Option<f64>,
    pub squeeze_r: Option<f64>,
    pub t_max: Option<f64>,
    pub t_steps: Option<usize>,
    pub gamma_list: Option<Vec<f64>>,
    pub temperature_list: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
}

fn config_error(field: &str, reason: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.to_string(),
        reason: reason.into(),
    }
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| config_error("<file>", e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error("<file>", format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// File (if any) then flags, on top of the defaults.
    pub fn load(path: Option<&Path>, overrides: Overrides) -> Result<Self, CliError> {
        let base = match path {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        Ok(base.with_overrides(overrides))
    }

    pub fn with_overrides(mut self, o: Overrides) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $(if let Some(v) = o.$f { self.$f = v; })* };
        }
        take!(epsilon, temperature, gamma, squeeze_r, t_max, t_steps, gamma_list, temperature_list);
        if o.output.is_some() {
            self.output = o.output;
        }
        self
    }

    fn check_grid(&self) -> Result<(), CliError> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(config_error("t_max", format!("must be positive, got {}", self.t_max)));
        }
        if self.t_steps == 0 {
            return Err(config_error("t_steps", "must be at least 1"));
        }
        if !self.squeeze_r.is_finite() {
            return Err(config_error("squeeze_r", format!("must be finite, got {}", self.squeeze_r)));
        }
        Ok(())
    }

    /// Model parameters at the given `(T, γ)`, with failures attributed to `field`.
    pub fn params_at(&self, temperature: f64, gamma: f64, field: &str) -> Result<ModelParams, CliError> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(config_error("epsilon", format!("must be positive, got {}", self.epsilon)));
        }
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(config_error(
                field,
                format!("temperature must be positive, got {temperature}; the mode map contracts at T = 0"),
            ));
        }
        if !(0.0..=ModelParams::MAX_GAMMA).contains(&gamma) {
            return Err(config_error(
                field,
                format!("gamma = {gamma} outside [0, 1/2]: the dissipator would not be completely positive"),
            ));
        }
        ModelParams::new(self.epsilon, temperature, gamma).map_err(|e| config_error(field, e.to_string()))
    }

    /// Validated parameters for a single curve.
    pub fn curve_params(&self) -> Result<ModelParams, CliError> {
        self.check_grid()?;
        // validate T before γ so each field is reported under its own name
        self.params_at(self.temperature, 0.0, "temperature")?;
        self.params_at(self.temperature, self.gamma, "gamma")
    }

    pub fn gamma_sweep_params(&self) -> Result<Vec<ModelParams>, CliError> {
        self.check_grid()?;
        if self.gamma_list.is_empty() {
            return Err(config_error("gamma_list", "must not be empty"));
        }
        self.params_at(self.temperature, 0.0, "temperature")?;
        self.gamma_list
            .iter()
            .map(|&g| self.params_at(self.temperature, g, "gamma_list"))
            .collect()
    }

    pub fn temperature_sweep_params(&self) -> Result<Vec<ModelParams>, CliError> {
        self.check_grid()?;
        if self.temperature_list.is_empty() {
            return Err(config_error("temperature_list", "must not be empty"));
        }
        self.temperature_list
            .iter()
            .map(|&t| self.params_at(t, self.gamma, "temperature_list"))
            .collect()
    }

    /// `t_k = t_max·k/t_steps`, `k = 0..=t_steps`.
    pub fn time_grid(&self) -> Vec<f64> {
        (0..=self.t_steps)
            .map(|k| self.t_max * k as f64 / self.t_steps as f64)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_keys() {
        let c = ExperimentConfig::from_json_str(r#"{"gamma": 0.3}"#).unwrap();
        assert_eq!(c.gamma, 0.3);
        assert_eq!(c.t_steps, 500);
        assert_eq!(c.temperature_list, vec![0.1, 0.5, 1.0]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_json_str(r#"{"gama": 0.3}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let c = ExperimentConfig::from_json_str(r#"{"gamma": 0.3, "t_max": 2}"#)
            .unwrap()
            .with_overrides(Overrides {
                gamma: Some(0.1),
                ..Default::default()
            });
        assert_eq!((c.gamma, c.t_max), (0.1, 2.0));
    }

    #[test]
    fn errors_name_the_field() {
        let c = ExperimentConfig {
            gamma: 0.6,
            ..Default::default()
        };
        match c.curve_params() {
            Err(CliError::Config { field, .. }) => assert_eq!(field, "gamma"),
            other => panic!("{other:?}"),
        }
        let c = ExperimentConfig {
            temperature_list: vec![0.5, 0.0],
            ..Default::default()
        };
        match c.temperature_sweep_params() {
            Err(CliError::Config { field, reason }) => {
                assert_eq!(field, "temperature_list");
                assert!(reason.contains("T = 0"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grid_has_endpoints() {
        let c = ExperimentConfig {
            t_max: 1.0,
            t_steps: 4,
            ..Default::default()
        };
        assert_eq!(c.time_grid(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
