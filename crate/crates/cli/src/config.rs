//! Effective run configuration: defaults, an optional JSON file, then flags.

use std::path::Path;

use hessemon::TrackingConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tracking: TrackingConfig,
    /// Tolerance for point comparisons in the verification checks.
    pub tolerance: f64,
    /// Distance of the Hesse-pencil and cusp-family basepoints from the strata.
    pub delta: f64,
    /// Nested strata are approached at `epsilon_ratio * delta`.
    pub epsilon_ratio: f64,
    pub global_lines: usize,
    pub local_probes: usize,
    pub random_pencils: usize,
    pub cusp_starts: usize,
    pub random_cubics: usize,
    pub property_cases: usize,
    /// Worker threads for suites; 0 picks the machine's parallelism.
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tracking: TrackingConfig::default(),
            tolerance: 1e-8,
            delta: 0.05,
            epsilon_ratio: 0.05,
            global_lines: 2,
            local_probes: 8,
            random_pencils: 20,
            cusp_starts: 20_000,
            random_cubics: 200,
            property_cases: 50,
            workers: 0,
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let cfg = match path {
            None => Config::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(p.display().to_string(), e))?;
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))?
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tolerance(mut self, tol: Option<f64>) -> Result<Self, CliError> {
        if let Some(t) = tol {
            self.tolerance = t;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.tracking.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let positive = [self.tolerance, self.delta, self.epsilon_ratio]
            .iter()
            .all(|x| *x > 0.0 && x.is_finite());
        if !positive || self.epsilon_ratio >= 1.0 {
            return Err(CliError::Usage("tolerance, delta and epsilon_ratio must be positive, epsilon_ratio < 1".into()));
        }
        if self.global_lines == 0 || self.local_probes == 0 || self.cusp_starts == 0 {
            return Err(CliError::Usage("line, probe and start counts must be positive".into()));
        }
        Ok(())
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon_ratio * self.delta
    }

    pub fn worker_count(&self) -> usize {
        if self.workers > 0 {
            self.workers
        } else {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        }
    }
}
