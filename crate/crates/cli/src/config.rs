use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vcoalg::finspace::Limits;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
#[derive(Default)]
pub struct Config {
    pub limits: Limits,
    pub ball: BallDefaults,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BallDefaults {
    pub g: f64,
    pub factor: f64,
    pub lo: f64,
    pub hi: f64,
    /// CSV sampling step and SVG resolution, in seconds.
    pub step: f64,
    /// Seed for the perturbations of `ball stability`.
    pub seed: u64,
}

impl Default for BallDefaults {
    fn default() -> Self {
        BallDefaults {
            g: 9.8,
            factor: 0.5,
            lo: 0.5,
            hi: 0.7,
            step: vcoalg::hybrid::DEFAULT_STEP,
            seed: 0,
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config, CliError> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the effective configuration's TOML rendering.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }
}
