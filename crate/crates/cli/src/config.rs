//! Experiment configuration: JSON file plus flag overrides; flags win.
//! Unknown keys are rejected so a typoed config cannot silently run with
//! defaults.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// The versioned default preset (also the acceptance configuration).
pub const ACCEPTANCE_PRESET: &str = include_str!("../presets/acceptance.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_version")]
    pub version: u32,
    #[serde(default = "default_t_horizon")]
    pub t_horizon: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_u_scale")]
    pub u_scale: f64,
    /// detector ε (the scan ε and the detector ε differ in the preset)
    #[serde(default = "default_detect_eps")]
    pub detect_eps: f64,
    #[serde(default = "default_detect_nu")]
    pub detect_nu: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default)]
    pub zeros_path: Option<PathBuf>,
    #[serde(default)]
    pub manifest_path: Option<PathBuf>,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_version() -> u32 {
    1
}
fn default_t_horizon() -> f64 {
    10_000.0
}
fn default_dt() -> f64 {
    0.05
}
fn default_eps() -> f64 {
    0.25
}
fn default_nu() -> f64 {
    0.4
}
fn default_sigma() -> f64 {
    0.6
}
fn default_eta() -> f64 {
    0.05
}
fn default_u_scale() -> f64 {
    200.0
}
fn default_detect_eps() -> f64 {
    0.3
}
fn default_detect_nu() -> f64 {
    0.5
}
fn default_beta() -> f64 {
    0.05
}
fn default_workers() -> usize {
    1
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str(ACCEPTANCE_PRESET).expect("preset parses")
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    /// Canonical serialization for hashing (field order is fixed by the
    /// struct definition).
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
