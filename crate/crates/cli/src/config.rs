use std::path::Path;

use serde::Deserialize;
use tsallis_sep::separability::SearchOptions;

use crate::args::Common;
use crate::CliError;

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub dense_cap: Option<u64>,
    pub x_tol: Option<f64>,
    pub max_iterations: Option<usize>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Settings after merging defaults, config file and flags (flags win).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub search: SearchOptions,
    /// 0 lets the thread pool pick.
    pub jobs: usize,
}

impl Settings {
    pub fn resolve(common: &Common) -> Result<Self, CliError> {
        let file = match &common.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let defaults = SearchOptions::default();
        let search = SearchOptions {
            x_tol: common.x_tol.or(file.x_tol).unwrap_or(defaults.x_tol),
            max_iterations: common
                .max_iterations
                .or(file.max_iterations)
                .unwrap_or(defaults.max_iterations),
            dense_cap: common.dense_cap.or(file.dense_cap).unwrap_or(defaults.dense_cap),
        };
        if !(search.x_tol > 0.0 && search.x_tol.is_finite()) {
            return Err(CliError::Usage(format!("x_tol must be positive, got {}", search.x_tol)));
        }
        Ok(Self {
            search,
            jobs: common.jobs.or(file.jobs).unwrap_or(0),
        })
    }
}
