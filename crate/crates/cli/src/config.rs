//! Run configuration, read from the TOML file named by `--config` or by the
//! `L2DIM_CONFIG` environment variable.

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CONFIG_ENV: &str = "L2DIM_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub max_finite_group_order: usize,
    pub walk_support_bound: usize,
    pub output_format: OutputFormat,
    pub random_seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_finite_group_order: l2dim::burnside::DEFAULT_MAX_ORDER,
            walk_support_bound: l2dim::amenability::DEFAULT_SUPPORT_BOUND,
            output_format: OutputFormat::Json,
            random_seed: 0,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: Config = toml::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))?;
        if config.max_finite_group_order == 0 || config.walk_support_bound == 0 {
            return Err(CliError::Input("config: bounds must be positive".into()));
        }
        Ok(config)
    }

    /// The explicit path if given, else the environment variable, else
    /// defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let path = match path {
            Some(p) => p.to_path_buf(),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => p.into(),
                _ => return Ok(Config::default()),
            },
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        assert_eq!(Config::from_toml("").unwrap(), Config::default());
        let c = Config::from_toml("walk_support_bound = 10\noutput_format = \"text\"").unwrap();
        assert_eq!(c.walk_support_bound, 10);
        assert_eq!(c.output_format, OutputFormat::Text);
        assert!(Config::from_toml("max_finite_group_order = 0").is_err());
        assert!(Config::from_toml("colour = 1").is_err());
    }
}
