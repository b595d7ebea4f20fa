use std::path::{Path, PathBuf};

use hyperturan::design::DesignCaps;
use hyperturan::oracle::SearchBudget;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub budget: SearchBudget,
    pub design_caps: DesignCaps,
    /// Largest kernel order handed to the oracle by `build cone`.
    pub kernel_oracle_cap: usize,
    pub deterministic: bool,
    pub output_dir: PathBuf,
    pub format: Format,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            budget: SearchBudget::default(),
            design_caps: DesignCaps::default(),
            kernel_oracle_cap: 8,
            deterministic: true,
            output_dir: PathBuf::from("hyperturan-results"),
            format: Format::Text,
        }
    }
}

pub const ENV_NODE_LIMIT: &str = "HYPERTURAN_NODE_LIMIT";
pub const ENV_TIME_LIMIT_MS: &str = "HYPERTURAN_TIME_LIMIT_MS";
pub const ENV_THREADS: &str = "HYPERTURAN_THREADS";

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
                    path: path.to_path_buf(),
                    source,
                })?;
                Self::parse(&text).map_err(|message| ConfigError::Parse {
                    path: path.to_path_buf(),
                    message,
                })?
            }
            None => Config::default(),
        };
        config.apply_env(|key| std::env::var(key).ok())?;
        config.budget.deterministic = config.deterministic;
        config.validate()?;
        Ok(config)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// Budget overrides only; semantic parameters always come from flags.
    pub fn apply_env(&mut self, get: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        let num = |key: &str| -> Result<Option<u64>, ConfigError> {
            get(key)
                .map(|v| {
                    v.trim().parse::<u64>().map_err(|_| {
                        ConfigError::Invalid(format!("{key} must be a positive integer, got `{v}`"))
                    })
                })
                .transpose()
        };
        if let Some(v) = num(ENV_NODE_LIMIT)? {
            self.budget.node_limit = Some(v);
        }
        if let Some(v) = num(ENV_TIME_LIMIT_MS)? {
            self.budget.time_limit_ms = Some(v);
        }
        if let Some(v) = num(ENV_THREADS)? {
            self.budget.threads = v as usize;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.budget
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let caps = &self.design_caps;
        if [
            caps.backtrack_r3,
            caps.backtrack_r4,
            caps.backtrack_other,
            caps.max_prime,
            self.kernel_oracle_cap,
        ]
        .contains(&0)
            || caps.node_limit == 0
        {
            return Err(ConfigError::Invalid("all caps must be positive".into()));
        }
        Ok(())
    }
}
