use std::net::SocketAddr;
use std::path::PathBuf;

use thiserror::Error;

pub const DEFAULT_LISTEN: &str = "127.0.0.1:8080";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    pub snapshots: Vec<PathBuf>,
    /// Directory of UI assets served for any non-API path.
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("at least one snapshot path is required")]
    NoSnapshots,
    #[error("listen port must be in 1-65535")]
    PortZero,
}

impl ServiceConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.snapshots.is_empty() {
            return Err(ConfigError::NoSnapshots);
        }
        if self.listen.port() == 0 {
            return Err(ConfigError::PortZero);
        }
        Ok(())
    }
}
