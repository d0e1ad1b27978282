use thiserror::Error;

use crate::arrangement::AffineFlat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    /// Orbit closure grew past the configured cap.
    #[error("resource cap exceeded: orbit larger than {limit}")]
    OrbitCap { limit: usize },

    /// Flat enumeration grew past the configured cap. Carries what was
    /// found so far and the unexpanded frontier.
    #[error("resource cap exceeded: more than {limit} flats ({found} kept, {} on frontier)", frontier.len())]
    FlatCap {
        limit: usize,
        found: usize,
        frontier: Vec<AffineFlat>,
    },

    /// A check that holds by theorem failed; indicates a bug.
    #[error("verification failure: {0}")]
    Verification(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::OrbitCap { .. } | Error::FlatCap { .. } | Error::Resource(_)
        )
    }
}
