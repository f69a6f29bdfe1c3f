use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong while building inputs or running a computation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid price schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid pledge profile: {0}")]
    InvalidProfile(String),

    #[error("invalid equilibrium spec: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("ratio with zero optimum (cost {cost})")]
    ZeroOptimum { cost: u64 },

    #[error("horizon {horizon} exceeds the oracle bound {bound}")]
    OracleBound { horizon: u64, bound: u64 },

    #[error("enumeration limit exceeded: {0}")]
    EnumerationLimit(String),

    #[error("profile is not a competitive ratio equilibrium")]
    NotEquilibrium,

    #[error("every agent has infinite robustness; no purchase deadline exists")]
    UnboundedDeadline,

    #[error("robustness bound violated: ratio {ratio} > bound {bound} (T={active}, T^={predicted})")]
    RobustnessViolated {
        ratio: String,
        bound: String,
        active: u64,
        predicted: u64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
