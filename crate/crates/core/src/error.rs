use thiserror::Error;

/// Errors shared across the computational modules.
///
/// `Indeterminate` is reserved for numerical decisions that fall inside the
/// declared safety margins (decay classification in the shooting method,
/// plaquette phases too close to the ±π branch cut); callers map it to a
/// dedicated exit code.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("numerical indeterminacy: {0}")]
    Indeterminate(String),

    #[error("internal consistency violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
