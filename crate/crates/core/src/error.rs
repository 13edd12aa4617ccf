use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    /// An operator would exceed the configured per-side dimension cap.
    #[error("dimension limit exceeded: {requested} > {cap} (raise the cap or use state-update mode)")]
    DimensionLimit { requested: usize, cap: usize },

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("placement error: {0}")]
    Placement(String),

    #[error("library error: {0}")]
    Library(String),

    #[error("label error: {0}")]
    Label(String),

    #[error("unsupported gate in symbolic mode: {0}")]
    UnsupportedGate(String),

    #[error("assignment error: missing value for symbol `{0}`")]
    Assignment(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("range error: {0}")]
    Range(String),
}
