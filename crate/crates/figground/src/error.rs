use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Activations left the finite range during training.
    #[error("training diverged to non-finite activations")]
    TrainingDiverged,

    /// Malformed text input (config, corpus, snapshot, ...).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Structurally valid input that does not fit the request.
    #[error("data error: {0}")]
    Data(String),

    #[error("io error: {0}")]
    Io(String),
}
