use thiserror::Error;

/// Errors raised by the construction and certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("combinatorial value overflows 63 bits: {0}")]
    Overflow(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid node set: {0}")]
    InvalidNodeSet(String),

    #[error("node index {index} out of range for {count} nodes")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree {degree} is below s - 1 = {required}")]
    DegreeTooLow { degree: usize, required: usize },

    #[error("stale direction certificate for node {node}: stored gap {stored:e}, recomputed {recomputed:e}")]
    StaleCertificate {
        node: usize,
        stored: f64,
        recomputed: f64,
    },

    #[error(
        "jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("guardrail exceeded: {0}")]
    Guardrail(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
