use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("singular matrix in {op}")]
    Singular { op: &'static str },

    #[error("numerical failure in {op}: {detail}")]
    Numeric { op: &'static str, detail: String },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("generator does not close on the observable span: residual {residual:.3e}, identity leak {identity_leak:.3e}")]
    ClosureViolation { residual: f64, identity_leak: f64 },
}
