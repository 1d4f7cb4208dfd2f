use thiserror::Error;

use crate::frontend::FrontendError;
use crate::kernel::KernelError;

/// Failure of any analysis stage after parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("unsupported model: {0}")]
    Unsupported(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("constraint closure did not terminate within {passes} passes")]
    NonClosing { passes: usize },
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parity violation: {0}")]
    Parity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
