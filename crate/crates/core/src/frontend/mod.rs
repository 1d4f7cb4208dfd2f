//! Model description language: lexing, parsing and evaluation into kernel
//! expressions.

mod lexer;
mod model;
pub(crate) mod parser;

pub use lexer::Pos;
pub use model::{momentum_name, parse_model, Declaration, Model, INPUT_ORDER_CAP};
pub(crate) use model::{Scope, Value};
pub use parser::DeclKind;
pub(crate) use parser::{Parser, TransformHeaderKind};

use thiserror::Error;

use crate::kernel::KernelError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("undeclared identifier `{name}` at {line}:{col}")]
    Undeclared {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("division by an odd expression at {line}:{col}")]
    OddDenominator { line: usize, col: usize },
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
