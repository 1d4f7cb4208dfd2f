//! Exact symbolic arithmetic over even and odd generators.

mod calculus;
mod expr;
mod generator;
mod poly;
mod scalar;

pub use calculus::tau_derivative;
pub use expr::Expr;
pub use generator::{
    Gen, GenId, GenInfo, Kind, NameStyle, Namer, Parity, Registry, RegistryNamer, MAX_ORDER,
};
pub use poly::{Monomial, Poly, Side};
pub use scalar::Scalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("division by an expression containing odd generators")]
    OddDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("binding for generator #{} has the wrong parity (expected {expected})", generator.0)]
    Grading { generator: GenId, expected: Parity },
    #[error("generator #{} has no higher τ-derivative in the roster", generator.0)]
    OrderExceeded { generator: GenId },
}
