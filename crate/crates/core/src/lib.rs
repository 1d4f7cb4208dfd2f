//! Hamilton–Jacobi canonical analysis of constrained systems with commuting
//! and anticommuting variables.

pub mod analysis;
pub mod bracket;
pub mod cli;
pub mod engine;
pub mod error;
pub mod frontend;
pub mod kernel;
pub mod legendre;
pub mod numerics;
pub mod quantize;
pub mod report;
pub mod symmetry;

pub use analysis::{analyze, analyze_text, Analysis};
pub use error::{Error, Result};
