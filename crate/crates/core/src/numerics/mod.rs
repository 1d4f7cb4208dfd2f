//! Numerical evolution over a finite Grassmann algebra.

pub mod grassmann;
pub mod integrate;

pub use grassmann::GrassmannValue;
pub use integrate::{integrate, Curve, IntegrateConfig, Trajectory, TrajectoryState};
