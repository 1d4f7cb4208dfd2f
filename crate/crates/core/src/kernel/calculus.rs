//! Total τ-derivative over the generator roster.

use super::expr::Expr;
use super::generator::{Kind, Registry};
use super::KernelError;

/// d/dτ by the graded chain rule, `Σ (∂_r F/∂g) ġ`.
///
/// Coordinates, velocities and evolution/transformation parameters advance
/// one derivative order; constants and momenta are τ-independent here.
pub fn tau_derivative(f: &Expr, registry: &Registry) -> Result<Expr, KernelError> {
    let mut out = Expr::zero();
    for id in f.generators() {
        let info = registry.info(id);
        let dot = match info.kind {
            Kind::Constant | Kind::Momentum => continue,
            // the evolution parameter itself
            Kind::Parameter if registry.velocity(id, 1).is_none() => Expr::one(),
            _ => {
                let next = registry
                    .derivative_of(id)
                    .ok_or(KernelError::OrderExceeded { generator: id })?;
                Expr::gen(registry.gen(next))
            }
        };
        let partial = f.derive_right(registry.gen(id));
        out = out.add(&partial.mul(&dot));
    }
    Ok(out)
}
