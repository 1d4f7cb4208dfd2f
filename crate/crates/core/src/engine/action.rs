//! The canonical action one-form `dZ = (−H_α + p_a ∂H′_α/∂p_a) dt_α` and
//! the check that it pulls back to the original Lagrangian.

use std::collections::BTreeMap;

use super::{OneForm, Tdes};
use crate::error::Result;
use crate::frontend::Model;
use crate::kernel::{Expr, Gen, GenId};
use crate::legendre::{HamiltonianSet, MomentumTable};

/// Returns the integrand with every leg kept, and with the determined
/// differentials substituted.
pub fn action_integrand(
    model: &Model,
    table: &MomentumTable,
    hs: &HamiltonianSet,
    tdes: &Tdes,
) -> (OneForm, OneForm) {
    let mut raw = OneForm::zero();
    for m in &hs.members {
        let mut c = m.hamiltonian(model).neg();
        for e in table.solved() {
            let p = Expr::gen(model.gen(e.momentum));
            c = c.add(&p.mul(&m.expr.derive_left(model.gen(e.momentum))));
        }
        raw.add_leg(m.parameter, c);
    }
    let resolved = raw.resolve(&tdes.determined);
    (raw, resolved)
}

#[derive(Clone, Debug)]
pub struct ActionRecovery {
    /// `dZ` pulled back along `dt_α → ṫ_α dτ` with the momenta replaced by
    /// their definitions, minus `L`.
    pub off_shell_residual: Expr,
    /// Both sides evaluated on the determined differentials and solved
    /// velocities, minus each other.
    pub on_shell_residual: Expr,
}

impl ActionRecovery {
    pub fn recovered(&self) -> bool {
        self.off_shell_residual.is_zero() && self.on_shell_residual.is_zero()
    }
}

/// Rate of each leg along the curve: `τ̇ = 1`, otherwise the velocity.
fn leg_rate(model: &Model, leg: GenId) -> Expr {
    if leg == model.parameter {
        Expr::one()
    } else {
        Expr::gen(model.gen(model.velocity(leg)))
    }
}

fn pull_back(model: &Model, form: &OneForm) -> Expr {
    form.legs().fold(Expr::zero(), |acc, (leg, c)| {
        acc.add(&c.mul(&leg_rate(model, leg)))
    })
}

pub fn recover_action(
    model: &Model,
    table: &MomentumTable,
    hs: &HamiltonianSet,
    tdes: &Tdes,
) -> Result<ActionRecovery> {
    let (raw, resolved) = action_integrand(model, table, hs, tdes);

    let definitions: BTreeMap<Gen, Expr> = table
        .entries
        .iter()
        .map(|e| (model.gen(e.momentum), e.definition.clone()))
        .collect();
    let off_shell = pull_back(model, &raw)
        .substitute(&definitions)?
        .sub(&model.lagrangian);

    let mut on_shell_velocities: BTreeMap<Gen, Expr> = table
        .solved()
        .map(|e| (model.gen(e.velocity), e.solution.clone().expect("solvable")))
        .collect();
    for (&leg, form) in &tdes.determined {
        on_shell_velocities.insert(model.gen(model.velocity(leg)), pull_back(model, form));
    }
    let lhs = pull_back(model, &resolved).substitute(&on_shell_velocities)?;
    let rhs = model.lagrangian.substitute(&on_shell_velocities)?;
    Ok(ActionRecovery {
        off_shell_residual: off_shell,
        on_shell_residual: lhs.sub(&rhs),
    })
}
