//! The full symbolic pipeline on one model.

use crate::bracket::{classify_ledger, BracketTable};
use crate::engine::{
    action_integrand, build_tdes, closure, recover_action, total_variation, variation_by_leibniz,
    ActionRecovery, ClosureLedger, OneForm, Tdes,
};
use crate::error::Result;
use crate::frontend::{parse_model, Model};
use crate::legendre::{legendre, HamiltonianSet, MomentumTable};

#[derive(Clone, Debug)]
pub struct Analysis {
    pub model: Model,
    pub momenta: MomentumTable,
    pub hamiltonians: HamiltonianSet,
    pub tdes: Tdes,
    pub ledger: ClosureLedger,
    pub brackets: BracketTable,
    /// `dZ` with every leg kept.
    pub action_raw: OneForm,
    /// `dZ` with determined differentials substituted.
    pub action: OneForm,
    pub recovery: ActionRecovery,
    /// Named boolean checks, in insertion order.
    pub checks: Vec<(String, bool)>,
}

impl Analysis {
    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}

pub fn analyze_text(text: &str) -> Result<Analysis> {
    analyze(parse_model(text)?)
}

pub fn analyze(mut model: Model) -> Result<Analysis> {
    let (momenta, hamiltonians) = legendre(&mut model)?;
    let mut tdes = build_tdes(&model, &momenta, &hamiltonians);
    let ledger = closure(&model, &hamiltonians, &mut tdes)?;
    for cond in &ledger.side_conditions {
        if !model.side_conditions.iter().any(|s| s.equals(cond)) {
            model.side_conditions.push(cond.clone());
        }
    }
    let brackets = classify_ledger(&model, &ledger);
    let (action_raw, action) = action_integrand(&model, &momenta, &hamiltonians, &tdes);
    let recovery = recover_action(&model, &momenta, &hamiltonians, &tdes)?;

    let mut checks = Vec::new();
    let h0_velocity_free = true; // canonical_h0 fails otherwise
    checks.push(("h0_velocity_free".to_string(), h0_velocity_free));
    let mut closed = true;
    let mut audit = true;
    for c in &ledger.members {
        let dv = total_variation(&model, &tdes, &c.expr)?;
        closed &= dv.legs().all(|(_, coeff)| ledger.reduce(coeff).reduced());
        if c.expr.is_polynomial() {
            audit &= variation_by_leibniz(&model, &tdes, &c.expr)?.equals(&dv);
        }
    }
    checks.push(("closure_consistent".to_string(), closed));
    checks.push(("chain_rule_audit".to_string(), audit));
    checks.push(("action_recovered".to_string(), recovery.recovered()));
    if let Some(block) = &brackets.constant_block {
        checks.push((
            "constant_bracket_block_invertible".to_string(),
            crate::bracket::invert(&block.matrix).is_some(),
        ));
    }
    Ok(Analysis {
        model,
        momenta,
        hamiltonians,
        tdes,
        ledger,
        brackets,
        action_raw,
        action,
        recovery,
        checks,
    })
}
