//! Total differential equations, integrability closure and the canonical
//! action.
//!
//! A one-form is stored as `Σ_α c_α dt_α` with every differential to the
//! right of its coefficient. Differentials `dt_α` carry the parity of `t_α`.
//!
//! Sign conventions (fixed once, here):
//! * regular coordinate:  `dq = ∂_l H′_α/∂p dt_α`
//! * regular momentum:    `dp = s ∂_l H′_α/∂q dt_α`, `s = −1` for even `q`,
//!   `+1` for odd `q`
//! * parameter momentum:  `dp_β = +∂_l H′_α/∂t_β dt_α` (including `p^(τ)`)
//! * parameter:           `dt_β` is its own leg
//!
//! Total variation is the graded chain rule `dF = Σ_z (∂_r F/∂z) dz`.

mod action;
mod closure;
mod reduce;

pub use action::{action_integrand, recover_action, ActionRecovery};
pub use closure::{closure, closure_with_order, ClosureLedger, Constraint, Event, Origin};
pub use reduce::{reduce, Reduction};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::frontend::Model;
use crate::kernel::{Expr, GenId, Kind, Monomial, Parity, Scalar};
use crate::legendre::{HamiltonianSet, MomentumTable};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OneForm {
    legs: BTreeMap<GenId, Expr>,
}

impl OneForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn leg(id: GenId, coefficient: Expr) -> Self {
        let mut f = Self::zero();
        f.add_leg(id, coefficient);
        f
    }

    pub fn add_leg(&mut self, id: GenId, coefficient: Expr) {
        let sum = self.coefficient(id).add(&coefficient);
        if sum.is_zero() {
            self.legs.remove(&id);
        } else {
            self.legs.insert(id, sum);
        }
    }

    pub fn coefficient(&self, id: GenId) -> Expr {
        self.legs.get(&id).cloned().unwrap_or_default()
    }

    pub fn legs(&self) -> impl Iterator<Item = (GenId, &Expr)> {
        self.legs.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        let mut out = self.clone();
        for (id, c) in other.legs() {
            out.add_leg(id, c.clone());
        }
        out
    }

    /// `a · (Σ c_α dt_α) = Σ (a c_α) dt_α`.
    pub fn left_mul(&self, a: &Expr) -> OneForm {
        let mut out = OneForm::zero();
        for (id, c) in self.legs() {
            out.add_leg(id, a.mul(c));
        }
        out
    }

    pub fn map(&self, mut f: impl FnMut(&Expr) -> Result<Expr>) -> Result<OneForm> {
        let mut out = OneForm::zero();
        for (id, c) in self.legs() {
            out.add_leg(id, f(c)?);
        }
        Ok(out)
    }

    /// Replace determined legs by their one-forms.
    pub fn resolve(&self, determined: &BTreeMap<GenId, OneForm>) -> OneForm {
        let mut out = OneForm::zero();
        for (id, c) in self.legs() {
            match determined.get(&id) {
                Some(form) => out = out.add(&form.left_mul(c)),
                None => out.add_leg(id, c.clone()),
            }
        }
        out
    }

    pub fn equals(&self, other: &OneForm) -> bool {
        let ids: BTreeSet<GenId> = self.legs.keys().chain(other.legs.keys()).copied().collect();
        ids.into_iter()
            .all(|id| self.coefficient(id).equals(&other.coefficient(id)))
    }

    /// Rendered as `c1*dtau + c2*de`, legs in the given order.
    pub fn render(&self, model: &Model, order: &[GenId]) -> String {
        let mut parts = Vec::new();
        for &id in order {
            let c = self.coefficient(id);
            if c.is_zero() {
                continue;
            }
            let d = format!("d{}", model.name_of(id));
            let body = model.render(&c);
            parts.push(match c.as_scalar() {
                Some(s) if s.is_one() => d,
                Some(s) if (-&s).is_one() => format!("-{d}"),
                _ if c.num().len() > 1 || !c.is_polynomial() => format!("({body})*{d}"),
                _ => format!("{body}*{d}"),
            });
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {p}")),
            }
        }
        out
    }
}

/// Equations of motion as one-forms over the parameters.
#[derive(Clone, Debug)]
pub struct Tdes {
    /// τ first, then the coordinates of constrained momenta.
    pub legs: Vec<GenId>,
    /// `dz` for every phase-space generator, legs unresolved.
    pub forms: BTreeMap<GenId, OneForm>,
    /// Legs fixed by integrability, each in terms of the remaining legs.
    pub determined: BTreeMap<GenId, OneForm>,
}

impl Tdes {
    pub fn tau(&self) -> GenId {
        self.legs[0]
    }

    /// `dz` with determined differentials substituted.
    pub fn form(&self, z: GenId) -> Option<OneForm> {
        self.forms.get(&z).map(|f| f.resolve(&self.determined))
    }

    /// Legs still free after closure.
    pub fn free_legs(&self) -> Vec<GenId> {
        self.legs
            .iter()
            .copied()
            .filter(|l| !self.determined.contains_key(l))
            .collect()
    }

    /// Fix `leg` to `form`, keeping every stored determination resolved.
    pub(crate) fn determine(&mut self, leg: GenId, form: OneForm) {
        let single = BTreeMap::from([(leg, form.clone())]);
        for f in self.determined.values_mut() {
            *f = f.resolve(&single);
        }
        self.determined.insert(leg, form);
    }
}

fn lgen(model: &Model, id: GenId) -> crate::kernel::Gen {
    model.gen(id)
}

pub fn build_tdes(model: &Model, table: &MomentumTable, hs: &HamiltonianSet) -> Tdes {
    let legs = hs.parameters();
    let mut forms = BTreeMap::new();
    let members = &hs.members;

    for &t in &legs {
        forms.insert(t, OneForm::leg(t, Expr::one()));
        let p = model.registry.momentum(t).expect("parameter momentum");
        let mut f = OneForm::zero();
        for m in members {
            f.add_leg(m.parameter, m.expr.derive_left(lgen(model, t)));
        }
        forms.insert(p, f);
    }
    for e in table.solved() {
        let (q, p) = (e.coordinate, e.momentum);
        let mut dq = OneForm::zero();
        let mut dp = OneForm::zero();
        let sign = match model.registry.info(q).parity {
            Parity::Even => Scalar::int(-1),
            Parity::Odd => Scalar::one(),
        };
        for m in members {
            dq.add_leg(m.parameter, m.expr.derive_left(lgen(model, p)));
            dp.add_leg(m.parameter, m.expr.derive_left(lgen(model, q)).scale(&sign));
        }
        forms.insert(q, dq);
        forms.insert(p, dp);
    }
    Tdes {
        legs,
        forms,
        determined: BTreeMap::new(),
    }
}

/// `dF = Σ_z (∂_r F/∂z) dz` over the phase-space generators of `F`.
pub fn total_variation(model: &Model, tdes: &Tdes, f: &Expr) -> Result<OneForm> {
    let mut out = OneForm::zero();
    for id in f.generators() {
        if model.registry.info(id).kind == Kind::Constant {
            continue;
        }
        let dz = tdes.form(id).ok_or_else(|| {
            Error::Internal(format!("{} has no equation of motion", model.name_of(id)))
        })?;
        let partial = f.derive_right(model.gen(id));
        out = out.add(&dz.left_mul(&partial));
    }
    Ok(out)
}

/// Independent evaluation of `dF` for polynomial `F`: for each monomial
/// `a_1 … a_k`, replace one factor at a time by its one-form in place and
/// carry the differential to the right through the trailing factors.
pub fn variation_by_leibniz(model: &Model, tdes: &Tdes, f: &Expr) -> Result<OneForm> {
    if !f.is_polynomial() {
        return Err(Error::Unsupported(
            "the Leibniz audit handles polynomial expressions only".into(),
        ));
    }
    let mut out = OneForm::zero();
    for (mono, coeff) in f.num().terms() {
        let factors = expand_factors(mono);
        for i in 0..factors.len() {
            let z = factors[i];
            if model.registry.info(z).kind == Kind::Constant {
                continue;
            }
            let dz = tdes.form(z).ok_or_else(|| {
                Error::Internal(format!("{} has no equation of motion", model.name_of(z)))
            })?;
            let product = |ids: &[GenId]| {
                ids.iter()
                    .fold(Expr::one(), |acc, &g| acc.mul(&Expr::gen(model.gen(g))))
            };
            let head = product(&factors[..i]).scale(coeff);
            let tail = product(&factors[i + 1..]);
            let tail_odd = tail.parity() == Some(Parity::Odd);
            for (leg, c) in dz.legs() {
                let leg_odd = model.registry.info(leg).parity.is_odd();
                let mut term = head.mul(c).mul(&tail);
                if leg_odd && tail_odd {
                    term = term.neg();
                }
                out.add_leg(leg, term);
            }
        }
    }
    Ok(out)
}

fn expand_factors(m: &Monomial) -> Vec<GenId> {
    // the canonical monomial is (even part)(odd part); even factors commute
    let mut v = Vec::new();
    for &(g, e) in &m.even {
        v.extend(std::iter::repeat_n(g, e as usize));
    }
    v.extend(m.odd.iter().copied());
    v
}

#[cfg(test)]
mod tests;
