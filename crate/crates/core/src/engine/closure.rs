//! The integrability loop: vary every active member, fix differentials that
//! the variations determine, and promote what does not reduce to new
//! constraints until a pass adds nothing.

use std::collections::BTreeMap;

use super::reduce::reduce;
use super::{total_variation, OneForm, Tdes};
use crate::error::{Error, Result};
use crate::frontend::Model;
use crate::kernel::{Expr, GenId, Kind, Parity, Poly};
use crate::legendre::HamiltonianSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// `H′_0 = p^(τ) + H_0`; varied but never used to reduce.
    Hamiltonian,
    Primary,
    /// Generated by the variation of the named member.
    Secondary {
        source: String,
    },
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub name: String,
    pub expr: Expr,
    pub origin: Origin,
    /// Members sharing a group came from one declaration (e.g. `H3_0..H3_3`).
    pub group: usize,
}

#[derive(Clone, Debug)]
pub enum Event {
    DeterminedDifferential {
        pass: usize,
        source: String,
        leg: GenId,
        form: OneForm,
    },
    NewConstraint {
        pass: usize,
        name: String,
        expr: Expr,
        source: String,
        leg: GenId,
    },
    Reduced {
        pass: usize,
        source: String,
        /// Per leg: `(constraint name, left multiplier)` with nonzero multipliers.
        witness: Vec<(GenId, Vec<(String, Expr)>)>,
    },
    IdenticallyZero {
        pass: usize,
        source: String,
    },
    /// Non-τ legs that did not reduce yet; revisited in the next pass.
    Pending {
        pass: usize,
        source: String,
        legs: Vec<GenId>,
    },
}

impl Event {
    pub fn pass(&self) -> usize {
        match self {
            Event::DeterminedDifferential { pass, .. }
            | Event::NewConstraint { pass, .. }
            | Event::Reduced { pass, .. }
            | Event::IdenticallyZero { pass, .. }
            | Event::Pending { pass, .. } => *pass,
        }
    }

    pub fn source(&self) -> &str {
        match self {
            Event::DeterminedDifferential { source, .. }
            | Event::NewConstraint { source, .. }
            | Event::Reduced { source, .. }
            | Event::IdenticallyZero { source, .. }
            | Event::Pending { source, .. } => source,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClosureLedger {
    pub events: Vec<Event>,
    /// `H′_0` first, then primaries, then secondaries in order of discovery.
    pub members: Vec<Constraint>,
    pub passes: usize,
    /// Side conditions assumed while solving for differentials.
    pub side_conditions: Vec<Expr>,
}

impl ClosureLedger {
    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.members.iter().find(|c| c.name == name)
    }

    /// Everything except `H′_0`.
    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.members
            .iter()
            .filter(|c| c.origin != Origin::Hamiltonian)
    }

    pub fn primaries(&self) -> impl Iterator<Item = &Constraint> {
        self.members.iter().filter(|c| c.origin == Origin::Primary)
    }

    pub fn secondaries(&self) -> impl Iterator<Item = &Constraint> {
        self.members
            .iter()
            .filter(|c| matches!(c.origin, Origin::Secondary { .. }))
    }

    /// Reduce modulo every constraint except `H′_0`.
    pub fn reduce(&self, f: &Expr) -> super::Reduction {
        let basis: Vec<Expr> = self.constraints().map(|c| c.expr.clone()).collect();
        reduce(f, &basis)
    }
}

pub fn closure(model: &Model, hs: &HamiltonianSet, tdes: &mut Tdes) -> Result<ClosureLedger> {
    let groups = member_groups(hs).len();
    closure_with_order(model, hs, tdes, &(0..groups).collect::<Vec<_>>())
}

/// Member names grouped by declaration, `H0` first.
fn member_groups(hs: &HamiltonianSet) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut last = String::new();
    for (i, m) in hs.members.iter().enumerate() {
        let stem = m.name.split('_').next().unwrap_or(&m.name).to_string();
        if i == 0 || stem != last {
            groups.push(Vec::new());
            last = stem;
        }
        groups.last_mut().unwrap().push(i);
    }
    groups
}

/// Closure with the initial members processed group by group in `order`
/// (a permutation of the declaration groups, `H0` being group 0).
pub fn closure_with_order(
    model: &Model,
    hs: &HamiltonianSet,
    tdes: &mut Tdes,
    order: &[usize],
) -> Result<ClosureLedger> {
    let groups = member_groups(hs);
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..groups.len()).collect::<Vec<_>>() {
        return Err(Error::Internal(format!(
            "processing order must permute 0..{}",
            groups.len()
        )));
    }
    let mut active: Vec<Constraint> = Vec::new();
    for &g in order {
        for &i in &groups[g] {
            let m = &hs.members[i];
            active.push(Constraint {
                name: m.name.clone(),
                expr: m.expr.clone(),
                origin: if i == 0 {
                    Origin::Hamiltonian
                } else {
                    Origin::Primary
                },
                group: g,
            });
        }
    }
    let tau = tdes.tau();
    let cap = model
        .registry
        .ids()
        .filter(|&id| {
            !matches!(
                model.registry.info(id).kind,
                Kind::Velocity | Kind::Constant
            )
        })
        .count();
    let mut next_label = hs.next_label;
    let mut next_group = groups.len();
    let mut events = Vec::new();
    let mut side_conditions: Vec<Expr> = Vec::new();
    let mut pass = 0;

    loop {
        pass += 1;
        if pass > cap {
            return Err(Error::NonClosing { passes: cap });
        }

        // Determination: each member may fix one free non-τ leg whose
        // coefficient is an invertible constant.
        let mut proposals: BTreeMap<GenId, (String, OneForm)> = BTreeMap::new();
        let mut determined_sources = Vec::new();
        for c in &active {
            let dv = total_variation(model, tdes, &c.expr)?;
            let Some((leg, coeff)) = dv.legs().find(|&(leg, coeff)| {
                leg != tau
                    && !tdes.determined.contains_key(&leg)
                    && invertible_constant(model, coeff)
            }) else {
                continue;
            };
            let inv = Expr::one().div(coeff)?.neg();
            let mut form = OneForm::zero();
            for (other, c2) in dv.legs() {
                if other != leg {
                    form.add_leg(other, inv.mul(c2));
                }
            }
            if let Some((prev_source, prev)) = proposals.get(&leg) {
                if !prev.equals(&form) {
                    return Err(Error::Inconsistent(format!(
                        "{} and {} determine d{} differently",
                        prev_source,
                        c.name,
                        model.name_of(leg)
                    )));
                }
                continue;
            }
            if coeff.as_scalar().is_none() {
                let cond = Expr::from_poly(coeff.num().clone());
                if !side_conditions.iter().any(|s| s.equals(&cond)) {
                    side_conditions.push(cond);
                }
            }
            proposals.insert(leg, (c.name.clone(), form));
        }
        for (leg, (source, form)) in proposals {
            let resolved = form.resolve(&tdes.determined);
            tdes.determine(leg, resolved.clone());
            determined_sources.push(source.clone());
            events.push(Event::DeterminedDifferential {
                pass,
                source,
                leg,
                form: resolved,
            });
        }
        // a leg fixed in terms of itself would be circular
        for (leg, form) in &tdes.determined {
            if !form.coefficient(*leg).is_zero() {
                return Err(Error::Inconsistent(format!(
                    "d{} is determined in terms of itself",
                    model.name_of(*leg)
                )));
            }
        }

        // Classification against the constraints active at the start of
        // the classification phase.
        let basis: Vec<Expr> = active
            .iter()
            .filter(|c| c.origin != Origin::Hamiltonian)
            .map(|c| c.expr.clone())
            .collect();
        let basis_names: Vec<String> = active
            .iter()
            .filter(|c| c.origin != Origin::Hamiltonian)
            .map(|c| c.name.clone())
            .collect();
        let mut fresh: Vec<(Expr, String, GenId)> = Vec::new();
        let mut pending: Vec<(Expr, String, GenId)> = Vec::new();
        for c in &active {
            let dv = total_variation(model, tdes, &c.expr)?;
            if dv.is_zero() {
                if !determined_sources.contains(&c.name) {
                    events.push(Event::IdenticallyZero {
                        pass,
                        source: c.name.clone(),
                    });
                }
                continue;
            }
            let mut witness = Vec::new();
            let mut open = Vec::new();
            for (leg, coeff) in dv.legs() {
                let r = reduce(coeff, &basis);
                if r.reduced() {
                    let terms = basis_names
                        .iter()
                        .zip(r.multipliers)
                        .filter(|(_, a)| !a.is_zero())
                        .map(|(n, a)| (n.clone(), a))
                        .collect();
                    witness.push((leg, terms));
                } else {
                    open.push((leg, r.remainder));
                }
            }
            if open.is_empty() {
                events.push(Event::Reduced {
                    pass,
                    source: c.name.clone(),
                    witness,
                });
                continue;
            }
            if let Some((_, rem)) = open.iter().find(|(leg, _)| *leg == tau) {
                fresh.push((rem.clone(), c.name.clone(), tau));
            } else {
                events.push(Event::Pending {
                    pass,
                    source: c.name.clone(),
                    legs: open.iter().map(|(l, _)| *l).collect(),
                });
                for (leg, rem) in open {
                    pending.push((rem, c.name.clone(), leg));
                }
            }
        }

        let progressed = !determined_sources.is_empty() || !fresh.is_empty();
        if !progressed {
            if pending.is_empty() {
                break;
            }
            fresh = pending;
        }
        let mut added = false;
        for (rem, source, leg) in fresh {
            let expr = normalize_constraint(&rem);
            if let Some(s) = expr.as_scalar() {
                if !s.is_zero() {
                    return Err(Error::Inconsistent(format!(
                        "the variation of {source} requires {} = 0",
                        s
                    )));
                }
                continue;
            }
            // skip anything the constraints found so far already cover
            let mut current: Vec<Expr> = active
                .iter()
                .filter(|c| c.origin != Origin::Hamiltonian)
                .map(|c| c.expr.clone())
                .collect();
            current.extend(events.iter().filter_map(|e| match e {
                Event::NewConstraint { pass: p, expr, .. } if *p == pass => Some(expr.clone()),
                _ => None,
            }));
            let r = reduce(&expr, &current);
            if r.reduced() {
                continue;
            }
            let expr = normalize_constraint(&r.remainder);
            let name = format!("H{next_label}");
            next_label += 1;
            events.push(Event::NewConstraint {
                pass,
                name: name.clone(),
                expr: expr.clone(),
                source: source.clone(),
                leg,
            });
            added = true;
        }
        for e in events.iter().filter(|e| e.pass() == pass) {
            if let Event::NewConstraint {
                name, expr, source, ..
            } = e
            {
                active.push(Constraint {
                    name: name.clone(),
                    expr: expr.clone(),
                    origin: Origin::Secondary {
                        source: source.clone(),
                    },
                    group: next_group,
                });
                next_group += 1;
            }
        }
        if !progressed && !added {
            // pending legs reduced to nothing new; nothing left to do
            break;
        }
    }

    // members in canonical order: H0, primaries by declaration, then
    // secondaries by label
    let mut members = active;
    members.sort_by_key(|c| match &c.origin {
        Origin::Hamiltonian => (0, 0, c.name.clone()),
        Origin::Primary => (1, original_index(hs, &c.name), c.name.clone()),
        Origin::Secondary { .. } => (2, label_of(&c.name), c.name.clone()),
    });
    Ok(ClosureLedger {
        events,
        members,
        passes: pass,
        side_conditions,
    })
}

fn original_index(hs: &HamiltonianSet, name: &str) -> usize {
    hs.members
        .iter()
        .position(|m| m.name == name)
        .unwrap_or(usize::MAX)
}

fn label_of(name: &str) -> usize {
    name.trim_start_matches('H')
        .split('_')
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(usize::MAX)
}

/// Nonzero, even, and built from constants only.
fn invertible_constant(model: &Model, e: &Expr) -> bool {
    !e.is_zero()
        && e.is_polynomial()
        && e.num().len() == 1
        && e.parity() == Some(Parity::Even)
        && e.generators()
            .iter()
            .all(|&g| model.registry.info(g).kind == Kind::Constant)
}

/// Numerator only (denominators are nonvanishing), leading coefficient 1.
fn normalize_constraint(e: &Expr) -> Expr {
    let num: &Poly = e.num();
    match num.leading() {
        Some((_, c)) => {
            let inv = c.inv().expect("nonzero leading coefficient");
            Expr::from_poly(num.scale(&inv))
        }
        None => Expr::zero(),
    }
}
