//! Legendre transform of a possibly degenerate graded Lagrangian: momenta,
//! primary constraints, the canonical Hamiltonian and the HJPDE family.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::frontend::Model;
use crate::kernel::{Expr, Gen, GenId, Kind, Parity};

#[derive(Clone, Debug)]
pub struct MomentumEntry {
    pub coordinate: GenId,
    pub velocity: GenId,
    pub momentum: GenId,
    /// `∂_r L / ∂(velocity)`.
    pub definition: Expr,
    pub solvable: bool,
    /// The velocity in terms of phase-space variables, when solvable.
    pub solution: Option<Expr>,
}

#[derive(Clone, Debug)]
pub struct MomentumTable {
    pub entries: Vec<MomentumEntry>,
    /// Pivots divided by while solving for velocities (assumed nonzero).
    pub side_conditions: Vec<Expr>,
}

impl MomentumTable {
    pub fn entry(&self, coordinate: GenId) -> Option<&MomentumEntry> {
        self.entries.iter().find(|e| e.coordinate == coordinate)
    }

    pub fn solved(&self) -> impl Iterator<Item = &MomentumEntry> {
        self.entries.iter().filter(|e| e.solvable)
    }

    pub fn constrained(&self) -> impl Iterator<Item = &MomentumEntry> {
        self.entries.iter().filter(|e| !e.solvable)
    }
}

/// One member `H′_α = p_α + H_α` of the HJPDE family.
#[derive(Clone, Debug)]
pub struct Member {
    /// Report name, e.g. `H0`, `H1`, `H3_2`.
    pub name: String,
    /// `H′_α` itself.
    pub expr: Expr,
    /// The parameter `t_α` (τ, or the coordinate of a constrained momentum).
    pub parameter: GenId,
    /// The momentum `p_α` conjugate to `t_α`.
    pub momentum: GenId,
}

impl Member {
    /// `H_α = H′_α − p_α`.
    pub fn hamiltonian(&self, model: &Model) -> Expr {
        self.expr.sub(&Expr::gen(model.gen(self.momentum)))
    }
}

#[derive(Clone, Debug)]
pub struct HamiltonianSet {
    pub h0: Expr,
    pub members: Vec<Member>,
    /// Numeric label the next generated constraint receives.
    pub next_label: usize,
}

impl HamiltonianSet {
    /// τ followed by every coordinate whose momentum is constrained.
    pub fn parameters(&self) -> Vec<GenId> {
        self.members.iter().map(|m| m.parameter).collect()
    }

    pub fn member(&self, name: &str) -> Option<&Member> {
        self.members.iter().find(|m| m.name == name)
    }
}

fn gen_expr(model: &Model, id: GenId) -> Expr {
    Expr::gen(model.gen(id))
}

fn zero_bindings(model: &Model, ids: impl IntoIterator<Item = GenId>) -> BTreeMap<Gen, Expr> {
    ids.into_iter()
        .map(|id| (model.gen(id), Expr::zero()))
        .collect()
}

pub fn compute_momenta(model: &Model) -> Result<MomentumTable> {
    let coords = model.coordinates();
    let velocities: Vec<GenId> = coords.iter().map(|&q| model.velocity(q)).collect();
    let vel_set: BTreeSet<GenId> = velocities.iter().copied().collect();
    let l = &model.lagrangian;

    for id in l.generators() {
        let info = model.registry.info(id);
        if info.kind == Kind::Velocity && info.order > 1 {
            return Err(Error::Unsupported(format!(
                "the Lagrangian depends on the higher derivative {}",
                model.name_of(id)
            )));
        }
    }
    if l.den().generators().iter().any(|g| vel_set.contains(g)) {
        return Err(Error::Unsupported(
            "velocities appear in a denominator of the Lagrangian".into(),
        ));
    }
    if l.num().degree_in(&vel_set) > 2 {
        return Err(Error::Unsupported(
            "the Lagrangian is more than quadratic in velocities".into(),
        ));
    }

    let definitions: Vec<Expr> = velocities
        .iter()
        .map(|&v| l.derive_right(model.gen(v)))
        .collect();
    // φ_a = c_a + Σ_b M_ab v_b, exactly, since φ is affine in velocities.
    let at_rest = zero_bindings(model, velocities.iter().copied());
    let constant: Vec<Expr> = definitions
        .iter()
        .map(|phi| phi.substitute(&at_rest))
        .collect::<std::result::Result<_, _>>()?;
    let matrix: Vec<Vec<Expr>> = definitions
        .iter()
        .map(|phi| {
            velocities
                .iter()
                .map(|&v| phi.derive_right(model.gen(v)))
                .collect()
        })
        .collect();

    let n = coords.len();
    let regular: Vec<usize> = (0..n)
        .filter(|&a| matrix[a].iter().any(|e| !e.is_zero()))
        .collect();
    let constrained: Vec<usize> = (0..n).filter(|a| !regular.contains(a)).collect();
    for &a in &regular {
        for &b in &constrained {
            if !matrix[a][b].is_zero() {
                return Err(Error::Unsupported(format!(
                    "the momentum of {} depends on the unsolvable velocity {}",
                    model.name_of(coords[a]),
                    model.name_of(velocities[b])
                )));
            }
        }
    }

    // Solve Σ_b M_ab v_b = p_a − c_a over the regular block.
    let mut rows: Vec<(Vec<Expr>, Expr)> = regular
        .iter()
        .map(|&a| {
            let coeffs = regular.iter().map(|&b| matrix[a][b].clone()).collect();
            let rhs = gen_expr(model, model.momentum(coords[a])).sub(&constant[a]);
            (coeffs, rhs)
        })
        .collect();
    let mut side_conditions: Vec<Expr> = Vec::new();
    let mut pivot_row_of_col = vec![usize::MAX; regular.len()];
    let mut used = vec![false; rows.len()];
    for col in 0..regular.len() {
        let pick = (0..rows.len()).find(|&r| {
            let c = &rows[r].0[col];
            !used[r] && !c.is_zero() && c.parity() == Some(Parity::Even) && !c.num().has_odd()
        });
        let Some(r) = pick else {
            return Err(Error::Unsupported(format!(
                "cannot solve for {}: no invertible even pivot",
                model.name_of(velocities[regular[col]])
            )));
        };
        used[r] = true;
        pivot_row_of_col[col] = r;
        let pivot = rows[r].0[col].clone();
        if pivot.as_scalar().is_none() && !pivot.num().is_one() {
            let cond = Expr::from_poly(pivot.num().clone());
            if cond.as_scalar().is_none() && !side_conditions.iter().any(|s| s.equals(&cond)) {
                side_conditions.push(cond);
            }
        }
        let inv = Expr::one().div(&pivot)?;
        let (coeffs, rhs) = &mut rows[r];
        for c in coeffs.iter_mut() {
            *c = inv.mul(c);
        }
        *rhs = inv.mul(rhs);
        let pivot_row = rows[r].clone();
        for (s, row) in rows.iter_mut().enumerate() {
            if s == r || row.0[col].is_zero() {
                continue;
            }
            let factor = row.0[col].clone();
            for (c, p) in row.0.iter_mut().zip(&pivot_row.0) {
                *c = c.sub(&factor.mul(p));
            }
            row.1 = row.1.sub(&factor.mul(&pivot_row.1));
        }
    }

    let mut entries = Vec::with_capacity(n);
    for a in 0..n {
        let solution = regular
            .iter()
            .position(|&b| b == a)
            .map(|col| rows[pivot_row_of_col[col]].1.clone());
        entries.push(MomentumEntry {
            coordinate: coords[a],
            velocity: velocities[a],
            momentum: model.momentum(coords[a]),
            definition: definitions[a].clone(),
            solvable: solution.is_some(),
            solution,
        });
    }
    let table = MomentumTable {
        entries,
        side_conditions,
    };
    check_resubstitution(model, &table)?;
    Ok(table)
}

fn velocity_solutions(model: &Model, table: &MomentumTable) -> BTreeMap<Gen, Expr> {
    table
        .solved()
        .map(|e| (model.gen(e.velocity), e.solution.clone().expect("solvable")))
        .collect()
}

/// Every solved velocity turns its defining relation into `p = p`.
fn check_resubstitution(model: &Model, table: &MomentumTable) -> Result<()> {
    let w = velocity_solutions(model, table);
    for e in table.solved() {
        let back = e.definition.substitute(&w)?;
        if !back.equals(&gen_expr(model, e.momentum)) {
            return Err(Error::Internal(format!(
                "solved velocity for {} does not reproduce its momentum",
                model.name_of(e.coordinate)
            )));
        }
    }
    Ok(())
}

/// `H_0 = Σ p_a w_a + Σ p_ν q̇_ν |_{p_ν forced} − L`, checked velocity-free.
pub fn canonical_h0(model: &Model, table: &MomentumTable) -> Result<Expr> {
    let mut h = model.lagrangian.neg();
    for e in &table.entries {
        // momentum to the left: the momenta are right derivatives
        h = h.add(&gen_expr(model, e.momentum).mul(&gen_expr(model, e.velocity)));
    }
    let h = h.substitute(&velocity_solutions(model, table))?;
    let forced: BTreeMap<Gen, Expr> = table
        .constrained()
        .map(|e| (model.gen(e.momentum), e.definition.clone()))
        .collect();
    let h = h.substitute(&forced)?;
    if let Some(v) = h
        .generators()
        .into_iter()
        .find(|&g| model.registry.info(g).kind == Kind::Velocity)
    {
        return Err(Error::Internal(format!(
            "canonical Hamiltonian still depends on {}",
            model.name_of(v)
        )));
    }
    Ok(h)
}

pub fn build_hjpde(model: &Model, table: &MomentumTable, h0: &Expr) -> HamiltonianSet {
    let mut members = vec![Member {
        name: "H0".into(),
        expr: gen_expr(model, model.parameter_momentum).add(h0),
        parameter: model.parameter,
        momentum: model.parameter_momentum,
    }];
    let mut label = 1;
    for decl in &model.declarations {
        let group: Vec<&MomentumEntry> = decl
            .ids
            .iter()
            .filter_map(|&id| table.entry(id))
            .filter(|e| !e.solvable)
            .collect();
        if group.is_empty() {
            continue;
        }
        for e in group {
            let info = model.registry.info(e.coordinate);
            let name = match info.component {
                Some(c) => format!("H{label}_{c}"),
                None => format!("H{label}"),
            };
            members.push(Member {
                name,
                expr: gen_expr(model, e.momentum).sub(&e.definition),
                parameter: e.coordinate,
                momentum: e.momentum,
            });
        }
        label += 1;
    }
    HamiltonianSet {
        h0: h0.clone(),
        members,
        next_label: label,
    }
}

/// The three steps in order, with side conditions merged into the model.
pub fn legendre(model: &mut Model) -> Result<(MomentumTable, HamiltonianSet)> {
    let table = compute_momenta(model)?;
    for cond in &table.side_conditions {
        if !model.side_conditions.iter().any(|s| s.equals(cond)) {
            model.side_conditions.push(cond.clone());
        }
    }
    let h0 = canonical_h0(model, &table)?;
    let hs = build_hjpde(model, &table, &h0);
    Ok((table, hs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_model;

    fn fixture(name: &str) -> Model {
        let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
        parse_model(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn regular_model() {
        let mut m = fixture("regular.hjc");
        let (table, hs) = legendre(&mut m).unwrap();
        let e = &table.entries[0];
        assert!(e.solvable);
        assert_eq!(m.render(e.solution.as_ref().unwrap()), "pi_q");
        assert_eq!(m.render(&hs.h0), "1/2*pi_q^2");
        assert_eq!(hs.members.len(), 1);
    }

    #[test]
    fn spinless_model() {
        let mut m = fixture("spinless.hjc");
        let (table, hs) = legendre(&mut m).unwrap();
        let x0 = m.lookup("x", Some(0)).unwrap();
        let x1 = m.lookup("x", Some(1)).unwrap();
        assert_eq!(m.render(&table.entry(x0).unwrap().definition), "-d(x0)/e");
        assert_eq!(m.render(&table.entry(x1).unwrap().definition), "d(x1)/e");
        assert_eq!(
            m.render(table.entry(x1).unwrap().solution.as_ref().unwrap()),
            "p1*e"
        );
        let expected = m.parse_expr("-e/2*(dot(p,p) - m^2)").unwrap();
        // p is lower-index: dot(p,p) with the metric is p², as for upper x
        assert!(hs.h0.equals(&expected), "{}", m.render(&hs.h0));
        let names: Vec<&str> = hs.members.iter().map(|m| m.name.as_str()).collect();
        assert_eq!(names, ["H0", "H1"]);
        assert_eq!(m.render(&hs.members[1].expr), "pi_e");
    }

    #[test]
    fn cubic_velocity_rejected() {
        let mut m =
            parse_model("model c parameter t variable q : even lagrangian: d(q)^3").unwrap();
        assert!(matches!(legendre(&mut m), Err(Error::Unsupported(_))));
    }

    #[test]
    fn coupled_regular_block() {
        // L = a² + a b + b² with a = d(q), b = d(r): the Hessian is dense.
        let mut m = parse_model(
            "model k parameter t variable q : even variable r : even \
             lagrangian: d(q)^2 + d(q)*d(r) + d(r)^2",
        )
        .unwrap();
        let (table, hs) = legendre(&mut m).unwrap();
        assert!(table.entries.iter().all(|e| e.solvable));
        let expected = m.parse_expr("(pi_q^2 - pi_q*pi_r + pi_r^2)/3").unwrap();
        assert!(hs.h0.equals(&expected), "{}", m.render(&hs.h0));
    }
}
