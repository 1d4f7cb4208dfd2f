//! Graded Poisson brackets and first/second-class classification.
//!
//! `{A,B} = Σ_q [ (∂_r A/∂q)(∂_l B/∂p_q) − (−1)^{|A||B|} (∂_r B/∂q)(∂_l A/∂p_q) ]`
//! over every canonical pair, including `(τ, p^(τ))`. Even pairs give
//! `{x, p} = 1`; odd pairs give the symmetric `{ψ, π} = {π, ψ} = 1`.
//!
//! Quantization maps a constant, invertible bracket block `C` of
//! second-class constraints onto anticommutators of the odd coordinates
//! they eliminate: `[θ_a, θ_b]_+ = 2i (C⁻¹)_ab`, i.e. `−2i` times the Dirac
//! bracket.

use crate::engine::{reduce, ClosureLedger};
use crate::frontend::Model;
use crate::kernel::{Expr, GenId, Kind, Parity, Scalar};

pub fn canonical_pairs(model: &Model) -> Vec<(GenId, GenId)> {
    model
        .registry
        .ids()
        .filter(|&id| {
            matches!(
                model.registry.info(id).kind,
                Kind::Coordinate | Kind::Parameter
            )
        })
        .filter_map(|q| model.registry.momentum(q).map(|p| (q, p)))
        .collect()
}

fn sign_swap(a: &Expr, b: &Expr) -> bool {
    a.parity() == Some(Parity::Odd) && b.parity() == Some(Parity::Odd)
}

/// Bilinear extension to inhomogeneous arguments by parity parts.
pub fn graded_poisson(model: &Model, a: &Expr, b: &Expr) -> Expr {
    let pairs = canonical_pairs(model);
    let mut out = Expr::zero();
    for pa in [Parity::Even, Parity::Odd] {
        let a = a.parity_part(pa);
        if a.is_zero() {
            continue;
        }
        for pb in [Parity::Even, Parity::Odd] {
            let b = b.parity_part(pb);
            if b.is_zero() {
                continue;
            }
            out = out.add(&homogeneous(model, &pairs, &a, &b));
        }
    }
    out
}

fn homogeneous(model: &Model, pairs: &[(GenId, GenId)], a: &Expr, b: &Expr) -> Expr {
    let both_odd = sign_swap(a, b);
    let mut out = Expr::zero();
    for &(q, p) in pairs {
        let (q, p) = (model.gen(q), model.gen(p));
        let first = a.derive_right(q).mul(&b.derive_left(p));
        let second = b.derive_right(q).mul(&a.derive_left(p));
        out = if both_odd {
            out.add(&first).add(&second)
        } else {
            out.add(&first).sub(&second)
        };
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    First,
    Second,
}

impl std::fmt::Display for Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Class::First => "first",
            Class::Second => "second",
        })
    }
}

/// Second-class constraints whose mutual brackets are plain numbers.
#[derive(Clone, Debug)]
pub struct ConstantBlock {
    pub names: Vec<String>,
    pub matrix: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug)]
pub struct BracketTable {
    pub names: Vec<String>,
    pub matrix: Vec<Vec<Expr>>,
    pub classes: Vec<Class>,
    /// For each row, the constraints whose (Dirac) bracket with it fails to
    /// reduce; empty for first-class rows.
    pub partners: Vec<Vec<String>>,
    pub constant_block: Option<ConstantBlock>,
    /// Whether every plain bracket of the row reduces (first class in the
    /// literal sense, before any combination with the block).
    pub plain_first_class: Vec<bool>,
    /// For first-class rows, the combination with the block constraints
    /// whose plain brackets with every constraint reduce; `None` otherwise.
    pub first_class_forms: Vec<Option<Expr>>,
}

impl BracketTable {
    pub fn class_of(&self, name: &str) -> Option<Class> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.classes[i])
    }

    pub fn bracket(&self, a: &str, b: &str) -> Option<&Expr> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(&self.matrix[i][j])
    }
}

/// Classify named constraints.
///
/// Constraints whose mutual brackets are nonzero constants form an
/// invertible block `C` and are second class. Every other constraint is
/// judged by its Dirac bracket with respect to that block,
/// `{A,B}* = {A,B} − {A,χ_a}(C⁻¹)_ab{χ_b,B}`: it is first class iff all its
/// Dirac brackets with the remaining constraints reduce modulo the set.
/// Without a block this is the plain bracket test.
#[allow(clippy::needless_range_loop)]
pub fn classify(model: &Model, constraints: &[(String, Expr)]) -> BracketTable {
    let n = constraints.len();
    let exprs: Vec<Expr> = constraints.iter().map(|(_, e)| e.clone()).collect();
    let mut matrix = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            matrix[i][j] = graded_poisson(model, &exprs[i], &exprs[j]);
        }
    }
    let reduces = |e: &Expr| reduce(e, &exprs).reduced();

    // candidates: rows with a non-reducing bracket, greedily grown into a
    // block of constant mutual brackets
    let mut block: Vec<usize> = Vec::new();
    for i in 0..n {
        let fails = (0..n).any(|j| !reduces(&matrix[i][j]));
        let constant =
            |j: usize| matrix[i][j].as_scalar().is_some() && matrix[j][i].as_scalar().is_some();
        if fails && constant(i) && block.iter().all(|&j| constant(j)) {
            block.push(i);
        }
    }
    let scalar_block = |idx: &[usize]| -> Vec<Vec<Scalar>> {
        idx.iter()
            .map(|&i| {
                idx.iter()
                    .map(|&j| matrix[i][j].as_scalar().expect("constant entry"))
                    .collect()
            })
            .collect()
    };
    // keep the block only if it is invertible
    let inverse = invert(&scalar_block(&block));
    if inverse.is_none() {
        block.clear();
    }
    let inverse = inverse.unwrap_or_default();

    let dirac = |i: usize, j: usize| -> Expr {
        let mut d = matrix[i][j].clone();
        for (a, &ba) in block.iter().enumerate() {
            for (b, &bb) in block.iter().enumerate() {
                if inverse[a][b].is_zero() {
                    continue;
                }
                let t = matrix[i][ba]
                    .mul(&Expr::scalar(inverse[a][b].clone()))
                    .mul(&matrix[bb][j]);
                d = d.sub(&t);
            }
        }
        d
    };
    let mut classes = Vec::with_capacity(n);
    let mut partners = Vec::with_capacity(n);
    let mut first_class_forms = Vec::with_capacity(n);
    for i in 0..n {
        if block.contains(&i) {
            classes.push(Class::Second);
            partners.push(
                (0..n)
                    .filter(|&j| !reduces(&matrix[i][j]))
                    .map(|j| constraints[j].0.clone())
                    .collect(),
            );
            first_class_forms.push(None);
            continue;
        }
        let failing: Vec<String> = (0..n)
            .filter(|j| !block.contains(j))
            .filter(|&j| !reduces(&dirac(i, j)))
            .map(|j| constraints[j].0.clone())
            .collect();
        if failing.is_empty() {
            classes.push(Class::First);
            // φ′ = φ − {φ,χ_a}(C⁻¹)_ab χ_b
            let mut f = exprs[i].clone();
            for (a, &ba) in block.iter().enumerate() {
                for (b, &bb) in block.iter().enumerate() {
                    if !inverse[a][b].is_zero() {
                        f = f.sub(
                            &matrix[i][ba]
                                .mul(&Expr::scalar(inverse[a][b].clone()))
                                .mul(&exprs[bb]),
                        );
                    }
                }
            }
            first_class_forms.push(Some(f));
        } else {
            classes.push(Class::Second);
            first_class_forms.push(None);
        }
        partners.push(failing);
    }
    let constant_block = (!block.is_empty()).then(|| ConstantBlock {
        names: block.iter().map(|&i| constraints[i].0.clone()).collect(),
        matrix: scalar_block(&block),
    });
    let plain_first_class = (0..n)
        .map(|i| (0..n).all(|j| reduces(&matrix[i][j])))
        .collect();
    BracketTable {
        names: constraints.iter().map(|(n, _)| n.clone()).collect(),
        plain_first_class,
        matrix,
        classes,
        partners,
        constant_block,
        first_class_forms,
    }
}

/// All constraints of a closed system except `H′_0`.
pub fn classify_ledger(model: &Model, ledger: &ClosureLedger) -> BracketTable {
    let list: Vec<(String, Expr)> = ledger
        .constraints()
        .map(|c| (c.name.clone(), c.expr.clone()))
        .collect();
    classify(model, &list)
}

/// Exact inverse by Gauss–Jordan elimination, `None` if singular.
pub fn invert(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inv()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * p);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Anticommutators `2i (C⁻¹)` of the odd coordinates eliminated by a
/// constant block, or `None` if the block is singular.
pub fn anticommutator_bridge(block: &ConstantBlock) -> Option<Vec<Vec<Scalar>>> {
    let inv = invert(&block.matrix)?;
    let two_i = Scalar::complex((0, 1), (2, 1));
    Some(
        inv.iter()
            .map(|row| row.iter().map(|x| &two_i * x).collect())
            .collect(),
    )
}
