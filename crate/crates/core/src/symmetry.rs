//! First-order variations of a Lagrangian and the Euler–Lagrange test for
//! total τ-derivatives.
//!
//! A transformation file lists its parameters and the variation of each
//! varied coordinate:
//!
//! ```text
//! transformation reparametrization
//! param zeta : even
//! delta x = d(x)*zeta
//! delta e = d(e)*zeta + e*d(zeta)
//! ```
//!
//! `param` generators are functions of τ (their velocities are available);
//! `constant` generators are not. Unlisted coordinates are not varied.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::frontend::{
    FrontendError, Model, Parser, Scope, TransformHeaderKind, Value, INPUT_ORDER_CAP,
};
use crate::kernel::{tau_derivative, Expr, GenId, GenInfo, KernelError, Kind, MAX_ORDER};

#[derive(Clone, Debug)]
pub struct Transformation {
    pub name: String,
    /// Transformation parameters, functions of τ.
    pub params: Vec<GenId>,
    /// Constants introduced by the transformation.
    pub constants: Vec<GenId>,
    /// `δq` for every varied coordinate.
    pub deltas: BTreeMap<GenId, Expr>,
}

/// Parse a transformation against `model`, registering its parameters (with
/// their velocities) and constants in the model's roster.
pub fn parse_transformation(model: &mut Model, text: &str) -> Result<Transformation> {
    let ast = Parser::new(text)?.transformation()?;
    let mut params = Vec::new();
    let mut constants = Vec::new();
    for (kind, name, parity, pos) in &ast.headers {
        if model.registry.lookup(name, None).is_some() || model.registry.is_family(name) {
            return Err(FrontendError::Syntax {
                line: pos.line,
                col: pos.col,
                message: format!("`{name}` is already declared"),
            }
            .into());
        }
        let info = GenInfo {
            name: name.clone(),
            component: None,
            parity: *parity,
            kind: match kind {
                TransformHeaderKind::Param => Kind::Parameter,
                TransformHeaderKind::Constant => Kind::Constant,
            },
            order: 0,
            base: None,
        };
        let id = model.registry.add(info.clone());
        match kind {
            TransformHeaderKind::Param => {
                for order in 1..=MAX_ORDER {
                    model.registry.add(GenInfo {
                        kind: Kind::Velocity,
                        order,
                        base: Some(id),
                        ..info.clone()
                    });
                }
                params.push(id);
            }
            TransformHeaderKind::Constant => constants.push(id),
        }
    }

    let scope = Scope {
        registry: &model.registry,
        metric: model.metric,
    };
    let mut deltas = BTreeMap::new();
    for (target, component, body, pos) in &ast.deltas {
        let targets: Vec<GenId> = match component {
            Some(c) => model
                .registry
                .lookup(target, Some(*c))
                .into_iter()
                .collect(),
            None => match model.registry.lookup(target, None) {
                Some(id) => vec![id],
                None if model.registry.is_family(target) => (0..4)
                    .filter_map(|c| model.registry.lookup(target, Some(c)))
                    .collect(),
                None => Vec::new(),
            },
        };
        if targets.is_empty()
            || targets
                .iter()
                .any(|&t| model.registry.info(t).kind != Kind::Coordinate)
        {
            return Err(FrontendError::Undeclared {
                name: target.clone(),
                line: pos.line,
                col: pos.col,
            }
            .into());
        }
        let values: Vec<Expr> = match (scope.eval(body)?, targets.len()) {
            (Value::Scalar(e), 1) => vec![e],
            (Value::Vector(v), 4) => v.to_vec(),
            _ => {
                return Err(FrontendError::Shape(format!(
                    "variation of `{target}` at {}:{} does not match its shape",
                    pos.line, pos.col
                ))
                .into())
            }
        };
        for (t, v) in targets.into_iter().zip(values) {
            check_variation(model, t, &v)?;
            if deltas.insert(t, v).is_some() {
                return Err(FrontendError::Syntax {
                    line: pos.line,
                    col: pos.col,
                    message: format!("`{}` is varied twice", model.name_of(t)),
                }
                .into());
            }
        }
    }
    Ok(Transformation {
        name: ast.name,
        params,
        constants,
        deltas,
    })
}

fn check_variation(model: &Model, target: GenId, delta: &Expr) -> Result<()> {
    let info = model.registry.info(target);
    if delta.is_zero() {
        return Ok(());
    }
    match delta.parity() {
        Some(p) if p == info.parity => {}
        Some(_) => {
            return Err(Error::Parity(format!(
                "δ{} has the wrong parity",
                model.name_of(target)
            )))
        }
        None => {
            return Err(Error::Parity(format!(
                "δ{} mixes even and odd terms",
                model.name_of(target)
            )))
        }
    }
    for id in delta.generators() {
        let g = model.registry.info(id);
        if g.kind == Kind::Momentum {
            return Err(Error::Unsupported(format!(
                "δ{} mentions a momentum",
                model.name_of(target)
            )));
        }
        if g.kind == Kind::Velocity && g.order > INPUT_ORDER_CAP {
            return Err(Error::Unsupported(format!(
                "δ{} uses a τ-derivative of order {}",
                model.name_of(target),
                g.order
            )));
        }
    }
    Ok(())
}

fn order_error(e: KernelError) -> Error {
    match e {
        KernelError::OrderExceeded { .. } => {
            Error::Unsupported("τ-derivative order exceeds the supported range".into())
        }
        other => other.into(),
    }
}

/// `δF = Σ_q Σ_k (∂_r F/∂q⁽ᵏ⁾) dᵏ(δq)/dτᵏ`.
pub fn vary(model: &Model, t: &Transformation, f: &Expr) -> Result<Expr> {
    let mut out = Expr::zero();
    for (&q, delta) in &t.deltas {
        let top = (0..=MAX_ORDER)
            .filter(|&k| model.registry.velocity(q, k).is_some_and(|g| f.mentions(g)))
            .max();
        let Some(top) = top else { continue };
        let mut dk = delta.clone();
        for k in 0..=top {
            let g = model
                .registry
                .velocity(q, k)
                .ok_or_else(|| Error::Internal("missing velocity".into()))?;
            if f.mentions(g) {
                out = out.add(&f.derive_right(model.gen(g)).mul(&dk));
            }
            if k < top {
                dk = tau_derivative(&dk, &model.registry).map_err(order_error)?;
            }
        }
    }
    Ok(out)
}

pub fn vary_lagrangian(model: &Model, t: &Transformation) -> Result<Expr> {
    vary(model, t, &model.lagrangian)
}

#[derive(Clone, Debug)]
pub struct TotalDerivativeTest {
    pub is_total_derivative: bool,
    /// Nonvanishing Euler–Lagrange components.
    pub residual: Vec<(GenId, Expr)>,
}

/// `EL_q(F) = Σ_k (−d/dτ)ᵏ (∂_l F/∂q⁽ᵏ⁾)` for every coordinate and
/// transformation parameter; `F` is a total derivative iff all vanish.
pub fn is_total_derivative(model: &Model, f: &Expr) -> Result<TotalDerivativeTest> {
    for id in f.generators() {
        let info = model.registry.info(id);
        if info.kind == Kind::Velocity && info.order > INPUT_ORDER_CAP {
            return Err(Error::Unsupported(format!(
                "expression uses a τ-derivative of order {} (maximum {INPUT_ORDER_CAP})",
                info.order
            )));
        }
    }
    let variables: Vec<GenId> = model
        .registry
        .ids()
        .filter(|&id| {
            let info = model.registry.info(id);
            info.kind == Kind::Coordinate
                || (info.kind == Kind::Parameter && model.registry.velocity(id, 1).is_some())
        })
        .collect();
    let mut residual = Vec::new();
    for q in variables {
        let mut el = Expr::zero();
        for k in (0..=INPUT_ORDER_CAP).rev() {
            let g = model
                .registry
                .velocity(q, k)
                .ok_or_else(|| Error::Internal("missing velocity".into()))?;
            // Horner: EL = ∂₀ − d(∂₁ − d(∂₂))
            el = tau_derivative(&el, &model.registry).map_err(order_error)?;
            el = f.derive_left(model.gen(g)).sub(&el);
        }
        if !el.is_zero() {
            residual.push((q, el));
        }
    }
    Ok(TotalDerivativeTest {
        is_total_derivative: residual.is_empty(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_model;

    fn fixture(name: &str) -> String {
        std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    fn spinning() -> Model {
        parse_model(&fixture("spinning.hjc")).unwrap()
    }

    #[test]
    fn manufactured_total_derivatives() {
        let m = parse_model("model a parameter t variable x : even lagrangian: d(x)^2").unwrap();
        let f = m.parse_expr("2*x*d(x)").unwrap();
        assert!(is_total_derivative(&m, &f).unwrap().is_total_derivative);
        let x = m.parse_expr("x").unwrap();
        let r = is_total_derivative(&m, &x).unwrap();
        assert!(!r.is_total_derivative);
        assert_eq!(r.residual.len(), 1);
        let third = m.parse_expr("d(d(d(x)))").unwrap();
        assert!(matches!(
            is_total_derivative(&m, &third),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn shift_leaves_lagrangian_invariant() {
        let mut m = spinning();
        let t = parse_transformation(&mut m, &fixture("shift.hjt")).unwrap();
        assert!(vary_lagrangian(&m, &t).unwrap().is_zero());
    }

    #[test]
    fn reparametrization_is_a_symmetry() {
        let mut m = spinning();
        let t = parse_transformation(&mut m, &fixture("reparam.hjt")).unwrap();
        let dl = vary_lagrangian(&m, &t).unwrap();
        assert!(!dl.is_zero());
        let r = is_total_derivative(&m, &dl).unwrap();
        assert!(r.is_total_derivative, "{:?}", r.residual.len());
        // in fact δL = d(Lζ)/dτ
        let zeta = m.parse_expr("zeta").unwrap();
        let want = tau_derivative(&m.lagrangian.mul(&zeta), &m.registry).unwrap();
        assert!(dl.equals(&want));
    }

    #[test]
    fn einbein_shift_is_not_a_symmetry() {
        let mut m = spinning();
        let t = parse_transformation(&mut m, &fixture("einbein_shift.hjt")).unwrap();
        let dl = vary_lagrangian(&m, &t).unwrap();
        // hand variation of the e-dependent terms
        let want = m
            .parse_expr("(dot(d(x),d(x))/(2*e^2) - I*chi*dot(d(x),psi)/e^2 - m^2/2)*zeta")
            .unwrap();
        assert!(dl.equals(&want), "{}", m.render(&dl));
        assert!(!is_total_derivative(&m, &dl).unwrap().is_total_derivative);
    }

    #[test]
    fn parity_and_shape_errors() {
        let mut m = spinning();
        let bad = "transformation t param eps : odd delta e = eps";
        assert!(matches!(
            parse_transformation(&mut m, bad),
            Err(Error::Parity(_))
        ));
        let mut m = spinning();
        let bad = "transformation t param zeta : even delta x = zeta";
        assert!(matches!(
            parse_transformation(&mut m, bad),
            Err(Error::Frontend(FrontendError::Shape(_)))
        ));
        let mut m = spinning();
        let bad = "transformation t param zeta : even delta y = zeta";
        assert!(matches!(
            parse_transformation(&mut m, bad),
            Err(Error::Frontend(FrontendError::Undeclared { .. }))
        ));
    }
}
