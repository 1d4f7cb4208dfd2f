//! Models: declarations, the generator roster they induce, and the
//! component-expanded Lagrangian.

use std::collections::BTreeSet;

use super::lexer::Pos;
use super::parser::{Ast, DeclKind, ModelAst, Parser};
use super::FrontendError;
use crate::kernel::{
    tau_derivative, Expr, Gen, GenId, GenInfo, KernelError, Kind, NameStyle, Parity, Registry,
    Scalar, MAX_ORDER,
};

/// Highest τ-derivative order accepted in user input.
pub const INPUT_ORDER_CAP: u8 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub name: String,
    pub kind: DeclKind,
    pub parity: Parity,
    pub indexed: bool,
    pub ids: Vec<GenId>,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub registry: Registry,
    /// The evolution parameter τ.
    pub parameter: GenId,
    /// Formal momentum p^(τ) conjugate to τ.
    pub parameter_momentum: GenId,
    pub metric: [i8; 4],
    pub declarations: Vec<Declaration>,
    pub lagrangian: Expr,
    /// Even expressions assumed nonvanishing (denominators, pivots).
    pub side_conditions: Vec<Expr>,
}

impl Model {
    pub fn gen(&self, id: GenId) -> Gen {
        self.registry.gen(id)
    }

    /// Coordinates in declaration order, families expanded by component.
    pub fn coordinates(&self) -> Vec<GenId> {
        self.declarations
            .iter()
            .filter(|d| d.kind == DeclKind::Variable)
            .flat_map(|d| d.ids.iter().copied())
            .collect()
    }

    pub fn constants(&self) -> Vec<GenId> {
        self.declarations
            .iter()
            .filter(|d| d.kind == DeclKind::Constant)
            .flat_map(|d| d.ids.iter().copied())
            .collect()
    }

    pub fn velocity(&self, coordinate: GenId) -> GenId {
        self.registry
            .velocity(coordinate, 1)
            .expect("every coordinate has a velocity")
    }

    pub fn momentum(&self, coordinate: GenId) -> GenId {
        self.registry
            .momentum(coordinate)
            .expect("every coordinate has a momentum")
    }

    pub fn velocities(&self) -> BTreeSet<GenId> {
        self.registry
            .ids()
            .filter(|&id| self.registry.info(id).kind == Kind::Velocity)
            .collect()
    }

    pub fn name_of(&self, id: GenId) -> String {
        self.registry.display(id, NameStyle::Report)
    }

    pub fn render(&self, e: &Expr) -> String {
        e.render(&self.registry.namer(NameStyle::Report))
    }

    pub fn render_dsl(&self, e: &Expr) -> String {
        e.render(&self.registry.namer(NameStyle::Dsl))
    }

    pub fn lookup(&self, name: &str, component: Option<u8>) -> Option<GenId> {
        self.registry.lookup(name, component)
    }

    /// Parse an expression against this model's roster (momenta included).
    pub fn parse_expr(&self, text: &str) -> Result<Expr, FrontendError> {
        parse_expr_in(&self.registry, self.metric, text)
    }

    /// Re-parsable model text with the Lagrangian in expanded form.
    pub fn pretty_print(&self) -> String {
        let mut out = format!("model {}\n", self.name);
        out.push_str(&format!(
            "parameter {}\n",
            self.registry.info(self.parameter).name
        ));
        let signs: Vec<&str> = self
            .metric
            .iter()
            .map(|&s| if s > 0 { "+" } else { "-" })
            .collect();
        out.push_str(&format!("metric ({})\n", signs.join(" ")));
        for d in &self.declarations {
            let kw = match d.kind {
                DeclKind::Constant => "constant",
                DeclKind::Variable => "variable",
            };
            let idx = if d.indexed { "[4]" } else { "" };
            out.push_str(&format!("{kw} {}{idx} : {}\n", d.name, d.parity));
        }
        out.push_str(&format!(
            "lagrangian: {}\n",
            self.render_dsl(&self.lagrangian)
        ));
        out
    }
}

/// Conventional momentum name for a coordinate family.
pub fn momentum_name(coordinate: &str) -> String {
    if coordinate == "x" {
        "p".into()
    } else {
        format!("pi_{coordinate}")
    }
}

pub fn parse_model(text: &str) -> Result<Model, FrontendError> {
    let ast = Parser::new(text)?.model()?;
    build_model(ast)
}

fn build_model(ast: ModelAst) -> Result<Model, FrontendError> {
    let (param_name, param_pos) = match ast.parameters.as_slice() {
        [one] => one.clone(),
        [] => {
            return Err(FrontendError::Model(
                "a model needs exactly one `parameter`".into(),
            ))
        }
        [_, (_, pos), ..] => {
            return Err(FrontendError::Syntax {
                line: pos.line,
                col: pos.col,
                message: "more than one evolution parameter".into(),
            })
        }
    };
    let metric = ast.metric.unwrap_or([1, -1, -1, -1]);

    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut claim = |name: &str, pos: Pos| -> Result<(), FrontendError> {
        if taken.insert(name.to_string()) {
            Ok(())
        } else {
            Err(FrontendError::Syntax {
                line: pos.line,
                col: pos.col,
                message: format!("`{name}` is declared twice or clashes with a generated momentum"),
            })
        }
    };
    claim(&param_name, param_pos)?;
    for d in &ast.decls {
        claim(&d.name, d.pos)?;
    }
    for d in ast.decls.iter().filter(|d| d.kind == DeclKind::Variable) {
        claim(&momentum_name(&d.name), d.pos)?;
    }
    claim(&format!("p_{param_name}"), param_pos)?;

    let components = |indexed: bool| -> Vec<Option<u8>> {
        if indexed {
            (0..4).map(Some).collect()
        } else {
            vec![None]
        }
    };

    // Allocation order fixes the monomial order: momenta first, then
    // declarations in file order, then velocities by derivative order.
    let mut reg = Registry::new();
    let mut momenta = Vec::new();
    for d in ast.decls.iter().filter(|d| d.kind == DeclKind::Variable) {
        for c in components(d.indexed) {
            momenta.push(reg.add(GenInfo {
                name: momentum_name(&d.name),
                component: c,
                parity: d.parity,
                kind: Kind::Momentum,
                order: 0,
                base: None,
            }));
        }
    }
    let parameter_momentum = reg.add(GenInfo {
        name: format!("p_{param_name}"),
        component: None,
        parity: Parity::Even,
        kind: Kind::Momentum,
        order: 0,
        base: None,
    });
    let mut declarations = Vec::new();
    for d in &ast.decls {
        let kind = match d.kind {
            DeclKind::Constant => Kind::Constant,
            DeclKind::Variable => Kind::Coordinate,
        };
        let ids = components(d.indexed)
            .into_iter()
            .map(|c| {
                reg.add(GenInfo {
                    name: d.name.clone(),
                    component: c,
                    parity: d.parity,
                    kind,
                    order: 0,
                    base: None,
                })
            })
            .collect();
        declarations.push(Declaration {
            name: d.name.clone(),
            kind: d.kind.clone(),
            parity: d.parity,
            indexed: d.indexed,
            ids,
        });
    }
    let coords: Vec<GenId> = declarations
        .iter()
        .filter(|d| d.kind == DeclKind::Variable)
        .flat_map(|d| d.ids.iter().copied())
        .collect();
    for (&m, &c) in momenta.iter().zip(&coords) {
        reg.link_momentum(m, c);
    }
    for order in 1..=MAX_ORDER {
        for &c in &coords {
            let info = reg.info(c).clone();
            reg.add(GenInfo {
                kind: Kind::Velocity,
                order,
                base: Some(c),
                ..info
            });
        }
    }
    let parameter = reg.add(GenInfo {
        name: param_name,
        component: None,
        parity: Parity::Even,
        kind: Kind::Parameter,
        order: 0,
        base: None,
    });
    reg.link_momentum(parameter_momentum, parameter);

    let scope = Scope {
        registry: &reg,
        metric,
    };
    let lagrangian = scope.eval(&ast.lagrangian)?.scalar("the Lagrangian")?;
    check_input_generators(&reg, &lagrangian, "the Lagrangian")?;
    if lagrangian
        .num()
        .terms()
        .any(|(m, _)| m.parity() == Parity::Odd)
    {
        return Err(FrontendError::Parity(
            "the Lagrangian has odd-degree monomials".into(),
        ));
    }
    let side_conditions = denominator_conditions(&lagrangian);
    Ok(Model {
        name: ast.name,
        registry: reg,
        parameter,
        parameter_momentum,
        metric,
        declarations,
        lagrangian,
        side_conditions,
    })
}

/// Non-constant generators of a denominator, each assumed nonzero.
pub(crate) fn denominator_conditions(e: &Expr) -> Vec<Expr> {
    let mut out: Vec<Expr> = Vec::new();
    for (m, _) in e.den().terms() {
        if e.den().len() > 1 {
            out.push(Expr::from_poly(e.den().clone()));
            break;
        }
        for &(g, _) in &m.even {
            out.push(Expr::gen(Gen { id: g, odd: false }));
        }
    }
    out
}

fn check_input_generators(reg: &Registry, e: &Expr, what: &str) -> Result<(), FrontendError> {
    for id in e.generators() {
        let info = reg.info(id);
        if info.kind == Kind::Momentum {
            return Err(FrontendError::Model(format!(
                "{what} mentions the momentum `{}`",
                reg.display(id, NameStyle::Dsl)
            )));
        }
        if info.kind == Kind::Velocity && info.order > INPUT_ORDER_CAP {
            return Err(FrontendError::Unsupported(format!(
                "{what} uses a τ-derivative of order {} (maximum {INPUT_ORDER_CAP})",
                info.order
            )));
        }
    }
    Ok(())
}

pub(crate) fn parse_expr_in(
    registry: &Registry,
    metric: [i8; 4],
    text: &str,
) -> Result<Expr, FrontendError> {
    let mut p = Parser::new(text)?;
    let ast = p.expr()?;
    p.finish()?;
    Scope { registry, metric }
        .eval(&ast)?
        .scalar("the expression")
}

pub(crate) enum Value {
    Scalar(Expr),
    Vector([Expr; 4]),
}

impl Value {
    pub fn scalar(self, what: &str) -> Result<Expr, FrontendError> {
        match self {
            Value::Scalar(e) => Ok(e),
            Value::Vector(_) => Err(FrontendError::Shape(format!(
                "{what} is a 4-vector; contract it with dot(…)"
            ))),
        }
    }
}

pub(crate) struct Scope<'a> {
    pub registry: &'a Registry,
    pub metric: [i8; 4],
}

fn at(pos: Pos, e: KernelError) -> FrontendError {
    match e {
        KernelError::OddDenominator => FrontendError::OddDenominator {
            line: pos.line,
            col: pos.col,
        },
        KernelError::DivisionByZero => FrontendError::Syntax {
            line: pos.line,
            col: pos.col,
            message: "division by zero".into(),
        },
        other => FrontendError::Unsupported(other.to_string()),
    }
}

impl Scope<'_> {
    pub fn eval(&self, ast: &Ast) -> Result<Value, FrontendError> {
        use Value::{Scalar as S, Vector as V};
        Ok(match ast {
            Ast::Int(n) => S(Expr::scalar(Scalar::new(
                num_rational::BigRational::from_integer(n.clone()),
                num_rational::BigRational::from_integer(0.into()),
            ))),
            Ast::I => S(Expr::i()),
            Ast::Ident(name, pos) => {
                if let Some(id) = self.registry.lookup(name, None) {
                    S(Expr::gen(self.registry.gen(id)))
                } else if self.registry.is_family(name) {
                    V(std::array::from_fn(|c| {
                        let id = self.registry.lookup(name, Some(c as u8)).unwrap();
                        Expr::gen(self.registry.gen(id))
                    }))
                } else {
                    return Err(FrontendError::Undeclared {
                        name: name.clone(),
                        line: pos.line,
                        col: pos.col,
                    });
                }
            }
            Ast::Index(name, c, pos) => match self.registry.lookup(name, Some(*c)) {
                Some(id) => S(Expr::gen(self.registry.gen(id))),
                None => {
                    return Err(FrontendError::Undeclared {
                        name: format!("{name}[{c}]"),
                        line: pos.line,
                        col: pos.col,
                    })
                }
            },
            Ast::Deriv(inner, pos) => {
                let d = |e: &Expr| tau_derivative(e, self.registry).map_err(|e| at(*pos, e));
                match self.eval(inner)? {
                    S(e) => S(d(&e)?),
                    V(v) => V(try_map(&v, d)?),
                }
            }
            Ast::Dot(a, b, pos) => match (self.eval(a)?, self.eval(b)?) {
                (V(a), V(b)) => {
                    let mut acc = Expr::zero();
                    for c in 0..4 {
                        let t = a[c].mul(&b[c]).scale(&Scalar::int(self.metric[c] as i64));
                        acc = acc.add(&t);
                    }
                    S(acc)
                }
                _ => {
                    return Err(FrontendError::Shape(format!(
                        "dot(…) at {}:{} needs two 4-vectors",
                        pos.line, pos.col
                    )))
                }
            },
            Ast::Neg(a) => match self.eval(a)? {
                S(e) => S(e.neg()),
                V(v) => V(v.map(|e| e.neg())),
            },
            Ast::Add(a, b) | Ast::Sub(a, b) => {
                let minus = matches!(ast, Ast::Sub(..));
                let f = |x: &Expr, y: &Expr| if minus { x.sub(y) } else { x.add(y) };
                match (self.eval(a)?, self.eval(b)?) {
                    (S(x), S(y)) => S(f(&x, &y)),
                    (V(x), V(y)) => V(std::array::from_fn(|c| f(&x[c], &y[c]))),
                    _ => {
                        return Err(FrontendError::Shape(
                            "cannot add a scalar and a 4-vector".into(),
                        ))
                    }
                }
            }
            Ast::Mul(a, b, pos) => match (self.eval(a)?, self.eval(b)?) {
                (S(x), S(y)) => S(x.mul(&y)),
                (S(x), V(y)) => V(y.map(|e| x.mul(&e))),
                (V(x), S(y)) => V(x.map(|e| e.mul(&y))),
                (V(_), V(_)) => {
                    return Err(FrontendError::Shape(format!(
                        "product of two 4-vectors at {}:{}; use dot(…)",
                        pos.line, pos.col
                    )))
                }
            },
            Ast::Div(a, b, pos) => {
                let den = match self.eval(b)? {
                    S(e) => e,
                    V(_) => {
                        return Err(FrontendError::Shape(format!(
                            "division by a 4-vector at {}:{}",
                            pos.line, pos.col
                        )))
                    }
                };
                match self.eval(a)? {
                    S(x) => S(x.div(&den).map_err(|e| at(*pos, e))?),
                    V(v) => V(try_map(&v, |e| e.div(&den).map_err(|e| at(*pos, e)))?),
                }
            }
            Ast::Pow(a, k) => match self.eval(a)? {
                S(e) => S(e.pow(*k)),
                V(_) => return Err(FrontendError::Shape("power of a 4-vector".into())),
            },
        })
    }
}

fn try_map<F>(v: &[Expr; 4], mut f: F) -> Result<[Expr; 4], FrontendError>
where
    F: FnMut(&Expr) -> Result<Expr, FrontendError>,
{
    Ok([f(&v[0])?, f(&v[1])?, f(&v[2])?, f(&v[3])?])
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPINNING: &str = include_str!("../../fixtures/spinning.hjc");

    #[test]
    fn roster_order_and_names() {
        let m = parse_model(SPINNING).unwrap();
        let names: Vec<String> = m.registry.ids().take(13).map(|id| m.name_of(id)).collect();
        assert_eq!(
            names,
            [
                "pi_e", "pi_chi", "p0", "p1", "p2", "p3", "pi_psi0", "pi_psi1", "pi_psi2",
                "pi_psi3", "pi_psi5", "p_tau", "m"
            ]
        );
        let e = m.lookup("e", None).unwrap();
        assert_eq!(m.name_of(m.momentum(e)), "pi_e");
        assert_eq!(m.name_of(m.velocity(e)), "d(e)");
        assert_eq!(m.side_conditions.len(), 1);
        assert_eq!(m.render(&m.side_conditions[0]), "e");
    }

    #[test]
    fn pretty_print_round_trips() {
        let m = parse_model(SPINNING).unwrap();
        let again = parse_model(&m.pretty_print()).unwrap();
        assert!(again.lagrangian.equals(&m.lagrangian));
        assert_eq!(again.declarations, m.declarations);
        assert_eq!(again.pretty_print(), m.pretty_print());
    }

    #[test]
    fn regular_model_parses() {
        let m =
            parse_model("model m0\nparameter t\nvariable q : even\nlagrangian: d(q)^2/2").unwrap();
        assert_eq!(m.render(&m.lagrangian), "1/2*d(q)^2");
    }

    #[test]
    fn diagnostics() {
        let undeclared = parse_model("model a parameter t variable q : even lagrangian: q*z");
        assert!(
            matches!(undeclared, Err(FrontendError::Undeclared { ref name, .. }) if name == "z")
        );
        let odd_den =
            parse_model("model a parameter t variable q : odd variable r : odd lagrangian: q*r/q");
        assert!(matches!(odd_den, Err(FrontendError::OddDenominator { .. })));
        let odd_l = parse_model("model a parameter t variable q : odd lagrangian: q");
        assert!(matches!(odd_l, Err(FrontendError::Parity(_))));
        let two = parse_model("model a parameter t parameter s variable q : even lagrangian: q");
        assert!(matches!(two, Err(FrontendError::Syntax { .. })));
        let vec = parse_model("model a parameter t variable x[4] : even lagrangian: d(x)");
        assert!(matches!(vec, Err(FrontendError::Shape(_))));
        let third = parse_model("model a parameter t variable q : even lagrangian: d(d(d(q)))");
        assert!(matches!(third, Err(FrontendError::Unsupported(_))));
        let dup =
            parse_model("model a parameter t variable q : even constant q : even lagrangian: q");
        assert!(matches!(dup, Err(FrontendError::Syntax { .. })));
    }

    #[test]
    fn expressions_see_momenta() {
        let m = parse_model(SPINNING).unwrap();
        let h = m.parse_expr("dot(p,p) - m^2").unwrap();
        assert_eq!(m.render(&h), "p0^2 - p1^2 - p2^2 - p3^2 - m^2");
    }
}
