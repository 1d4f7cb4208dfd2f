//! Machine- and human-readable analysis reports, and comparison against
//! reference expectations.
//!
//! An expectation file holds one reference per line, in model syntax:
//!
//! ```text
//! momentum x[0] = -(d(x[0]) - I*chi*psi[0])/e
//! h0 = -e/2*(dot(p,p) - m^2)
//! tde pi_e : tau = -(dot(p,p) - m^2)/2
//! tde p[0] = 0
//! determined psi5 : tau = m*chi/2
//! constraint H5 = dot(p,p) - m^2
//! ```
//!
//! `tde` compares against the one-form as derived (legs unresolved),
//! `determined` against a differential fixed by closure.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::analysis::Analysis;
use crate::bracket::anticommutator_bridge;
use crate::engine::{Event, OneForm, Origin};
use crate::error::{Error, Result};
use crate::frontend::{FrontendError, Model};
use crate::kernel::{Expr, GenId, Namer, Scalar};

#[derive(Clone, Debug)]
pub enum Reference {
    Momentum { coordinate: GenId, expr: Expr },
    H0(Expr),
    Constraint { name: String, expr: Expr },
    Tde { variable: GenId, form: OneForm },
    Determined { leg: GenId, form: OneForm },
}

#[derive(Clone, Debug)]
pub struct Expectation {
    /// The line as written, minus the right-hand side: `tde pi_psi5`.
    pub label: String,
    pub reference: Reference,
}

#[derive(Clone, Debug)]
pub struct ExpectationResult {
    pub label: String,
    pub matched: bool,
    pub expected: String,
    pub derived: String,
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    FrontendError::Syntax {
        line,
        col: 1,
        message: message.into(),
    }
    .into()
}

fn target(model: &Model, text: &str, line: usize) -> Result<GenId> {
    let text = text.trim();
    let (name, comp) = match text.split_once('[') {
        Some((n, rest)) => {
            let c = rest
                .strip_suffix(']')
                .and_then(|c| c.trim().parse::<u8>().ok())
                .ok_or_else(|| bad(line, format!("bad component in `{text}`")))?;
            (n.trim(), Some(c))
        }
        None => (text, None),
    };
    model.lookup(name, comp).ok_or_else(|| {
        FrontendError::Undeclared {
            name: text.to_string(),
            line,
            col: 1,
        }
        .into()
    })
}

fn parse_form(model: &Model, text: &str, line: usize) -> Result<OneForm> {
    let mut form = OneForm::zero();
    for part in text.split(';') {
        let (leg, coeff) = part.split_once('=').ok_or_else(|| {
            bad(
                line,
                format!("expected `leg = coefficient`, got `{}`", part.trim()),
            )
        })?;
        form.add_leg(target(model, leg, line)?, model.parse_expr(coeff)?);
    }
    Ok(form)
}

pub fn parse_expectations(model: &Model, text: &str) -> Result<Vec<Expectation>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (kind, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        let (label, reference) = match kind {
            "h0" => {
                let rhs = rest
                    .strip_prefix('=')
                    .ok_or_else(|| bad(line, "expected `h0 = …`"))?;
                ("h0".to_string(), Reference::H0(model.parse_expr(rhs)?))
            }
            "momentum" | "constraint" => {
                let (lhs, rhs) = rest
                    .split_once('=')
                    .ok_or_else(|| bad(line, format!("expected `{kind} NAME = …`")))?;
                let label = format!("{kind} {}", lhs.trim());
                let expr = model.parse_expr(rhs)?;
                let r = if kind == "momentum" {
                    Reference::Momentum {
                        coordinate: target(model, lhs, line)?,
                        expr,
                    }
                } else {
                    Reference::Constraint {
                        name: lhs.trim().to_string(),
                        expr,
                    }
                };
                (label, r)
            }
            "tde" | "determined" => {
                let (lhs, form) = if let Some((lhs, legs)) = rest.split_once(':') {
                    (lhs, parse_form(model, legs, line)?)
                } else {
                    let (lhs, rhs) = rest
                        .split_once('=')
                        .ok_or_else(|| bad(line, format!("expected `{kind} NAME : leg = …`")))?;
                    if !model.parse_expr(rhs)?.is_zero() {
                        return Err(bad(line, "a form without legs must be `= 0`"));
                    }
                    (lhs, OneForm::zero())
                };
                let label = format!("{kind} {}", lhs.trim());
                let id = target(model, lhs, line)?;
                let r = if kind == "tde" {
                    Reference::Tde { variable: id, form }
                } else {
                    Reference::Determined { leg: id, form }
                };
                (label, r)
            }
            other => return Err(bad(line, format!("unknown expectation `{other}`"))),
        };
        out.push(Expectation { label, reference });
    }
    Ok(out)
}

pub fn check_expectations(a: &Analysis, expectations: &[Expectation]) -> Vec<ExpectationResult> {
    let m = &a.model;
    let legs = &a.tdes.legs;
    let missing = || "(absent)".to_string();
    expectations
        .iter()
        .map(|x| {
            let (matched, expected, derived) = match &x.reference {
                Reference::Momentum { coordinate, expr } => match a.momenta.entry(*coordinate) {
                    Some(e) => (
                        e.definition.equals(expr),
                        m.render(expr),
                        m.render(&e.definition),
                    ),
                    None => (false, m.render(expr), missing()),
                },
                Reference::H0(expr) => (
                    a.hamiltonians.h0.equals(expr),
                    m.render(expr),
                    m.render(&a.hamiltonians.h0),
                ),
                Reference::Constraint { name, expr } => match a.ledger.constraint(name) {
                    Some(c) => (c.expr.equals(expr), m.render(expr), m.render(&c.expr)),
                    None => (false, m.render(expr), missing()),
                },
                Reference::Tde { variable, form } => match a.tdes.forms.get(variable) {
                    Some(f) => (f.equals(form), form.render(m, legs), f.render(m, legs)),
                    None => (false, form.render(m, legs), missing()),
                },
                Reference::Determined { leg, form } => match a.tdes.determined.get(leg) {
                    Some(f) => (f.equals(form), form.render(m, legs), f.render(m, legs)),
                    None => (false, form.render(m, legs), missing()),
                },
            };
            ExpectationResult {
                label: x.label.clone(),
                matched,
                expected,
                derived,
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

/// Scalars mention no generators.
struct NoNames;

impl Namer for NoNames {
    fn name(&self, id: GenId) -> String {
        format!("g{}", id.0)
    }
}

fn scalar_text(s: &Scalar) -> String {
    Expr::scalar(s.clone()).render(&NoNames)
}

fn event_json(m: &Model, legs: &[GenId], e: &Event) -> Value {
    match e {
        Event::DeterminedDifferential {
            pass,
            source,
            leg,
            form,
        } => json!({
            "pass": pass, "event": "determined", "source": source,
            "leg": m.name_of(*leg), "form": form.render(m, legs),
        }),
        Event::NewConstraint {
            pass,
            name,
            expr,
            source,
            leg,
        } => json!({
            "pass": pass, "event": "new_constraint", "source": source,
            "leg": m.name_of(*leg), "name": name, "expr": m.render(expr),
        }),
        Event::Reduced {
            pass,
            source,
            witness,
        } => {
            let w: Vec<Value> = witness
                .iter()
                .map(|(leg, terms)| {
                    let terms: Map<String, Value> = terms
                        .iter()
                        .map(|(n, e)| (n.clone(), Value::String(m.render(e))))
                        .collect();
                    json!({"leg": m.name_of(*leg), "multipliers": terms})
                })
                .collect();
            json!({"pass": pass, "event": "reduced", "source": source, "witness": w})
        }
        Event::IdenticallyZero { pass, source } => {
            json!({"pass": pass, "event": "identically_zero", "source": source})
        }
        Event::Pending {
            pass,
            source,
            legs: pl,
        } => json!({
            "pass": pass, "event": "pending", "source": source,
            "legs": pl.iter().map(|l| m.name_of(*l)).collect::<Vec<_>>(),
        }),
    }
}

fn named_list<'a>(m: &Model, items: impl Iterator<Item = (&'a str, &'a Expr)>) -> Value {
    Value::Array(items.map(|(n, e)| json!({ n: m.render(e) })).collect())
}

pub fn to_json(a: &Analysis, expectations: &[ExpectationResult]) -> Value {
    let m = &a.model;
    let legs = &a.tdes.legs;
    let momenta: Vec<Value> = a
        .momenta
        .entries
        .iter()
        .map(|e| {
            json!({
                "coordinate": m.name_of(e.coordinate),
                "momentum": m.name_of(e.momentum),
                "definition": m.render(&e.definition),
                "velocity": e.solution.as_ref().map(|s| m.render(s)),
            })
        })
        .collect();
    let primaries = named_list(m, a.ledger.primaries().map(|c| (c.name.as_str(), &c.expr)));
    let secondaries: Vec<Value> = a
        .ledger
        .secondaries()
        .map(|c| {
            let source = match &c.origin {
                Origin::Secondary { source } => source.as_str(),
                _ => "",
            };
            json!({ c.name.clone(): m.render(&c.expr), "source": source })
        })
        .collect();
    let hamiltonians: Vec<Value> = a
        .hamiltonians
        .members
        .iter()
        .map(|h| json!({"name": h.name, "parameter": m.name_of(h.parameter), "expr": m.render(&h.expr)}))
        .collect();
    let tdes: Map<String, Value> = a
        .tdes
        .forms
        .iter()
        .map(|(z, f)| (m.name_of(*z), Value::String(f.render(m, legs))))
        .collect();
    let determined: Map<String, Value> = a
        .tdes
        .determined
        .iter()
        .map(|(z, f)| (m.name_of(*z), Value::String(f.render(m, legs))))
        .collect();
    let b = &a.brackets;
    let classification: Map<String, Value> = b
        .names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            (n.clone(), {
                let mut entry = json!({
                    "class": b.classes[i].to_string(),
                    "partners": b.partners[i],
                    "plain_brackets_reduce": b.plain_first_class[i],
                });
                if let Some(f) = &b.first_class_forms[i] {
                    if !f.equals(&a.ledger.constraint(n).expect("classified").expr) {
                        entry["first_class_form"] = Value::String(m.render(f));
                    }
                }
                entry
            })
        })
        .collect();
    let brackets: Map<String, Value> = b
        .names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let row: Map<String, Value> = b
                .names
                .iter()
                .enumerate()
                .filter(|(j, _)| !b.matrix[i][*j].is_zero())
                .map(|(j, k)| (k.clone(), Value::String(m.render(&b.matrix[i][j]))))
                .collect();
            (n.clone(), Value::Object(row))
        })
        .collect();
    let block = b.constant_block.as_ref().map(|blk| {
        let mat = |rows: &[Vec<Scalar>]| -> Vec<Vec<String>> {
            rows.iter()
                .map(|r| r.iter().map(scalar_text).collect())
                .collect()
        };
        json!({
            "names": blk.names,
            "matrix": mat(&blk.matrix),
            "anticommutators": anticommutator_bridge(blk).map(|x| mat(&x)),
        })
    });
    let mut checks: Map<String, Value> = a
        .checks
        .iter()
        .map(|(n, v)| (n.clone(), Value::Bool(*v)))
        .collect();
    for r in expectations {
        checks.insert(format!("matches {}", r.label), Value::Bool(r.matched));
    }
    let discrepancies: Vec<Value> = expectations
        .iter()
        .filter(|r| !r.matched)
        .map(|r| json!({"item": r.label, "reference": r.expected, "derived": r.derived}))
        .collect();
    let side: Vec<String> = m.side_conditions.iter().map(|e| m.render(e)).collect();
    json!({
        "model": m.name,
        "parameter": m.name_of(m.parameter),
        "momenta": momenta,
        "primary_constraints": primaries,
        "secondary_constraints": secondaries,
        "h0": m.render(&a.hamiltonians.h0),
        "hamiltonians": hamiltonians,
        "tdes": tdes,
        "determined": determined,
        "closure_log": a.ledger.events.iter().map(|e| event_json(m, legs, e)).collect::<Vec<_>>(),
        "closure_passes": a.ledger.passes,
        "classification": classification,
        "brackets": brackets,
        "constant_bracket_block": block,
        "action_integrand": a.action_raw.render(m, legs),
        "action_integrand_on_shell": a.action.render(m, legs),
        "side_conditions": side,
        "checks": checks,
        "discrepancies": discrepancies,
    })
}

pub fn to_text(a: &Analysis, expectations: &[ExpectationResult]) -> String {
    let m = &a.model;
    let legs = &a.tdes.legs;
    let mut s = String::new();
    let _ = writeln!(s, "model {}", m.name);
    let _ = writeln!(s, "\nmomenta");
    for e in &a.momenta.entries {
        let _ = write!(
            s,
            "  {} = {}",
            m.name_of(e.momentum),
            m.render(&e.definition)
        );
        match &e.solution {
            Some(v) => {
                let _ = writeln!(s, "    [{} = {}]", m.name_of(e.velocity), m.render(v));
            }
            None => {
                let _ = writeln!(s, "    [primary]");
            }
        }
    }
    let _ = writeln!(s, "\nH0 = {}", m.render(&a.hamiltonians.h0));
    let _ = writeln!(s, "\nHamilton-Jacobi equations");
    for h in &a.hamiltonians.members {
        let _ = writeln!(s, "  {} = {} = 0", h.name, m.render(&h.expr));
    }
    let _ = writeln!(s, "\ntotal differential equations");
    for (z, f) in &a.tdes.forms {
        let _ = writeln!(s, "  d{} = {}", m.name_of(*z), f.render(m, legs));
    }
    let _ = writeln!(s, "\nclosure ({} passes)", a.ledger.passes);
    for e in &a.ledger.events {
        let line = match e {
            Event::DeterminedDifferential {
                source, leg, form, ..
            } => {
                format!("{source}: d{} = {}", m.name_of(*leg), form.render(m, legs))
            }
            Event::NewConstraint {
                source, name, expr, ..
            } => {
                format!("{source}: new constraint {name} = {}", m.render(expr))
            }
            Event::Reduced { source, .. } => format!("{source}: variation reduces"),
            Event::IdenticallyZero { source, .. } => format!("{source}: variation vanishes"),
            Event::Pending {
                source, legs: pl, ..
            } => format!(
                "{source}: pending on {}",
                pl.iter()
                    .map(|l| format!("d{}", m.name_of(*l)))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        };
        let _ = writeln!(s, "  [{}] {line}", e.pass());
    }
    let _ = writeln!(s, "\nconstraints");
    for (i, n) in a.brackets.names.iter().enumerate() {
        let c = a
            .ledger
            .constraint(n)
            .expect("classified constraint exists");
        let _ = writeln!(
            s,
            "  {n} = {}    ({} class)",
            m.render(&c.expr),
            a.brackets.classes[i]
        );
        if let Some(f) = &a.brackets.first_class_forms[i] {
            if !f.equals(&c.expr) {
                let _ = writeln!(s, "      first-class form: {}", m.render(f));
            }
        }
    }
    if let Some(b) = &a.brackets.constant_block {
        let _ = writeln!(s, "\nconstant bracket block over {}", b.names.join(", "));
        for row in &b.matrix {
            let r: Vec<String> = row.iter().map(scalar_text).collect();
            let _ = writeln!(s, "  [{}]", r.join(", "));
        }
    }
    let _ = writeln!(s, "\naction integrand\n  {}", a.action_raw.render(m, legs));
    let _ = writeln!(s, "  on shell: {}", a.action.render(m, legs));
    let _ = writeln!(s, "\nchecks");
    let mut all: BTreeMap<String, bool> = a.checks.iter().cloned().collect();
    for r in expectations {
        all.insert(format!("matches {}", r.label), r.matched);
    }
    for (n, v) in &all {
        let _ = writeln!(s, "  {:<5} {n}", if *v { "ok" } else { "FLAG" });
    }
    let flagged: Vec<&ExpectationResult> = expectations.iter().filter(|r| !r.matched).collect();
    if !flagged.is_empty() {
        let _ = writeln!(s, "\ndiscrepancies");
        for r in flagged {
            let _ = writeln!(
                s,
                "  {}\n    reference: {}\n    derived:   {}",
                r.label, r.expected, r.derived
            );
        }
    }
    s
}

pub fn emit(a: &Analysis, expectations: &[ExpectationResult], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&to_json(a, expectations)).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => to_text(a, expectations),
    }
}
