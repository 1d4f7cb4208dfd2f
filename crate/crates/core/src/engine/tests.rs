use super::*;
use crate::frontend::parse_model;
use crate::legendre::legendre;

/// ψ·p with ψ upper-index and p lower-index: no metric.
const PSI_P: &str = "(psi[0]*p[0] + psi[1]*p[1] + psi[2]*p[2] + psi[3]*p[3])";

struct Setup {
    model: Model,
    table: MomentumTable,
    hs: HamiltonianSet,
    tdes: Tdes,
}

fn setup(name: &str) -> Setup {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let mut model = parse_model(&std::fs::read_to_string(path).unwrap()).unwrap();
    let (table, hs) = legendre(&mut model).unwrap();
    let tdes = build_tdes(&model, &table, &hs);
    Setup {
        model,
        table,
        hs,
        tdes,
    }
}

fn id(m: &Model, name: &str, c: Option<u8>) -> GenId {
    m.lookup(name, c).unwrap()
}

fn form(m: &Model, legs: &[(&str, Option<u8>, &str)]) -> OneForm {
    let mut f = OneForm::zero();
    for &(leg, c, coeff) in legs {
        f.add_leg(id(m, leg, c), m.parse_expr(coeff).unwrap());
    }
    f
}

#[test]
fn spinning_tdes_match_printed_equations() {
    let s = setup("spinning.hjc");
    let m = &s.model;
    for mu in 0..4u8 {
        let g = if mu == 0 { "" } else { "-" };
        let dx = s.tdes.form(id(m, "x", Some(mu))).unwrap();
        // dx^μ = (−e p^μ + iχψ^μ) dτ with p^μ = g p_μ
        let want = form(
            m,
            &[("tau", None, &format!("{g}(-e*p[{mu}]) + I*chi*psi[{mu}]"))],
        );
        assert!(dx.equals(&want), "{}", dx.render(m, &s.tdes.legs));
        assert!(s.tdes.form(id(m, "p", Some(mu))).unwrap().is_zero());
        // dπ_μ = −iχp_μ dτ + i dψ_μ  (dψ_μ = g dψ^μ)
        let dpi = s.tdes.form(id(m, "pi_psi", Some(mu))).unwrap();
        let want = form(
            m,
            &[
                ("tau", None, &format!("-I*chi*p[{mu}]")),
                ("psi", Some(mu), &format!("{g}I")),
            ],
        );
        assert!(dpi.equals(&want), "{}", dpi.render(m, &s.tdes.legs));
    }
    let de = s.tdes.form(id(m, "pi_e", None)).unwrap();
    assert!(de.equals(&form(m, &[("tau", None, "-(dot(p,p) - m^2)/2")])));
    let dchi = s.tdes.form(id(m, "pi_chi", None)).unwrap();
    assert!(dchi.equals(&form(m, &[("tau", None, &format!("I*({PSI_P} - m*psi5)"))])));
    let d5 = s.tdes.form(id(m, "pi_psi5", None)).unwrap();
    assert!(d5.equals(&form(m, &[("tau", None, "I*m*chi"), ("psi5", None, "-I")])));
    // the same equation without the factor m is not what the derivation gives
    assert!(!d5.equals(&form(m, &[("tau", None, "I*chi"), ("psi5", None, "-I")])));
    assert!(s.tdes.form(id(m, "p_tau", None)).unwrap().is_zero());
}

#[test]
fn spinning_closure() {
    let mut s = setup("spinning.hjc");
    let ledger = closure(&s.model, &s.hs, &mut s.tdes).unwrap();
    let m = &s.model;
    let secondary: Vec<(String, String)> = ledger
        .secondaries()
        .map(|c| (c.name.clone(), m.render(&c.expr)))
        .collect();
    assert_eq!(secondary.len(), 2);
    assert_eq!(secondary[0].0, "H5");
    assert!(ledger
        .constraint("H5")
        .unwrap()
        .expr
        .equals(&m.parse_expr("dot(p,p) - m^2").unwrap()));
    assert!(ledger
        .constraint("H6")
        .unwrap()
        .expr
        .equals(&m.parse_expr(&format!("{PSI_P} - m*psi5")).unwrap()));
    assert!(ledger.passes <= 3, "{} passes", ledger.passes);

    for mu in 0..4u8 {
        let g = if mu == 0 { "" } else { "-" };
        let dpsi = s.tdes.determined[&id(m, "psi", Some(mu))].clone();
        let want = form(m, &[("tau", None, &format!("{g}chi*p[{mu}]/2"))]);
        assert!(dpsi.equals(&want));
    }
    let d5 = s.tdes.determined[&id(m, "psi5", None)].clone();
    assert!(d5.equals(&form(m, &[("tau", None, "m*chi/2")])));

    // dH6 = ½χ(p² − m²) dτ, a multiple of H5
    let h6 = ledger.constraint("H6").unwrap().expr.clone();
    let dh6 = total_variation(m, &s.tdes, &h6).unwrap();
    assert!(dh6.equals(&form(m, &[("tau", None, "chi*(dot(p,p) - m^2)/2")])));
    let red = ledger.reduce(&dh6.coefficient(s.tdes.tau()));
    assert!(red.reduced());

    // every member's variation reduces after closure
    for c in &ledger.members {
        let dv = total_variation(m, &s.tdes, &c.expr).unwrap();
        for (_, coeff) in dv.legs() {
            assert!(ledger.reduce(coeff).reduced(), "{}", c.name);
        }
    }
    assert!(ledger.events.iter().any(|e| matches!(
        e,
        Event::Reduced { source, .. } if source == "H6"
    )));
}

#[test]
fn closure_is_order_independent() {
    let base = {
        let mut s = setup("spinning.hjc");
        let l = closure(&s.model, &s.hs, &mut s.tdes).unwrap();
        (s, l)
    };
    let groups = 5;
    let mut perm: Vec<usize> = (0..groups).collect();
    let mut count = 0;
    permute(&mut perm, 0, &mut |order| {
        let mut s = setup("spinning.hjc");
        let l = closure_with_order(&s.model, &s.hs, &mut s.tdes, order).unwrap();
        count += 1;
        let secondaries: Vec<Expr> = l.secondaries().map(|c| c.expr.clone()).collect();
        assert_eq!(secondaries.len(), 2, "{order:?}");
        // same span: each side reduces to zero modulo the other
        for c in base.1.secondaries() {
            assert!(l.reduce(&c.expr).reduced(), "{order:?}");
        }
        for e in &secondaries {
            assert!(base.1.reduce(e).reduced(), "{order:?}");
        }
        assert_eq!(s.tdes.determined.len(), base.0.tdes.determined.len());
        for (leg, f) in &s.tdes.determined {
            assert!(f.equals(&base.0.tdes.determined[leg]), "{order:?}");
        }
    });
    assert_eq!(count, 120);
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

#[test]
fn chain_rule_audit() {
    let mut s = setup("spinning.hjc");
    let ledger = closure(&s.model, &s.hs, &mut s.tdes).unwrap();
    for c in &ledger.members {
        let a = total_variation(&s.model, &s.tdes, &c.expr).unwrap();
        let b = variation_by_leibniz(&s.model, &s.tdes, &c.expr).unwrap();
        assert!(a.equals(&b), "{}", c.name);
    }
}

#[test]
fn spinning_action_recovers_lagrangian() {
    let mut s = setup("spinning.hjc");
    closure(&s.model, &s.hs, &mut s.tdes).unwrap();
    let m = &s.model;
    let (raw, _) = action_integrand(m, &s.table, &s.hs, &s.tdes);
    let tau = form(
        m,
        &[(
            "tau",
            None,
            &format!(
                "e/2*(dot(p,p) - m^2) - I*chi*({PSI_P} - m*psi5) - e*dot(p,p) + I*chi*{PSI_P}"
            ),
        )],
    );
    assert!(raw
        .coefficient(m.parameter)
        .equals(&tau.coefficient(m.parameter)));
    let psi5 = id(m, "psi5", None);
    assert!(raw
        .coefficient(psi5)
        .equals(&m.parse_expr("I*psi5").unwrap()));
    let r = recover_action(m, &s.table, &s.hs, &s.tdes).unwrap();
    assert!(
        r.off_shell_residual.is_zero(),
        "{}",
        m.render(&r.off_shell_residual)
    );
    assert!(
        r.on_shell_residual.is_zero(),
        "{}",
        m.render(&r.on_shell_residual)
    );
}

#[test]
fn spinless_chain() {
    let mut s = setup("spinless.hjc");
    let ledger = closure(&s.model, &s.hs, &mut s.tdes).unwrap();
    let sec: Vec<&Constraint> = ledger.secondaries().collect();
    assert_eq!(sec.len(), 1);
    assert!(sec[0]
        .expr
        .equals(&s.model.parse_expr("dot(p,p) - m^2").unwrap()));
    assert_eq!(
        sec[0].origin,
        Origin::Secondary {
            source: "H1".into()
        }
    );
    let (_, resolved) = action_integrand(&s.model, &s.table, &s.hs, &s.tdes);
    let want = s.model.parse_expr("-e/2*(dot(p,p) + m^2)").unwrap();
    assert!(resolved.coefficient(s.model.parameter).equals(&want));
    assert!(recover_action(&s.model, &s.table, &s.hs, &s.tdes)
        .unwrap()
        .recovered());
}

#[test]
fn regular_model_closes_immediately() {
    let mut s = setup("regular.hjc");
    let ledger = closure(&s.model, &s.hs, &mut s.tdes).unwrap();
    assert_eq!(ledger.passes, 1);
    assert_eq!(ledger.constraints().count(), 0);
    assert!(s.tdes.determined.is_empty());
    let q = id(&s.model, "q", None);
    let p = id(&s.model, "pi_q", None);
    assert_eq!(
        s.tdes.form(q).unwrap().render(&s.model, &s.tdes.legs),
        "pi_q*dt"
    );
    assert!(s.tdes.form(p).unwrap().is_zero());
    let (raw, _) = action_integrand(&s.model, &s.table, &s.hs, &s.tdes);
    assert_eq!(raw.render(&s.model, &s.tdes.legs), "1/2*pi_q^2*dt");
    assert!(recover_action(&s.model, &s.table, &s.hs, &s.tdes)
        .unwrap()
        .recovered());
}

#[test]
fn inconsistent_system_is_reported() {
    // π_q = 1 is primary and its variation vanishes, but q enters linearly
    // with no kinetic term: L = q gives the constraint 1 = 0.
    let mut model = parse_model("model bad parameter t variable q : even lagrangian: q").unwrap();
    let (table, hs) = legendre(&mut model).unwrap();
    let mut tdes = build_tdes(&model, &table, &hs);
    assert!(matches!(
        closure(&model, &hs, &mut tdes),
        Err(Error::Inconsistent(_))
    ));
}

#[test]
fn constant_variation() {
    let s = setup("spinning.hjc");
    assert!(total_variation(&s.model, &s.tdes, &Expr::int(7))
        .unwrap()
        .is_zero());
    let h5 = s.model.parse_expr("dot(p,p) - m^2").unwrap();
    assert!(total_variation(&s.model, &s.tdes, &h5).unwrap().is_zero());
}
