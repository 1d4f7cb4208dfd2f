//! Model-level behaviour of the shipped fixtures beyond the golden values.

use hamjac::analyze_text;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

/// Writing the coupling as `dot(d(x),psi)*chi` instead of `chi*dot(d(x),psi)`
/// moves χ past ψ and flips the sign of every χψ term downstream.
#[test]
fn coupling_order_flips_the_odd_sign() {
    let left = analyze_text(&fixture("spinning.hjc")).unwrap();
    let right = analyze_text(&fixture("spinning_chi_right.hjc")).unwrap();
    let m = &right.model;
    for mu in 0..4u8 {
        let g = if mu == 0 { "" } else { "-" };
        let x = m.lookup("x", Some(mu)).unwrap();
        let p = &right.momenta.entry(x).unwrap().definition;
        let want = m
            .parse_expr(&format!("-({g}d(x[{mu}]) + I*chi*{g}psi[{mu}])/e"))
            .unwrap();
        assert!(p.equals(&want), "{}", m.render(p));
    }
    let h0 = m
        .parse_expr(
            "-e/2*(dot(p,p) - m^2) - I*chi*(psi[0]*p[0] + psi[1]*p[1] + psi[2]*p[2] + psi[3]*p[3])
             - I*m*chi*psi5",
        )
        .unwrap();
    assert!(
        right.hamiltonians.h0.equals(&h0),
        "{}",
        m.render(&right.hamiltonians.h0)
    );
    // the structure of the analysis is unchanged
    assert_eq!(
        right.ledger.secondaries().count(),
        left.ledger.secondaries().count()
    );
    assert!(right.recovery.recovered());
    assert_eq!(right.brackets.classes, left.brackets.classes);
}

#[test]
fn regular_model_has_no_constraints() {
    let a = analyze_text(&fixture("regular.hjc")).unwrap();
    assert_eq!(a.ledger.constraints().count(), 0);
    assert!(a.brackets.names.is_empty());
    assert!(a.checks.iter().all(|(_, ok)| *ok), "{:?}", a.checks);
}

#[test]
fn every_check_holds_for_the_shipped_models() {
    for name in ["spinning.hjc", "spinless.hjc", "spinning_chi_right.hjc"] {
        let a = analyze_text(&fixture(name)).unwrap();
        for (check, ok) in &a.checks {
            assert!(ok, "{name}: {check}");
        }
    }
}
