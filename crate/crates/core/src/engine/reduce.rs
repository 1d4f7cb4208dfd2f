//! Reduction of an expression modulo a list of constraints by multivariate
//! division over the graded polynomial ring.

use crate::kernel::{Expr, Poly};

#[derive(Clone, Debug)]
pub struct Reduction {
    /// What is left after division; zero iff the input reduced.
    pub remainder: Expr,
    /// Left multipliers, one per basis element: `input = Σ a_i g_i + remainder`.
    pub multipliers: Vec<Expr>,
}

impl Reduction {
    pub fn reduced(&self) -> bool {
        self.remainder.is_zero()
    }
}

/// Divide the numerator of `f` by the numerators of `basis`, leading terms
/// taken in graded-lex order. Denominators are nonvanishing by assumption,
/// so they carry through to the multipliers unchanged.
pub fn reduce(f: &Expr, basis: &[Expr]) -> Reduction {
    let divisors: Vec<&Poly> = basis.iter().map(|g| g.num()).collect();
    let mut rest = f.num().clone();
    let mut remainder = Poly::zero();
    let mut quotients = vec![Poly::zero(); basis.len()];
    while let Some((lm, lc)) = rest.leading() {
        let (lm, lc) = (lm.clone(), lc.clone());
        let hit = divisors.iter().enumerate().find_map(|(i, g)| {
            let (gm, gc) = g.leading()?;
            if !lm.divisible_by(gm) {
                return None;
            }
            let q = lm.quotient(gm);
            let (prod, negative) = q.mul(gm)?;
            debug_assert_eq!(prod, lm);
            let mut c = lc.div(gc)?;
            if negative {
                c = -c;
            }
            Some((i, q, c))
        });
        match hit {
            Some((i, q, c)) => {
                rest = rest.sub(&Poly::term(q.clone(), c.clone()).mul(divisors[i]));
                quotients[i].add_term(q, c);
            }
            None => {
                remainder.add_term(lm.clone(), lc.clone());
                rest = rest.sub(&Poly::term(lm, lc));
            }
        }
    }
    let over_den =
        |p: Poly| Expr::fraction(p, f.den().clone()).expect("denominator of a valid expression");
    // g_i carries its own denominator: a·(N_g) = (a·D_g)·g
    let multipliers = quotients
        .into_iter()
        .zip(basis)
        .map(|(q, g)| over_den(q).mul(&Expr::from_poly(g.den().clone())))
        .collect();
    Reduction {
        remainder: over_den(remainder),
        multipliers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Gen, GenId};

    fn g(id: u32, odd: bool) -> Expr {
        Expr::gen(Gen { id: GenId(id), odd })
    }

    #[test]
    fn witness_reconstructs_input() {
        let (x, y, t) = (g(0, false), g(1, false), g(2, true));
        let h1 = x.mul(&x).sub(&y);
        let h2 = t.mul(&y).add(&t);
        let f = t
            .mul(&h1)
            .mul(&x)
            .add(&y.mul(&h2))
            .add(&Expr::int(3).mul(&h1));
        let r = reduce(&f, &[h1.clone(), h2.clone()]);
        assert!(r.reduced());
        let back = r.multipliers[0].mul(&h1).add(&r.multipliers[1].mul(&h2));
        assert!(back.equals(&f));
    }

    #[test]
    fn non_member_leaves_remainder() {
        let (x, y) = (g(0, false), g(1, false));
        let r = reduce(&x.add(&y), &[x.mul(&x)]);
        assert!(!r.reduced());
        assert!(r.remainder.equals(&x.add(&y)));
    }

    #[test]
    fn denominators_carry_into_multipliers() {
        let (x, e) = (g(0, false), g(1, false));
        let h = x.sub(&Expr::one());
        let f = h.div(&e).unwrap();
        let r = reduce(&f, std::slice::from_ref(&h));
        assert!(r.reduced());
        assert!(r.multipliers[0].mul(&h).equals(&f));
    }
}
