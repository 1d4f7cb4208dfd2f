//! Graded rational expressions: a graded polynomial numerator over an even
//! polynomial denominator.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use super::generator::{Gen, GenId, Namer, Parity};
use super::poly::{Monomial, Poly, Side};
use super::scalar::Scalar;
use super::KernelError;

/// Normalized expression `num / den`.
///
/// Invariants: `den` is nonzero and has no odd generator; common even
/// power-product factors are cancelled; a single-term denominator has
/// coefficient 1; a multi-term denominator has leading coefficient 1 and
/// does not divide the numerator exactly. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Expr::scalar(Scalar::one())
    }

    pub fn scalar(s: Scalar) -> Self {
        Expr {
            num: Poly::constant(s),
            den: Poly::one(),
        }
    }

    pub fn int(n: i64) -> Self {
        Expr::scalar(Scalar::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Expr::scalar(Scalar::ratio(n, d))
    }

    pub fn i() -> Self {
        Expr::scalar(Scalar::i())
    }

    pub fn gen(g: Gen) -> Self {
        Expr {
            num: Poly::gen(g),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Expr {
            num: p,
            den: Poly::one(),
        }
    }

    /// Build and normalize `num / den`.
    pub fn fraction(num: Poly, den: Poly) -> Result<Self, KernelError> {
        if den.has_odd() {
            return Err(KernelError::OddDenominator);
        }
        if den.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(mut num: Poly, mut den: Poly) -> Self {
        if num.is_zero() {
            return Expr::zero();
        }
        if den.is_one() {
            return Expr { num, den };
        }
        let common = num.even_content().gcd_even(&den.even_content());
        if !common.is_one() {
            num = num.div_even_monomial(&common);
            den = den.div_even_monomial(&common);
        }
        if den.len() == 1 {
            let (m, c) = den
                .terms()
                .next()
                .map(|(m, c)| (m.clone(), c.clone()))
                .unwrap();
            let inv = c.inv().expect("nonzero coefficient");
            return Expr {
                num: num.scale(&inv),
                den: Poly::term(m, Scalar::one()),
            };
        }
        let lead = den.terms().next().map(|(_, c)| c.clone()).unwrap();
        let inv = lead.inv().expect("nonzero coefficient");
        num = num.scale(&inv);
        den = den.scale(&inv);
        if let Some(q) = num.div_exact(&den) {
            return Expr {
                num: q,
                den: Poly::one(),
            };
        }
        Expr { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value if the expression is a plain number.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_constant()
    }

    pub fn generators(&self) -> BTreeSet<GenId> {
        let mut s = self.num.generators();
        s.extend(self.den.generators());
        s
    }

    pub fn mentions(&self, id: GenId) -> bool {
        self.generators().contains(&id)
    }

    pub fn parity(&self) -> Option<Parity> {
        self.num.parity()
    }

    pub fn parity_part(&self, parity: Parity) -> Expr {
        Self::normalize(self.num.parity_part(parity), self.den.clone())
    }

    pub fn neg(&self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Expr {
        if s.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return Self::normalize(self.num.add(&other.num), self.den.clone());
        }
        if self.den.len() == 1 && other.den.len() == 1 {
            let a = self.den.terms().next().unwrap().0;
            let b = other.den.terms().next().unwrap().0;
            let l = a.lcm_even(b);
            let one = Scalar::one();
            let num = self
                .num
                .mul_monomial(&l.quotient(a), &one)
                .add(&other.num.mul_monomial(&l.quotient(b), &one));
            return Self::normalize(num, Poly::term(l, one));
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::normalize(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        Self::normalize(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// `self / other`; the divisor must be free of odd generators.
    pub fn div(&self, other: &Expr) -> Result<Expr, KernelError> {
        if other.num.has_odd() {
            return Err(KernelError::OddDenominator);
        }
        if other.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        Expr::fraction(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, k: u32) -> Expr {
        Self::normalize(self.num.pow(k), self.den.pow(k))
    }

    /// Cross-multiplied equality.
    pub fn equals(&self, other: &Expr) -> bool {
        self.num
            .mul(&other.den)
            .sub(&other.num.mul(&self.den))
            .is_zero()
    }

    pub fn derive(&self, g: Gen, side: Side) -> Expr {
        if g.odd || !self.den.generators().contains(&g.id) {
            return Self::normalize(self.num.derive(g, side), self.den.clone());
        }
        // quotient rule; g even so sides agree
        let dn = self.num.derive(g, side);
        let dd = self.den.derive(g, side);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalize(num, self.den.mul(&self.den))
    }

    pub fn derive_right(&self, g: Gen) -> Expr {
        self.derive(g, Side::Right)
    }

    pub fn derive_left(&self, g: Gen) -> Expr {
        self.derive(g, Side::Left)
    }

    /// Simultaneous substitution. Each binding must match the parity of the
    /// generator it replaces.
    pub fn substitute(&self, bindings: &BTreeMap<Gen, Expr>) -> Result<Expr, KernelError> {
        for (g, value) in bindings {
            if let Some(p) = value.parity() {
                if p != g.parity() {
                    return Err(KernelError::Grading {
                        generator: g.id,
                        expected: g.parity(),
                    });
                }
            }
        }
        let by_id: BTreeMap<GenId, &Expr> = bindings.iter().map(|(g, e)| (g.id, e)).collect();
        if !self.generators().iter().any(|g| by_id.contains_key(g)) {
            return Ok(self.clone());
        }
        let num = substitute_poly(&self.num, &by_id);
        let den = substitute_poly(&self.den, &by_id);
        num.div(&den)
    }

    pub fn render(&self, namer: &dyn Namer) -> String {
        let n = self.num.render(namer);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.render(namer);
        let n = if self.num.len() > 1 {
            format!("({n})")
        } else {
            n
        };
        let simple_den = self.den.len() == 1
            && self
                .den
                .terms()
                .next()
                .is_some_and(|(m, _)| m.even.len() == 1 && m.even[0].1 == 1);
        if simple_den {
            format!("{n}/{d}")
        } else {
            format!("{n}/({d})")
        }
    }
}

fn substitute_poly(p: &Poly, by_id: &BTreeMap<GenId, &Expr>) -> Expr {
    let mut out = Expr::zero();
    for (m, c) in p.terms() {
        let mut t = Expr::scalar(c.clone());
        let mut pending = Monomial::one();
        let flush = |t: &mut Expr, pending: &mut Monomial| {
            if !pending.is_one() {
                *t = t.mul(&Expr::from_poly(Poly::term(
                    std::mem::take(pending),
                    Scalar::one(),
                )));
            }
        };
        for &(g, e) in &m.even {
            match by_id.get(&g) {
                Some(v) => {
                    flush(&mut t, &mut pending);
                    t = t.mul(&v.pow(e));
                }
                None => pending.even.push((g, e)),
            }
        }
        flush(&mut t, &mut pending);
        for &g in &m.odd {
            match by_id.get(&g) {
                Some(v) => {
                    flush(&mut t, &mut pending);
                    t = t.mul(v);
                }
                None => pending.odd.push(g),
            }
        }
        flush(&mut t, &mut pending);
        out = out.add(&t);
    }
    out
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, o: &Expr) -> Expr {
        Expr::add(self, o)
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, o: &Expr) -> Expr {
        Expr::sub(self, o)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, o: &Expr) -> Expr {
        Expr::mul(self, o)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}
