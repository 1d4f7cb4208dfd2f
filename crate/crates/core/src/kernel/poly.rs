//! Graded polynomials: even generators with exponents, odd generators as an
//! ordered product in normal (ascending id) order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use super::generator::{Gen, GenId, Namer, Parity};
use super::scalar::Scalar;

/// Which end of a Grassmann monomial a derivative strips from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Power product of generators, coefficient excluded.
///
/// `even` is sorted by id with positive exponents; `odd` is strictly
/// increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub even: Vec<(GenId, u32)>,
    pub odd: Vec<GenId>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn of(g: Gen) -> Self {
        if g.odd {
            Monomial {
                even: vec![],
                odd: vec![g.id],
            }
        } else {
            Monomial {
                even: vec![(g.id, 1)],
                odd: vec![],
            }
        }
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_odd_count(self.odd.len())
    }

    pub fn degree(&self) -> u32 {
        self.even.iter().map(|(_, e)| e).sum::<u32>() + self.odd.len() as u32
    }

    pub fn exponent(&self, id: GenId) -> u32 {
        if let Ok(i) = self.even.binary_search_by_key(&id, |&(g, _)| g) {
            return self.even[i].1;
        }
        u32::from(self.odd.binary_search(&id).is_ok())
    }

    pub fn generators(&self) -> impl Iterator<Item = GenId> + '_ {
        self.even
            .iter()
            .map(|&(g, _)| g)
            .chain(self.odd.iter().copied())
    }

    /// Product with the sign picked up while sorting the odd factors, or
    /// `None` if an odd factor repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let mut odd = Vec::with_capacity(self.odd.len() + other.odd.len());
        let mut negative = false;
        let (a, b) = (&self.odd, &other.odd);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    odd.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    // b[j] jumps over the remaining a[i..]
                    if (a.len() - i) % 2 == 1 {
                        negative = !negative;
                    }
                    odd.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => return None,
            }
        }
        odd.extend_from_slice(&a[i..]);
        odd.extend_from_slice(&b[j..]);
        Some((
            Monomial {
                even: merge_even(&self.even, &other.even),
                odd,
            },
            negative,
        ))
    }

    /// Graded lexicographic comparison used for division: total degree,
    /// then lexicographic on exponents walking ids upward.
    pub fn cmp_grlex(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| lex_exponents(self, other))
    }

    /// `other` divides `self` as a power product (sign ignored).
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        other.even.iter().all(|&(g, e)| {
            self.even
                .binary_search_by_key(&g, |&(h, _)| h)
                .map(|i| self.even[i].1 >= e)
                .unwrap_or(false)
        }) && other.odd.iter().all(|g| self.odd.binary_search(g).is_ok())
    }

    /// Power-product quotient `self / other`; caller checks divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        let mut even = Vec::new();
        for &(g, e) in &self.even {
            let d = other.exponent(g);
            if e > d {
                even.push((g, e - d));
            }
        }
        let odd = self
            .odd
            .iter()
            .copied()
            .filter(|g| other.odd.binary_search(g).is_err())
            .collect();
        Monomial { even, odd }
    }

    pub fn gcd_even(&self, other: &Monomial) -> Monomial {
        let even = self
            .even
            .iter()
            .filter_map(|&(g, e)| {
                let d = other.exponent(g);
                (d > 0).then(|| (g, e.min(d)))
            })
            .collect();
        Monomial { even, odd: vec![] }
    }

    pub fn lcm_even(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<GenId, u32> = self.even.iter().copied().collect();
        for &(g, e) in &other.even {
            let slot = map.entry(g).or_insert(0);
            *slot = (*slot).max(e);
        }
        Monomial {
            even: map.into_iter().collect(),
            odd: vec![],
        }
    }

    pub fn render(&self, namer: &dyn Namer) -> String {
        let mut parts: Vec<String> = self
            .even
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    namer.name(g)
                } else {
                    format!("{}^{}", namer.name(g), e)
                }
            })
            .collect();
        parts.extend(self.odd.iter().map(|&g| namer.name(g)));
        parts.join("*")
    }
}

fn merge_even(a: &[(GenId, u32)], b: &[(GenId, u32)]) -> Vec<(GenId, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Lexicographic comparison of sorted `(id, exponent)` lists: the first id
/// where the exponents differ decides, larger exponent = greater.
fn lex_lists(a: &[(GenId, u32)], b: &[(GenId, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(ga, ea)), Some(&(gb, eb))) => match ga.cmp(&gb) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    o => return o,
                },
            },
        }
    }
}

fn combined(m: &Monomial) -> Vec<(GenId, u32)> {
    let mut v: Vec<(GenId, u32)> = m.even.clone();
    v.extend(m.odd.iter().map(|&g| (g, 1)));
    v.sort_unstable();
    v
}

fn lex_exponents(a: &Monomial, b: &Monomial) -> Ordering {
    lex_lists(&combined(a), &combined(b))
}

impl Ord for Monomial {
    /// Canonical storage and print order: odd degree, then the odd factor
    /// sequence, then even exponents with higher powers of earlier
    /// generators first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.odd
            .len()
            .cmp(&other.odd.len())
            .then_with(|| self.odd.cmp(&other.odd))
            .then_with(|| lex_lists(&other.even, &self.even))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sum of monomials with nonzero Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn gen(g: Gen) -> Self {
        Self::term(Monomial::of(g), Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn has_odd(&self) -> bool {
        self.terms.keys().any(|m| !m.odd.is_empty())
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let sum = &*slot + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&Scalar::int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, negative)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Poly {
        self.mul(&Poly::term(m.clone(), c.clone()))
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn generators(&self) -> BTreeSet<GenId> {
        self.terms.keys().flat_map(|m| m.generators()).collect()
    }

    /// Parity if every monomial agrees; the zero polynomial reports `None`.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn parity_part(&self, parity: Parity) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.parity() == parity)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn derive(&self, g: Gen, side: Side) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if g.odd {
                let Ok(pos) = m.odd.binary_search(&g.id) else {
                    continue;
                };
                let hops = match side {
                    Side::Left => pos,
                    Side::Right => m.odd.len() - 1 - pos,
                };
                let mut odd = m.odd.clone();
                odd.remove(pos);
                let c = if hops % 2 == 1 { -c } else { c.clone() };
                out.add_term(
                    Monomial {
                        even: m.even.clone(),
                        odd,
                    },
                    c,
                );
            } else {
                let Ok(pos) = m.even.binary_search_by_key(&g.id, |&(h, _)| h) else {
                    continue;
                };
                let e = m.even[pos].1;
                let mut even = m.even.clone();
                if e == 1 {
                    even.remove(pos);
                } else {
                    even[pos].1 = e - 1;
                }
                out.add_term(
                    Monomial {
                        even,
                        odd: m.odd.clone(),
                    },
                    c * &Scalar::int(e as i64),
                );
            }
        }
        out
    }

    /// Leading monomial under [`Monomial::cmp_grlex`].
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| a.0.cmp_grlex(b.0))
    }

    /// Greatest even power product dividing every term.
    pub fn even_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = Monomial {
            even: first.even.clone(),
            odd: vec![],
        };
        for m in it {
            g = g.gcd_even(m);
        }
        g
    }

    /// Divide every term by an even power product that divides it.
    pub fn div_even_monomial(&self, m: &Monomial) -> Poly {
        debug_assert!(m.odd.is_empty());
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.quotient(m), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient by an even polynomial, or `None` if it does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        debug_assert!(!d.has_odd());
        let (dl, dc) = d.leading()?;
        let (dl, dc) = (dl.clone(), dc.clone());
        let mut rest = self.clone();
        let mut q = Poly::zero();
        while let Some((lm, lc)) = rest.leading() {
            if !lm.divisible_by(&dl) {
                return None;
            }
            let qm = lm.quotient(&dl);
            let qc = lc.div(&dc)?;
            rest = rest.sub(&d.mul_monomial(&qm, &qc));
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Total degree in the given generators (0 for the zero polynomial).
    pub fn degree_in(&self, set: &BTreeSet<GenId>) -> u32 {
        self.terms
            .keys()
            .map(|m| {
                m.generators()
                    .filter(|g| set.contains(g))
                    .map(|g| m.exponent(g))
                    .sum()
            })
            .max()
            .unwrap_or(0)
    }

    pub fn render(&self, namer: &dyn Namer) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let t = render_term(m, c, namer);
            if i == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        out
    }
}

fn render_term(m: &Monomial, c: &Scalar, namer: &dyn Namer) -> String {
    if m.is_one() {
        return if c.is_real() || c.is_imaginary() {
            c.to_string()
        } else {
            format!("({c})")
        };
    }
    let body = m.render(namer);
    if c.is_real() {
        if c.is_one() {
            body
        } else if (-c).is_one() {
            format!("-{body}")
        } else {
            format!("{c}*{body}")
        }
    } else if c.is_imaginary() {
        let im = Scalar::new(c.im.clone(), c.re.clone());
        if im.is_one() {
            format!("I*{body}")
        } else if (-&im).is_one() {
            format!("-I*{body}")
        } else {
            format!("{im}*I*{body}")
        }
    } else {
        format!("({c})*{body}")
    }
}
