//! Property checks shared by the proptest suites and the acceptance target.
//!
//! Each check takes plain data (term lists, coefficient tables) so that both
//! proptest strategies and a seeded generator can drive it.

#![allow(dead_code)]

use std::collections::BTreeMap;

use hamjac::bracket::graded_poisson;
use hamjac::frontend::{parse_model, Model};
use hamjac::kernel::{tau_derivative, Expr, Gen, Parity, Side};
use hamjac::legendre::legendre;
use hamjac::numerics::GrassmannValue;
use hamjac::symmetry::is_total_derivative;
use num_complex::Complex64;
use rand::Rng;

/// One monomial: a Gaussian-integer coefficient, exponents for the even
/// generators and a subset (bitmask) of the odd generators.
#[derive(Clone, Debug)]
pub struct Term {
    pub re: i64,
    pub im: i64,
    pub even: Vec<u32>,
    pub odd: u32,
}

/// A random element: a polynomial, optionally divided by `1 + a·b`-style
/// even denominators built from the same data.
#[derive(Clone, Debug)]
pub struct Element {
    pub num: Vec<Term>,
    pub den: Option<Vec<Term>>,
}

pub struct Algebra {
    pub model: Model,
    pub even: Vec<Expr>,
    pub odd: Vec<Expr>,
    pub even_gens: Vec<Gen>,
    pub odd_gens: Vec<Gen>,
}

impl Algebra {
    fn new(model: Model, even: &[(&str, Option<u8>)], odd: &[(&str, Option<u8>)]) -> Self {
        let pick = |names: &[(&str, Option<u8>)]| -> (Vec<Expr>, Vec<Gen>) {
            names
                .iter()
                .map(|&(n, c)| {
                    let g = model.gen(model.lookup(n, c).unwrap_or_else(|| panic!("{n}")));
                    (Expr::gen(g), g)
                })
                .unzip()
        };
        let (even, even_gens) = pick(even);
        let (odd, odd_gens) = pick(odd);
        Algebra {
            model,
            even,
            odd,
            even_gens,
            odd_gens,
        }
    }

    /// Three even coordinates, three odd coordinates and one odd velocity.
    pub fn kernel() -> Self {
        let model = parse_model(
            "model k parameter t
             variable a : even variable b : even variable c : even
             variable u : odd variable v : odd variable w : odd
             lagrangian: d(a)^2 + I*u*d(u)",
        )
        .unwrap();
        let even = [("a", None), ("b", None), ("c", None)];
        Algebra::new(model, &even, &[("u", None), ("v", None), ("w", None)]).with_velocity("u")
    }

    fn with_velocity(mut self, name: &str) -> Self {
        let id = self.model.lookup(name, None).unwrap();
        let d = self.model.registry.velocity(id, 1).unwrap();
        let g = self.model.gen(d);
        self.odd.push(Expr::gen(g));
        self.odd_gens.push(g);
        self
    }

    /// A phase space with two even and two odd canonical pairs.
    pub fn phase_space() -> Self {
        let mut model = parse_model(
            "model ps parameter t
             variable q : even variable r : even
             variable u : odd variable v : odd
             lagrangian: d(q)^2/2 + d(r)^2/2 + I*u*d(u) + I*v*d(v)",
        )
        .unwrap();
        legendre(&mut model).unwrap();
        let momentum = |m: &Model, n: &str| {
            let id = m.registry.momentum(m.lookup(n, None).unwrap()).unwrap();
            m.registry.info(id).name.clone()
        };
        let (pq, pr, pu, pv) = (
            momentum(&model, "q"),
            momentum(&model, "r"),
            momentum(&model, "u"),
            momentum(&model, "v"),
        );
        let even = [
            ("q", None),
            ("r", None),
            (pq.as_str(), None),
            (pr.as_str(), None),
        ];
        let odd = [
            ("u", None),
            ("v", None),
            (pu.as_str(), None),
            (pv.as_str(), None),
        ];
        Algebra::new(model, &even, &odd)
    }

    /// Coordinates `x` (even) and `th` (odd) with their first velocities, for
    /// total-derivative tests.
    pub fn dynamics() -> Self {
        let model = parse_model(
            "model dyn parameter t
             variable x : even variable y : even
             variable th : odd variable ph : odd
             lagrangian: d(x)^2 + I*th*d(th)",
        )
        .unwrap();
        Algebra::new(
            model,
            &[("x", None), ("y", None)],
            &[("th", None), ("ph", None)],
        )
        .with_even_velocity("x")
        .with_velocity("th")
    }

    fn with_even_velocity(mut self, name: &str) -> Self {
        let id = self.model.lookup(name, None).unwrap();
        let d = self.model.registry.velocity(id, 1).unwrap();
        let g = self.model.gen(d);
        self.even.push(Expr::gen(g));
        self.even_gens.push(g);
        self
    }

    fn poly(&self, terms: &[Term]) -> Expr {
        let mut out = Expr::zero();
        for t in terms {
            let mut m = Expr::scalar(hamjac::kernel::Scalar::complex((t.re, 1), (t.im, 1)));
            for (g, &e) in self.even.iter().zip(&t.even) {
                m = m.mul(&g.pow(e));
            }
            for (k, g) in self.odd.iter().enumerate() {
                if t.odd >> k & 1 == 1 {
                    m = m.mul(g);
                }
            }
            out = out.add(&m);
        }
        out
    }

    /// Build an element; the denominator drops every odd generator and is
    /// `1 + a·(…)`, so it is always an invertible even polynomial.
    pub fn build(&self, e: &Element) -> Expr {
        let num = self.poly(&e.num);
        match &e.den {
            None => num,
            Some(d) => {
                let body: Vec<Term> = d
                    .iter()
                    .map(|t| Term {
                        odd: 0,
                        ..t.clone()
                    })
                    .collect();
                let d = Expr::one().add(&self.poly(&body).mul(&self.even[0]));
                num.div(&d).expect("even denominator")
            }
        }
    }

    /// Homogeneous part of the requested parity.
    pub fn homogeneous(&self, e: &Element, odd: bool) -> Expr {
        self.build(e)
            .parity_part(if odd { Parity::Odd } else { Parity::Even })
    }

    pub fn render(&self, e: &Expr) -> String {
        self.model.render(e)
    }
}

fn is_odd(e: &Expr) -> bool {
    e.parity() == Some(Parity::Odd)
}

fn sign(odd_a: bool, odd_b: bool) -> Expr {
    if odd_a && odd_b {
        Expr::int(-1)
    } else {
        Expr::one()
    }
}

fn same(alg: &Algebra, what: &str, x: &Expr, y: &Expr) -> Result<(), String> {
    if x.equals(y) {
        Ok(())
    } else {
        Err(format!("{what}: {} != {}", alg.render(x), alg.render(y)))
    }
}

/// Graded commutativity, associativity, distributivity, nilpotency of odd
/// elements, and the graded Leibniz rule for left and right derivatives.
#[allow(clippy::too_many_arguments)]
pub fn check_kernel(
    alg: &Algebra,
    a: &Element,
    b: &Element,
    c: &Element,
    odd_a: bool,
    odd_b: bool,
    gen: usize,
    gen_odd: bool,
) -> Result<(), String> {
    let x = alg.homogeneous(a, odd_a);
    let y = alg.homogeneous(b, odd_b);
    let z = alg.build(c);
    let (ox, oy) = (is_odd(&x), is_odd(&y));

    same(
        alg,
        "graded commutativity",
        &x.mul(&y),
        &sign(ox, oy).mul(&y.mul(&x)),
    )?;
    same(alg, "associativity", &x.mul(&y).mul(&z), &x.mul(&y.mul(&z)))?;
    same(
        alg,
        "distributivity",
        &x.mul(&y.add(&z)),
        &x.mul(&y).add(&x.mul(&z)),
    )?;
    for g in &alg.odd {
        if !g.mul(g).is_zero() {
            return Err("odd generator squares to nonzero".into());
        }
    }
    if ox && !x.mul(&x).is_zero() {
        return Err(format!(
            "odd element squares to nonzero: {}",
            alg.render(&x)
        ));
    }
    let g = if gen_odd {
        alg.odd_gens[gen % alg.odd_gens.len()]
    } else {
        alg.even_gens[gen % alg.even_gens.len()]
    };
    // ∂_l(xy) = (∂_l x) y + (−1)^{|x||g|} x ∂_l y
    let lhs = x.mul(&y).derive(g, Side::Left);
    let rhs = x
        .derive(g, Side::Left)
        .mul(&y)
        .add(&sign(ox, g.odd).mul(&x).mul(&y.derive(g, Side::Left)));
    same(alg, "left Leibniz", &lhs, &rhs)?;
    // ∂_r(xy) = x ∂_r y + (−1)^{|y||g|} (∂_r x) y
    let lhs = x.mul(&y).derive(g, Side::Right);
    let rhs = x
        .mul(&y.derive(g, Side::Right))
        .add(&sign(oy, g.odd).mul(&x.derive(g, Side::Right)).mul(&y));
    same(alg, "right Leibniz", &lhs, &rhs)?;
    // left and right derivatives of a homogeneous element differ by a sign
    let l = x.derive(g, Side::Left);
    let r = x.derive(g, Side::Right);
    let s = if g.odd && !ox {
        Expr::int(-1)
    } else {
        Expr::one()
    };
    same(alg, "left/right relation", &l, &s.mul(&r))?;
    Ok(())
}

/// Graded antisymmetry, Leibniz rule and Jacobi identity of the bracket.
pub fn check_brackets(
    alg: &Algebra,
    a: &Element,
    b: &Element,
    c: &Element,
    parities: [bool; 3],
) -> Result<(), String> {
    let m = &alg.model;
    let x = alg.homogeneous(a, parities[0]);
    let y = alg.homogeneous(b, parities[1]);
    let z = alg.homogeneous(c, parities[2]);
    let (ox, oy, oz) = (is_odd(&x), is_odd(&y), is_odd(&z));
    let pb = |f: &Expr, g: &Expr| graded_poisson(m, f, g);

    // {x,y} = −(−1)^{|x||y|} {y,x}
    same(
        alg,
        "antisymmetry",
        &pb(&x, &y),
        &sign(ox, oy).mul(&pb(&y, &x)).neg(),
    )?;
    // {x,yz} = {x,y} z + (−1)^{|x||y|} y {x,z}
    same(
        alg,
        "Leibniz",
        &pb(&x, &y.mul(&z)),
        &pb(&x, &y)
            .mul(&z)
            .add(&sign(ox, oy).mul(&y).mul(&pb(&x, &z))),
    )?;
    // (−1)^{|x||z|}{x,{y,z}} + (−1)^{|y||x|}{y,{z,x}} + (−1)^{|z||y|}{z,{x,y}} = 0
    let jacobi = sign(ox, oz)
        .mul(&pb(&x, &pb(&y, &z)))
        .add(&sign(oy, ox).mul(&pb(&y, &pb(&z, &x))))
        .add(&sign(oz, oy).mul(&pb(&z, &pb(&x, &y))));
    same(alg, "Jacobi", &jacobi, &Expr::zero())
}

/// `d/dτ F` passes the total-derivative test, and the test is linear:
/// `G + dF/dτ` passes iff `G` does.
pub fn check_total_derivative(alg: &Algebra, f: &Element, g: &Element) -> Result<(), String> {
    let m = &alg.model;
    let f = alg.build(f);
    let g = alg.build(g);
    let df = tau_derivative(&f, &m.registry).map_err(|e| e.to_string())?;
    let t = is_total_derivative(m, &df).map_err(|e| e.to_string())?;
    if !t.is_total_derivative {
        return Err(format!("d/dτ({}) rejected", alg.render(&f)));
    }
    let tg = is_total_derivative(m, &g).map_err(|e| e.to_string())?;
    let tsum = is_total_derivative(m, &g.add(&df)).map_err(|e| e.to_string())?;
    if tg.is_total_derivative != tsum.is_total_derivative {
        return Err(format!("linearity fails for G = {}", alg.render(&g)));
    }
    Ok(())
}

/// Grassmann element as a table over subsets of `n` units.
pub type Table = BTreeMap<Vec<usize>, Complex64>;

/// Independent product: concatenate unit lists and bubble-sort them,
/// flipping the sign on each swap; repeated units give zero.
pub fn oracle_mul(a: &Table, b: &Table) -> Table {
    let mut out = Table::new();
    for (x, cx) in a {
        for (y, cy) in b {
            let mut w: Vec<usize> = x.iter().chain(y).copied().collect();
            let mut s = 1.0;
            for i in 0..w.len() {
                for j in 0..w.len() - 1 - i {
                    if w[j] > w[j + 1] {
                        w.swap(j, j + 1);
                        s = -s;
                    }
                }
            }
            if w.windows(2).any(|p| p[0] == p[1]) {
                continue;
            }
            *out.entry(w).or_default() += cx * cy * s;
        }
    }
    out
}

fn to_value(n: usize, t: &Table) -> GrassmannValue {
    let terms = t
        .iter()
        .map(|(s, &c)| (s.iter().map(|k| 1u32 << (k - 1)).sum(), c))
        .collect();
    GrassmannValue::from_terms(n, terms).unwrap()
}

fn distance(n: usize, v: &GrassmannValue, t: &Table) -> f64 {
    let mut worst: f64 = 0.0;
    for mask in 0..(1u32 << n) {
        let subset: Vec<usize> = (1..=n).filter(|k| mask >> (k - 1) & 1 == 1).collect();
        let want = t.get(&subset).copied().unwrap_or_default();
        worst = worst.max((v.coeff(mask) - want).norm());
    }
    worst
}

/// Sum, product and inverse against the term-by-term oracle.
pub fn check_grassmann(n: usize, a: &Table, b: &Table) -> Result<f64, String> {
    let (va, vb) = (to_value(n, a), to_value(n, b));
    let mut sum = a.clone();
    for (k, c) in b {
        *sum.entry(k.clone()).or_default() += c;
    }
    let mut worst = distance(n, &(&va + &vb), &sum);
    worst = worst.max(distance(n, &(&va * &vb), &oracle_mul(a, b)));
    if va.body().norm() > 0.1 {
        let inv = va.inverse().map_err(|e| e.to_string())?;
        let mut one = Table::new();
        one.insert(Vec::new(), Complex64::new(1.0, 0.0));
        worst = worst.max(distance(n, &(&va * &inv), &one));
        worst = worst.max(distance(n, &(&inv * &va), &one));
    }
    if worst < 1e-12 {
        Ok(worst)
    } else {
        Err(format!("deviation {worst:e} for N = {n}"))
    }
}

// ----- seeded generation, mirroring the proptest strategies -----

pub fn random_terms<R: Rng>(rng: &mut R, alg: &Algebra, count: usize, max_exp: u32) -> Vec<Term> {
    (0..count)
        .map(|_| Term {
            re: rng.gen_range(-3..=3),
            im: rng.gen_range(-2..=2),
            even: (0..alg.even.len())
                .map(|_| rng.gen_range(0..=max_exp))
                .collect(),
            odd: rng.gen_range(0..(1u32 << alg.odd.len())),
        })
        .collect()
}

pub fn random_element<R: Rng>(
    rng: &mut R,
    alg: &Algebra,
    count: usize,
    max_exp: u32,
    fractions: bool,
) -> Element {
    let k = rng.gen_range(1..=count);
    Element {
        num: random_terms(rng, alg, k, max_exp),
        den: (fractions && rng.gen_bool(0.25)).then(|| random_terms(rng, alg, 2, 1)),
    }
}

pub fn random_table<R: Rng>(rng: &mut R, n: usize) -> Table {
    let mut t = Table::new();
    for mask in 0..(1u32 << n) {
        if rng.gen_bool(0.7) {
            let subset: Vec<usize> = (1..=n).filter(|k| mask >> (k - 1) & 1 == 1).collect();
            t.insert(
                subset,
                Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            );
        }
    }
    t
}
