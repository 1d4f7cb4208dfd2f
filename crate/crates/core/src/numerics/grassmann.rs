//! Elements of the Grassmann algebra on `N` odd units with complex
//! coefficients. A basis element is a subset of units written as a bitmask
//! (bit `k` is unit `η_{k+1}`), always in ascending unit order; only the
//! nonzero coefficients are stored.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported number of odd units.
pub const MAX_UNITS: usize = 31;

#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannValue {
    n: usize,
    /// Sorted by mask, no zero coefficients.
    terms: Vec<(u32, Complex64)>,
}

/// Sign of `η_a η_b` reordered to ascending units: −1 per pair `(x ∈ a,
/// y ∈ b)` with `x > y`.
pub fn reorder_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        swaps += (a >> y >> 1).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn normalize(mut terms: Vec<(u32, Complex64)>) -> Vec<(u32, Complex64)> {
    terms.sort_unstable_by_key(|&(m, _)| m);
    let mut out: Vec<(u32, Complex64)> = Vec::with_capacity(terms.len());
    for (m, c) in terms {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += c,
            _ => out.push((m, c)),
        }
    }
    out.retain(|&(_, c)| c != Complex64::new(0.0, 0.0));
    out
}

impl GrassmannValue {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_UNITS, "at most {MAX_UNITS} odd units");
        Self {
            n,
            terms: Vec::new(),
        }
    }

    pub fn scalar(n: usize, z: Complex64) -> Self {
        let mut v = Self::zero(n);
        v.terms = normalize(vec![(0, z)]);
        v
    }

    pub fn real(n: usize, x: f64) -> Self {
        Self::scalar(n, Complex64::new(x, 0.0))
    }

    /// `z · η_k` for 1-based unit `k`.
    pub fn unit(n: usize, k: usize, z: Complex64) -> Self {
        assert!((1..=n).contains(&k), "unit {k} outside 1..={n}");
        let mut v = Self::zero(n);
        v.terms = normalize(vec![(1 << (k - 1), z)]);
        v
    }

    /// From `(mask, coefficient)` pairs; repeated masks are summed.
    pub fn from_terms(n: usize, terms: Vec<(u32, Complex64)>) -> Result<Self> {
        if n > MAX_UNITS {
            return Err(Error::Dimension(format!(
                "{n} odd units exceed {MAX_UNITS}"
            )));
        }
        if let Some(&(m, _)) = terms.iter().find(|&&(m, _)| (m as u64) >> n != 0) {
            return Err(Error::Dimension(format!("subset {m:#b} outside {n} units")));
        }
        Ok(Self {
            n,
            terms: normalize(terms),
        })
    }

    pub fn units(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, mask: u32) -> Complex64 {
        self.terms
            .binary_search_by_key(&mask, |&(m, _)| m)
            .map(|i| self.terms[i].1)
            .unwrap_or_default()
    }

    /// Nonzero coefficients in ascending mask order.
    pub fn terms(&self) -> &[(u32, Complex64)] {
        &self.terms
    }

    pub fn body(&self) -> Complex64 {
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{} units versus {} units",
                self.n, other.n
            )))
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(a, x) in &self.terms {
            for &(b, y) in &other.terms {
                if a & b == 0 {
                    out.push((a | b, x * y * reorder_sign(a, b)));
                }
            }
        }
        Ok(Self {
            n: self.n,
            terms: normalize(out),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.terms.clone();
        out.extend_from_slice(&other.terms);
        Ok(Self {
            n: self.n,
            terms: normalize(out),
        })
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            n: self.n,
            terms: normalize(self.terms.iter().map(|&(m, c)| (m, c * z)).collect()),
        }
    }

    /// `self + z · other`.
    pub fn axpy(&self, z: Complex64, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.terms.clone();
        out.extend(other.terms.iter().map(|&(m, c)| (m, c * z)));
        Ok(Self {
            n: self.n,
            terms: normalize(out),
        })
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// True if every nonzero coefficient sits on an even (odd) subset.
    pub fn has_parity(&self, odd: bool) -> bool {
        self.terms
            .iter()
            .all(|(m, _)| (m.count_ones() % 2 == 1) == odd)
    }

    /// Inverse of an element with invertible body:
    /// `(b + s)⁻¹ = b⁻¹ Σ_k (−s/b)^k`, a finite sum since `s` is nilpotent.
    pub fn inverse(&self) -> Result<Self> {
        let b = self.body();
        if b.norm() == 0.0 {
            return Err(Error::Domain(
                "element with zero body is not invertible".into(),
            ));
        }
        let soul = Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|&(m, _)| m != 0)
                .collect(),
        };
        let step = soul.scale(-1.0 / b);
        let mut term = Self::real(self.n, 1.0);
        let mut sum = term.clone();
        while !term.is_zero() {
            term = term.try_mul(&step)?;
            sum = sum.try_add(&term)?;
        }
        Ok(sum.scale(1.0 / b))
    }
}

impl Add for &GrassmannValue {
    type Output = GrassmannValue;
    fn add(self, rhs: &GrassmannValue) -> GrassmannValue {
        self.try_add(rhs).expect("matching unit counts")
    }
}

impl Sub for &GrassmannValue {
    type Output = GrassmannValue;
    fn sub(self, rhs: &GrassmannValue) -> GrassmannValue {
        self.axpy(Complex64::new(-1.0, 0.0), rhs)
            .expect("matching unit counts")
    }
}

impl Mul for &GrassmannValue {
    type Output = GrassmannValue;
    fn mul(self, rhs: &GrassmannValue) -> GrassmannValue {
        self.try_mul(rhs).expect("matching unit counts")
    }
}

impl Neg for &GrassmannValue {
    type Output = GrassmannValue;
    fn neg(self) -> GrassmannValue {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
