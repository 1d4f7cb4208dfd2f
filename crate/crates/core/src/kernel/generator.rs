//! Generator roster: every symbol an expression can mention.
//!
//! Expressions only store [`GenId`]s; names, kinds and the links between a
//! coordinate, its velocities and its momentum live here.

use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        matches!(self, Parity::Odd)
    }

    pub fn from_odd_count(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip_with(self, other: Parity) -> Parity {
        if self.is_odd() ^ other.is_odd() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Coordinate,
    Velocity,
    Momentum,
    Parameter,
    Constant,
}

/// A generator handle carrying its parity, which is all the kernel needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen {
    pub id: GenId,
    pub odd: bool,
}

impl Gen {
    pub fn parity(self) -> Parity {
        if self.odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenInfo {
    /// Family name as declared (`x`, `psi5`, `p`, `pi_e`).
    pub name: String,
    /// Lorentz slot for indexed families.
    pub component: Option<u8>,
    pub parity: Parity,
    pub kind: Kind,
    /// Number of τ-derivatives applied to `base` (velocities only).
    pub order: u8,
    /// Velocity: the undifferentiated coordinate. Momentum: its coordinate.
    pub base: Option<GenId>,
}

/// How generator names are rendered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NameStyle {
    /// `x0`, `d(x0)`, `p0`: compact names used in reports.
    Report,
    /// `x[0]`, `d(x[0])`: re-parsable model syntax.
    Dsl,
}

/// Resolves generator ids to printable names.
pub trait Namer {
    fn name(&self, id: GenId) -> String;
}

/// Highest τ-derivative order the roster can hold. User input is capped at
/// order 2; the Euler–Lagrange operator needs two more.
pub const MAX_ORDER: u8 = 4;

#[derive(Clone, Debug, Default)]
pub struct Registry {
    gens: Vec<GenInfo>,
    by_name: HashMap<(String, Option<u8>), GenId>,
    velocities: HashMap<(GenId, u8), GenId>,
    momenta: HashMap<GenId, GenId>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn add(&mut self, info: GenInfo) -> GenId {
        let id = GenId(self.gens.len() as u32);
        match info.kind {
            Kind::Velocity => {
                let base = info.base.expect("velocity without coordinate");
                self.velocities.insert((base, info.order), id);
            }
            Kind::Momentum => {
                // a momentum may be allocated before its coordinate and
                // linked later with `link_momentum`
                if let Some(base) = info.base {
                    self.momenta.insert(base, id);
                }
            }
            _ => {}
        }
        if info.kind != Kind::Velocity {
            self.by_name.insert((info.name.clone(), info.component), id);
        }
        self.gens.push(info);
        id
    }

    pub fn info(&self, id: GenId) -> &GenInfo {
        &self.gens[id.0 as usize]
    }

    pub fn gen(&self, id: GenId) -> Gen {
        Gen {
            id,
            odd: self.info(id).parity.is_odd(),
        }
    }

    pub fn lookup(&self, name: &str, component: Option<u8>) -> Option<GenId> {
        self.by_name.get(&(name.to_string(), component)).copied()
    }

    /// True when `name` is declared as an indexed family.
    pub fn is_family(&self, name: &str) -> bool {
        self.lookup(name, Some(0)).is_some()
    }

    pub fn velocity(&self, coordinate: GenId, order: u8) -> Option<GenId> {
        if order == 0 {
            return Some(coordinate);
        }
        self.velocities.get(&(coordinate, order)).copied()
    }

    /// The next τ-derivative of `id` (coordinate → velocity → acceleration …).
    pub fn derivative_of(&self, id: GenId) -> Option<GenId> {
        let info = self.info(id);
        match info.kind {
            Kind::Velocity => self.velocity(info.base?, info.order + 1),
            _ => self.velocity(id, 1),
        }
    }

    /// Pair a momentum allocated ahead of its coordinate.
    pub fn link_momentum(&mut self, momentum: GenId, coordinate: GenId) {
        self.gens[momentum.0 as usize].base = Some(coordinate);
        self.momenta.insert(coordinate, momentum);
    }

    pub fn momentum(&self, coordinate: GenId) -> Option<GenId> {
        self.momenta.get(&coordinate).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> + '_ {
        (0..self.gens.len() as u32).map(GenId)
    }

    pub fn ids_of_kind(&self, kind: Kind) -> Vec<GenId> {
        self.ids()
            .filter(|&id| self.info(id).kind == kind)
            .collect()
    }

    pub fn display(&self, id: GenId, style: NameStyle) -> String {
        let info = self.info(id);
        let plain = |info: &GenInfo| match (info.component, style) {
            (Some(c), NameStyle::Report) => format!("{}{}", info.name, c),
            (Some(c), NameStyle::Dsl) => format!("{}[{}]", info.name, c),
            (None, _) => info.name.clone(),
        };
        if info.kind == Kind::Velocity {
            let base = self.info(info.base.expect("velocity base"));
            let mut s = plain(base);
            for _ in 0..info.order {
                s = format!("d({s})");
            }
            s
        } else {
            plain(info)
        }
    }

    pub fn namer(&self, style: NameStyle) -> RegistryNamer<'_> {
        RegistryNamer {
            registry: self,
            style,
        }
    }
}

pub struct RegistryNamer<'a> {
    registry: &'a Registry,
    style: NameStyle,
}

impl Namer for RegistryNamer<'_> {
    fn name(&self, id: GenId) -> String {
        self.registry.display(id, self.style)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn info(name: &str, comp: Option<u8>, kind: Kind, order: u8, base: Option<GenId>) -> GenInfo {
        GenInfo {
            name: name.into(),
            component: comp,
            parity: Parity::Even,
            kind,
            order,
            base,
        }
    }

    #[test]
    fn velocity_chain_and_names() {
        let mut r = Registry::new();
        let x = r.add(info("x", Some(2), Kind::Coordinate, 0, None));
        let v = r.add(info("x", Some(2), Kind::Velocity, 1, Some(x)));
        let a = r.add(info("x", Some(2), Kind::Velocity, 2, Some(x)));
        assert_eq!(r.derivative_of(x), Some(v));
        assert_eq!(r.derivative_of(v), Some(a));
        assert_eq!(r.derivative_of(a), None);
        assert_eq!(r.display(a, NameStyle::Dsl), "d(d(x[2]))");
        assert_eq!(r.display(v, NameStyle::Report), "d(x2)");
        assert_eq!(r.lookup("x", Some(2)), Some(x));
    }
}
