//! Fixed-step RK4 evolution of a closed total differential system along
//! prescribed parameter curves.
//!
//! Every phase-space generator that is not a free parameter is a state
//! variable. Its rate is `Σ_t coeff_t · ṫ` over the free legs, with `τ̇ = 1`
//! and the other legs following their curves. Variables whose one-form is
//! identically zero are held fixed exactly rather than integrated.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grassmann::GrassmannValue;
use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::kernel::{Expr, GenId, Kind, Parity, Poly};

/// A prescribed parameter history.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Curve {
    Zero,
    Const(f64),
    /// `start + slope·τ`.
    Linear {
        start: f64,
        slope: f64,
    },
}

impl Curve {
    pub fn value(&self, tau: f64) -> f64 {
        match *self {
            Curve::Zero => 0.0,
            Curve::Const(c) => c,
            Curve::Linear { start, slope } => start + slope * tau,
        }
    }

    pub fn rate(&self, _tau: f64) -> f64 {
        match *self {
            Curve::Zero | Curve::Const(_) => 0.0,
            Curve::Linear { slope, .. } => slope,
        }
    }

    /// `∫_0^τ` of the curve.
    pub fn integral(&self, tau: f64) -> f64 {
        match *self {
            Curve::Zero => 0.0,
            Curve::Const(c) => c * tau,
            Curve::Linear { start, slope } => start * tau + 0.5 * slope * tau * tau,
        }
    }
}

impl FromStr for Curve {
    type Err = String;

    /// `zero`, `const:R` or `linear:R,R`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("bad number `{t}` in curve `{s}`"))
        };
        match s.split_once(':') {
            None if s == "zero" => Ok(Curve::Zero),
            Some(("const", v)) => Ok(Curve::Const(num(v)?)),
            Some(("linear", v)) => {
                let (a, b) = v
                    .split_once(',')
                    .ok_or_else(|| format!("linear curve needs `start,slope`, got `{v}`"))?;
                Ok(Curve::Linear {
                    start: num(a)?,
                    slope: num(b)?,
                })
            }
            _ => Err(format!(
                "unknown curve `{s}` (expected zero, const:R or linear:R,R)"
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IntegrateConfig {
    pub tau_max: f64,
    pub steps: usize,
    /// Curve for every even free parameter.
    pub e_curve: Curve,
    /// Amplitude curve for every odd free parameter, each carried by its own
    /// odd unit.
    pub chi_curve: Curve,
    pub odd_units: usize,
    pub seed: u64,
    /// Values of the model constants by name; unspecified constants are 1.
    pub constants: BTreeMap<String, f64>,
    /// Initial lower-index components of the 4-momentum family; defaults to
    /// the rest frame `(m, 0, 0, 0)` with `m` the constant named `m` (or 1).
    pub momentum: Option<[f64; 4]>,
}

impl Default for IntegrateConfig {
    fn default() -> Self {
        Self {
            tau_max: 1.0,
            steps: 1000,
            e_curve: Curve::Const(1.0),
            chi_curve: Curve::Const(0.3),
            odd_units: 6,
            seed: 0,
            constants: BTreeMap::new(),
            momentum: None,
        }
    }
}

impl IntegrateConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Domain("steps must be at least 1".into()));
        }
        if !(self.tau_max.is_finite() && self.tau_max > 0.0) {
            return Err(Error::Domain(format!(
                "tau-max must be positive, got {}",
                self.tau_max
            )));
        }
        if self.odd_units > super::grassmann::MAX_UNITS {
            return Err(Error::Dimension(format!(
                "at most {} odd units",
                super::grassmann::MAX_UNITS
            )));
        }
        Ok(())
    }
}

/// Snapshot of every state variable at one step.
#[derive(Clone, Debug)]
pub struct TrajectoryState {
    pub step: usize,
    pub tau: f64,
    pub values: Vec<GrassmannValue>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Display names of the state variables.
    pub names: Vec<String>,
    pub parities: Vec<Parity>,
    /// Which state variables are held fixed (identically zero one-form).
    pub held: Vec<bool>,
    pub states: Vec<TrajectoryState>,
    /// Constraint names, `H0` first.
    pub constraints: Vec<String>,
    /// Per state, per constraint: `max |C(τ) − C(0)|` over coefficients.
    pub drift_rows: Vec<Vec<f64>>,
    /// Per constraint, `C(τ) − C(0)` at the final state.
    pub final_change: Vec<GrassmannValue>,
}

impl Trajectory {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Value of a state variable at the last step.
    pub fn last(&self, name: &str) -> Option<&GrassmannValue> {
        let i = self.index_of(name)?;
        self.states.last().map(|s| &s.values[i])
    }

    /// Maximum drift of a constraint over the whole run.
    pub fn drift(&self, constraint: &str) -> Option<f64> {
        let k = self.constraints.iter().position(|c| c == constraint)?;
        Some(self.drift_rows.iter().map(|r| r[k]).fold(0.0, f64::max))
    }

    pub fn change(&self, constraint: &str) -> Option<&GrassmannValue> {
        let k = self.constraints.iter().position(|c| c == constraint)?;
        self.final_change.get(k)
    }

    /// CSV with columns `step, tau`, one `name[subset].re/.im` pair per
    /// coefficient that is ever nonzero, then `drift_<constraint>`.
    pub fn to_csv(&self) -> String {
        let mut columns: Vec<(usize, u32)> = Vec::new();
        for (i, _) in self.names.iter().enumerate() {
            let mut masks: Vec<u32> = self
                .states
                .iter()
                .flat_map(|s| s.values[i].terms().iter().map(|&(m, _)| m))
                .collect();
            masks.sort_unstable();
            masks.dedup();
            columns.extend(masks.into_iter().map(|m| (i, m)));
        }
        let mut out = String::from("step,tau");
        for &(i, m) in &columns {
            let subset = subset_label(m);
            let _ = write!(out, ",{0}[{1}].re,{0}[{1}].im", self.names[i], subset);
        }
        for c in &self.constraints {
            let _ = write!(out, ",drift_{c}");
        }
        out.push('\n');
        for (s, drift) in self.states.iter().zip(&self.drift_rows) {
            let _ = write!(out, "{},{:.16e}", s.step, s.tau);
            for &(i, m) in &columns {
                let z = s.values[i].coeff(m);
                let _ = write!(out, ",{:.16e},{:.16e}", z.re, z.im);
            }
            for d in drift {
                let _ = write!(out, ",{d:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

/// `1` for the body, otherwise the units joined by `*`, e.g. `eta1*eta6`.
pub fn subset_label(mask: u32) -> String {
    if mask == 0 {
        return "1".into();
    }
    (0..32)
        .filter(|k| mask >> k & 1 == 1)
        .map(|k| format!("eta{}", k + 1))
        .collect::<Vec<_>>()
        .join("*")
}

/// A polynomial in numeric form: coefficient and factor list per term, the
/// factors in multiplication order.
#[derive(Clone, Debug)]
struct CompiledPoly {
    terms: Vec<(Complex64, Vec<GenId>)>,
}

impl CompiledPoly {
    fn new(p: &Poly) -> Self {
        let terms = p
            .terms()
            .map(|(mono, c)| {
                let (re, im) = c.to_f64_pair();
                let mut factors = Vec::new();
                for &(g, k) in &mono.even {
                    factors.extend(std::iter::repeat_n(g, k as usize));
                }
                factors.extend(mono.odd.iter().copied());
                (Complex64::new(re, im), factors)
            })
            .collect();
        Self { terms }
    }

    fn eval(&self, env: &Env) -> Result<GrassmannValue> {
        let mut out = GrassmannValue::zero(env.units);
        for (c, factors) in &self.terms {
            let mut v = GrassmannValue::scalar(env.units, *c);
            for g in factors {
                v = v.try_mul(env.get(*g)?)?;
            }
            out = out.try_add(&v)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
struct Compiled {
    num: CompiledPoly,
    den: Option<CompiledPoly>,
}

impl Compiled {
    fn new(e: &Expr) -> Self {
        Self {
            num: CompiledPoly::new(e.num()),
            den: (!e.is_polynomial()).then(|| CompiledPoly::new(e.den())),
        }
    }

    fn eval(&self, env: &Env) -> Result<GrassmannValue> {
        let n = self.num.eval(env)?;
        match &self.den {
            None => Ok(n),
            Some(d) => n.try_mul(&d.eval(env)?.inverse()?),
        }
    }
}

/// Values of every generator at one instant.
struct Env {
    units: usize,
    values: Vec<Option<GrassmannValue>>,
}

impl Env {
    fn get(&self, g: GenId) -> Result<&GrassmannValue> {
        self.values
            .get(g.0 as usize)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::Internal(format!("no numeric value for generator {}", g.0)))
    }

    fn set(&mut self, g: GenId, v: GrassmannValue) {
        self.values[g.0 as usize] = Some(v);
    }
}

/// A free parameter other than τ with its curve and, if odd, its unit.
struct LegCurve {
    id: GenId,
    curve: Curve,
    unit: Option<usize>,
}

impl LegCurve {
    fn at(&self, units: usize, x: f64) -> GrassmannValue {
        match self.unit {
            None => GrassmannValue::real(units, x),
            Some(k) => GrassmannValue::unit(units, k, Complex64::new(x, 0.0)),
        }
    }
}

struct System {
    units: usize,
    tau: GenId,
    state: Vec<GenId>,
    /// Per state variable: `(leg index into legs or None for τ, coeff)`.
    rates: Vec<Vec<(Option<usize>, Compiled)>>,
    legs: Vec<LegCurve>,
    fixed: Vec<(GenId, GrassmannValue)>,
    slots: usize,
}

impl System {
    fn env(&self, tau: f64, y: &[GrassmannValue]) -> Env {
        let mut env = Env {
            units: self.units,
            values: vec![None; self.slots],
        };
        env.set(self.tau, GrassmannValue::real(self.units, tau));
        for (g, v) in &self.fixed {
            env.set(*g, v.clone());
        }
        for l in &self.legs {
            env.set(l.id, l.at(self.units, l.curve.value(tau)));
        }
        for (g, v) in self.state.iter().zip(y) {
            env.set(*g, v.clone());
        }
        env
    }

    fn derivative(&self, tau: f64, y: &[GrassmannValue]) -> Result<Vec<GrassmannValue>> {
        let env = self.env(tau, y);
        let mut out = Vec::with_capacity(y.len());
        for terms in &self.rates {
            let mut r = GrassmannValue::zero(self.units);
            for (leg, coeff) in terms {
                let c = coeff.eval(&env)?;
                let c = match leg {
                    None => c,
                    Some(i) => {
                        let l = &self.legs[*i];
                        c.try_mul(&l.at(self.units, l.curve.rate(tau)))?
                    }
                };
                r = r.try_add(&c)?;
            }
            out.push(r);
        }
        Ok(out)
    }
}

fn combine(y: &[GrassmannValue], k: &[GrassmannValue], h: f64) -> Result<Vec<GrassmannValue>> {
    y.iter()
        .zip(k)
        .map(|(a, b)| a.axpy(Complex64::new(h, 0.0), b))
        .collect()
}

/// Integrate the closed system of `analysis` from seeded initial data.
pub fn integrate(analysis: &Analysis, cfg: &IntegrateConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let model = &analysis.model;
    let tdes = &analysis.tdes;
    let reg = &model.registry;
    let units = cfg.odd_units;
    let tau = tdes.tau();
    let free = tdes.free_legs();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // constants
    let mut fixed = Vec::new();
    let mut mass = 1.0;
    for c in model.constants() {
        let info = reg.info(c);
        if info.parity == Parity::Odd {
            return Err(Error::Unsupported(format!(
                "odd constant `{}` has no numeric value",
                info.name
            )));
        }
        let name = model.name_of(c);
        let v = cfg.constants.get(&name).copied().unwrap_or(1.0);
        if name == "m" {
            mass = v;
        }
        fixed.push((c, GrassmannValue::real(units, v)));
    }

    // odd units: odd coordinates first, then odd free legs
    let mut next_unit = 0usize;
    let mut take_unit = |what: &str| -> Result<usize> {
        next_unit += 1;
        if next_unit > units {
            Err(Error::Dimension(format!(
                "{units} odd units are too few (needed for {what})"
            )))
        } else {
            Ok(next_unit)
        }
    };

    let coords: Vec<GenId> = model
        .coordinates()
        .into_iter()
        .filter(|c| !free.contains(c))
        .collect();
    let mut initial: BTreeMap<GenId, GrassmannValue> = BTreeMap::new();
    for &q in &coords {
        let info = reg.info(q);
        let v = match info.parity {
            Parity::Even => GrassmannValue::real(units, rng.gen_range(-1.0..1.0)),
            Parity::Odd => {
                let k = take_unit(&model.name_of(q))?;
                GrassmannValue::unit(units, k, Complex64::new(rng.gen_range(0.5..1.5), 0.0))
            }
        };
        initial.insert(q, v);
    }
    let mut legs = Vec::new();
    for &l in free.iter().filter(|&&l| l != tau) {
        let (curve, unit) = match reg.info(l).parity {
            Parity::Even => (cfg.e_curve, None),
            Parity::Odd => (cfg.chi_curve, Some(take_unit(&model.name_of(l))?)),
        };
        legs.push(LegCurve { id: l, curve, unit });
    }

    // regular momenta: the 4-momentum family from the config, others seeded
    let mut four_momentum: Option<Vec<GenId>> = None;
    for d in &model.declarations {
        if d.indexed && d.parity == Parity::Even && d.ids.iter().all(|c| coords.contains(c)) {
            let ps: Vec<GenId> = d.ids.iter().map(|&c| model.momentum(c)).collect();
            if ps
                .iter()
                .all(|p| analysis.momenta.solved().any(|e| e.momentum == *p))
            {
                four_momentum = Some(ps);
                break;
            }
        }
    }
    let p_init = cfg.momentum.unwrap_or([mass, 0.0, 0.0, 0.0]);
    for e in analysis.momenta.solved() {
        if free.contains(&e.coordinate) {
            continue;
        }
        let v = match four_momentum
            .as_ref()
            .and_then(|f| f.iter().position(|&p| p == e.momentum))
        {
            Some(mu) => p_init[mu],
            None => rng.gen_range(-1.0..1.0),
        };
        let info = reg.info(e.momentum);
        let v = match info.parity {
            Parity::Even => GrassmannValue::real(units, v),
            Parity::Odd => {
                return Err(Error::Unsupported(format!(
                    "odd regular momentum `{}` has no numeric seed",
                    info.name
                )))
            }
        };
        initial.insert(e.momentum, v);
    }

    let slots = reg.len();
    let base_env = |initial: &BTreeMap<GenId, GrassmannValue>| {
        let mut env = Env {
            units,
            values: vec![None; slots],
        };
        env.set(tau, GrassmannValue::real(units, 0.0));
        for (g, v) in &fixed {
            env.set(*g, v.clone());
        }
        for l in &legs {
            env.set(l.id, l.at(units, l.curve.value(0.0)));
        }
        for (g, v) in initial {
            env.set(*g, v.clone());
        }
        env
    };
    // constrained momenta take their forced values
    let env0 = base_env(&initial);
    let mut forced = Vec::new();
    for e in analysis.momenta.constrained() {
        forced.push((e.momentum, Compiled::new(&e.definition).eval(&env0)?));
    }
    initial.extend(forced);
    // every parameter momentum puts its H′ on zero
    for m in &analysis.hamiltonians.members {
        if reg.info(m.parameter).kind == Kind::Parameter {
            let env = base_env(&initial);
            let h = Compiled::new(&m.hamiltonian(model)).eval(&env)?;
            initial.insert(m.momentum, -&h);
        }
    }

    // state roster and compiled rates
    let mut state = Vec::new();
    let mut rates = Vec::new();
    let mut held = Vec::new();
    for &z in tdes.forms.keys() {
        if free.contains(&z) {
            continue;
        }
        let form = tdes.form(z).expect("form exists");
        let mut terms = Vec::new();
        for (leg, coeff) in form.legs() {
            let which = if leg == tau {
                None
            } else {
                Some(legs.iter().position(|l| l.id == leg).ok_or_else(|| {
                    Error::Internal(format!("leg {} is neither τ nor free", model.name_of(leg)))
                })?)
            };
            terms.push((which, Compiled::new(coeff)));
        }
        if !initial.contains_key(&z) {
            return Err(Error::Internal(format!(
                "no initial value for {}",
                model.name_of(z)
            )));
        }
        held.push(terms.is_empty());
        state.push(z);
        rates.push(terms);
    }
    let system = System {
        units,
        tau,
        state: state.clone(),
        rates,
        legs,
        fixed,
        slots,
    };

    let constraints: Vec<(String, Compiled)> = analysis
        .ledger
        .members
        .iter()
        .map(|c| (c.name.clone(), Compiled::new(&c.expr)))
        .collect();
    let parities: Vec<Parity> = state.iter().map(|&z| reg.info(z).parity).collect();

    let h = cfg.tau_max / cfg.steps as f64;
    let mut y: Vec<GrassmannValue> = state.iter().map(|z| initial[z].clone()).collect();
    let eval_constraints = |t: f64, y: &[GrassmannValue]| -> Result<Vec<GrassmannValue>> {
        let env = system.env(t, y);
        constraints.iter().map(|(_, c)| c.eval(&env)).collect()
    };
    let c0 = eval_constraints(0.0, &y)?;
    let mut states = Vec::with_capacity(cfg.steps + 1);
    let mut drift_rows = Vec::with_capacity(cfg.steps + 1);
    let mut final_change = vec![GrassmannValue::zero(units); c0.len()];
    for step in 0..=cfg.steps {
        let t = step as f64 * h;
        if step > 0 {
            let t0 = t - h;
            let k1 = system.derivative(t0, &y)?;
            let k2 = system.derivative(t0 + h / 2.0, &combine(&y, &k1, h / 2.0)?)?;
            let k3 = system.derivative(t0 + h / 2.0, &combine(&y, &k2, h / 2.0)?)?;
            let k4 = system.derivative(t, &combine(&y, &k3, h)?)?;
            for (i, yi) in y.iter_mut().enumerate() {
                if held[i] {
                    continue;
                }
                let mut next = yi.axpy(Complex64::new(h / 6.0, 0.0), &k1[i])?;
                next = next.axpy(Complex64::new(h / 3.0, 0.0), &k2[i])?;
                next = next.axpy(Complex64::new(h / 3.0, 0.0), &k3[i])?;
                next = next.axpy(Complex64::new(h / 6.0, 0.0), &k4[i])?;
                *yi = next;
            }
        }
        for (i, v) in y.iter().enumerate() {
            if !v.has_parity(parities[i].is_odd()) {
                return Err(Error::Parity(format!(
                    "{} lost its parity at step {step}",
                    model.name_of(state[i])
                )));
            }
        }
        let cs = eval_constraints(t, &y)?;
        let row: Vec<f64> = cs
            .iter()
            .zip(&c0)
            .map(|(c, c0)| (c - c0).max_abs())
            .collect();
        if step == cfg.steps {
            final_change = cs.iter().zip(&c0).map(|(c, c0)| c - c0).collect();
        }
        drift_rows.push(row);
        states.push(TrajectoryState {
            step,
            tau: t,
            values: y.clone(),
        });
    }

    Ok(Trajectory {
        names: state.iter().map(|&z| model.name_of(z)).collect(),
        parities,
        held,
        states,
        constraints: constraints.into_iter().map(|(n, _)| n).collect(),
        drift_rows,
        final_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze_text;

    fn spinning() -> Analysis {
        let path = format!("{}/fixtures/spinning.hjc", env!("CARGO_MANIFEST_DIR"));
        analyze_text(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn curves_parse() {
        assert_eq!("zero".parse::<Curve>().unwrap(), Curve::Zero);
        assert_eq!("const:0.3".parse::<Curve>().unwrap(), Curve::Const(0.3));
        assert_eq!(
            "linear:1,2".parse::<Curve>().unwrap(),
            Curve::Linear {
                start: 1.0,
                slope: 2.0
            }
        );
        assert!("const:x".parse::<Curve>().is_err());
        assert!("sine:1".parse::<Curve>().is_err());
    }

    #[test]
    fn free_motion_without_chi() {
        let a = spinning();
        let p = [1.0, 0.0, 0.0, 0.5];
        let cfg = IntegrateConfig {
            steps: 50,
            chi_curve: Curve::Zero,
            momentum: Some(p),
            ..Default::default()
        };
        let t = integrate(&a, &cfg).unwrap();
        let g = [1.0, -1.0, -1.0, -1.0];
        for mu in 0..4 {
            let x0 = t.states[0].values[t.index_of(&format!("x{mu}")).unwrap()]
                .body()
                .re;
            let x1 = t.last(&format!("x{mu}")).unwrap();
            // x^μ(τ) = x^μ(0) − e p^μ τ
            let want = x0 - g[mu] * p[mu];
            assert!((x1.body().re - want).abs() < 1e-12, "x{mu}");
            assert_eq!(x1.terms().len(), 1);
            assert_eq!(t.last(&format!("p{mu}")).unwrap().body().re, p[mu]);
        }
    }

    #[test]
    fn odd_sector_and_conservation() {
        let a = spinning();
        let p = [1.0, 0.0, 0.0, 0.0];
        let c = 0.3;
        let cfg = IntegrateConfig {
            steps: 400,
            chi_curve: Curve::Const(c),
            momentum: Some(p),
            ..Default::default()
        };
        let t = integrate(&a, &cfg).unwrap();
        let g = [1.0, -1.0, -1.0, -1.0];
        for mu in 0..4 {
            let name = format!("psi{mu}");
            let start = &t.states[0].values[t.index_of(&name).unwrap()];
            let end = t.last(&name).unwrap();
            // ψ^μ(τ) = ψ^μ(0) + ½ p^μ ∫χ dτ
            let jump = 0.5 * g[mu] * p[mu] * c * cfg.tau_max;
            let want = start
                .axpy(
                    Complex64::new(jump, 0.0),
                    &GrassmannValue::unit(6, 6, Complex64::new(1.0, 0.0)),
                )
                .unwrap();
            assert!((end - &want).max_abs() < 1e-12, "{name}");
        }
        for h in ["H1", "H3_0", "H3_3", "H4", "H5", "H6"] {
            assert!(t.drift(h).unwrap() < 1e-12, "{h}: {}", t.drift(h).unwrap());
        }
        // seeded ψ data is off the H6 surface, so π_χ moves by i·H6(0)·τ
        assert!(t.drift("H2").unwrap() > 0.1);
        assert!(t.held[t.index_of("p0").unwrap()]);
    }

    #[test]
    fn off_shell_growth() {
        let a = spinning();
        let c = 0.3;
        let cfg = IntegrateConfig {
            steps: 100,
            chi_curve: Curve::Const(c),
            momentum: Some([2f64.sqrt(), 0.0, 0.0, 0.0]),
            ..Default::default()
        };
        let t = integrate(&a, &cfg).unwrap();
        // dH6 = ½χ(p² − m²)dτ with p² − m² = 1
        let slope = t.change("H6").unwrap().coeff(1 << 5).re / cfg.tau_max;
        assert!((slope / (0.5 * c) - 1.0).abs() < 1e-6, "{slope}");
        assert_eq!(t.drift("H5").unwrap(), 0.0);
        let csv = t.to_csv();
        let header = csv.lines().next().unwrap();
        assert!(header.starts_with("step,tau,"));
        assert!(header.contains("psi0[eta1].re"));
        assert!(header.ends_with("drift_H6"));
        assert_eq!(csv.lines().count(), 102);
    }

    #[test]
    fn too_few_units() {
        let a = spinning();
        let cfg = IntegrateConfig {
            odd_units: 5,
            ..Default::default()
        };
        assert!(matches!(integrate(&a, &cfg), Err(Error::Dimension(_))));
        let cfg = IntegrateConfig {
            steps: 0,
            ..Default::default()
        };
        assert!(matches!(integrate(&a, &cfg), Err(Error::Domain(_))));
    }
}
