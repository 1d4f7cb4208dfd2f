//! Matrix realization of the odd sector: Dirac-basis gamma matrices,
//! `ψ_μ = γ_5 γ_μ / √2`, `ψ_5 = γ_5 / √2`, anticommutator checks and the
//! physical-state null space of `γ_5 (p·γ − m)`.

use nalgebra::{Complex, Matrix4};

use crate::error::{Error, Result};
use crate::kernel::Scalar;

pub type C64 = Complex<f64>;
pub type Mat = Matrix4<C64>;

/// Tolerance for the algebraic relations.
pub const RELATION_TOL: f64 = 1e-12;
/// Relative singular-value cutoff for the null space.
pub const RANK_CUTOFF: f64 = 1e-10;
/// Relative mass-shell tolerance `|p² − m²| < tol·m²`.
pub const SHELL_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct MatrixRep {
    /// Signature the relations are checked against.
    pub metric: [i8; 4],
    /// Upper-index `γ^μ`.
    pub gamma_upper: [Mat; 4],
    /// Lower-index `γ_μ = g_μμ γ^μ`.
    pub gamma: [Mat; 4],
    pub gamma5: Mat,
    /// Lower-index `ψ_μ`.
    pub psi: [Mat; 4],
    pub psi5: Mat,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn dirac_upper() -> [Mat; 4] {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let g0 = Mat::from_diagonal(&nalgebra::Vector4::new(l, l, -l, -l));
    // γ^k = [[0, σ_k], [−σ_k, 0]]
    let sigma = [[[o, l], [l, o]], [[o, -i], [i, o]], [[l, o], [o, -l]]];
    let mut out = [g0, Mat::zeros(), Mat::zeros(), Mat::zeros()];
    for (k, s) in sigma.iter().enumerate() {
        let m = &mut out[k + 1];
        for r in 0..2 {
            for col in 0..2 {
                m[(r, col + 2)] = s[r][col];
                m[(r + 2, col)] = -s[r][col];
            }
        }
    }
    out
}

/// Dirac basis for `(+ − − −)`.
pub fn build_representation() -> MatrixRep {
    build_with_metric([1, -1, -1, -1])
}

/// Same Dirac-basis matrices, with indices lowered and relations checked
/// against `metric`. Any signature other than `(+ − − −)` is deliberately
/// not recalibrated, so the checks expose the mismatch.
pub fn build_with_metric(metric: [i8; 4]) -> MatrixRep {
    let up = dirac_upper();
    let gamma: [Mat; 4] = std::array::from_fn(|mu| up[mu] * c(f64::from(metric[mu]), 0.0));
    let gamma5 = gamma[0] * gamma[1] * gamma[2] * gamma[3];
    let k = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let psi = std::array::from_fn(|mu| gamma5 * gamma[mu] * k);
    MatrixRep {
        metric,
        gamma_upper: up,
        gamma,
        gamma5,
        psi,
        psi5: gamma5 * k,
    }
}

fn anti(a: &Mat, b: &Mat) -> Mat {
    a * b + b * a
}

fn max_dev(m: &Mat, target: &Mat) -> f64 {
    (m - target).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub deviation: f64,
}

#[derive(Clone, Debug)]
pub struct DeviationReport {
    /// The 15 relations `{ψ_μ,ψ_ν} = g_μν`, `{ψ_μ,ψ_5} = 0`, `{ψ_5,ψ_5} = −1`.
    pub anticommutators: Vec<Relation>,
    /// The 10 relations `{γ_μ,γ_ν} = 2 g_μν`.
    pub clifford: Vec<Relation>,
    /// `γ_5² = −1`.
    pub gamma5_square: f64,
}

impl DeviationReport {
    pub fn max(&self) -> f64 {
        self.anticommutators
            .iter()
            .chain(&self.clifford)
            .map(|r| r.deviation)
            .fold(self.gamma5_square, f64::max)
    }

    pub fn passes(&self) -> bool {
        self.max() < RELATION_TOL
    }
}

pub fn check_anticommutators(rep: &MatrixRep) -> DeviationReport {
    let id = Mat::identity();
    let g = |mu: usize| f64::from(rep.metric[mu]);
    let mut anticommutators = Vec::new();
    let mut clifford = Vec::new();
    for mu in 0..4 {
        for nu in mu..4 {
            let gmn = if mu == nu { g(mu) } else { 0.0 };
            anticommutators.push(Relation {
                name: format!("{{psi{mu},psi{nu}}}"),
                deviation: max_dev(&anti(&rep.psi[mu], &rep.psi[nu]), &(id * c(gmn, 0.0))),
            });
            clifford.push(Relation {
                name: format!("{{gamma{mu},gamma{nu}}}"),
                deviation: max_dev(
                    &anti(&rep.gamma[mu], &rep.gamma[nu]),
                    &(id * c(2.0 * gmn, 0.0)),
                ),
            });
        }
    }
    for mu in 0..4 {
        anticommutators.push(Relation {
            name: format!("{{psi{mu},psi5}}"),
            deviation: max_dev(&anti(&rep.psi[mu], &rep.psi5), &Mat::zeros()),
        });
    }
    anticommutators.push(Relation {
        name: "{psi5,psi5}".into(),
        deviation: max_dev(&anti(&rep.psi5, &rep.psi5), &(-id)),
    });
    DeviationReport {
        anticommutators,
        clifford,
        gamma5_square: max_dev(&(rep.gamma5 * rep.gamma5), &(-id)),
    }
}

#[derive(Clone, Debug)]
pub struct PhysicalStates {
    pub on_shell: bool,
    /// `p² − m²`.
    pub shell_residual: f64,
    pub singular_values: Vec<f64>,
    /// Orthonormal columns spanning the null space.
    pub basis: Vec<nalgebra::Vector4<C64>>,
}

impl PhysicalStates {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// `γ_5 (p_μ γ^μ − m)` for lower-index momentum components.
pub fn physical_operator(rep: &MatrixRep, p: [f64; 4], m: f64) -> Mat {
    let mut slash = Mat::identity() * c(-m, 0.0);
    for (mu, &pm) in p.iter().enumerate() {
        slash += rep.gamma_upper[mu] * c(pm, 0.0);
    }
    rep.gamma5 * slash
}

pub fn physical_states(rep: &MatrixRep, p: [f64; 4], m: f64) -> Result<PhysicalStates> {
    if m.is_nan() || m <= 0.0 || !m.is_finite() {
        return Err(Error::Domain(format!("mass must be positive, got {m}")));
    }
    if p.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("momentum components must be finite".into()));
    }
    let p2: f64 = (0..4)
        .map(|mu| f64::from(rep.metric[mu]) * p[mu] * p[mu])
        .sum();
    let shell_residual = p2 - m * m;
    let op = physical_operator(rep, p, m);
    let svd = op.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = RANK_CUTOFF * smax;
    let mut basis = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff {
            // rows of V^H are conjugated right singular vectors
            let row = v_t.row(k);
            basis.push(nalgebra::Vector4::from_fn(|i, _| row[i].conj()));
        }
    }
    Ok(PhysicalStates {
        on_shell: shell_residual.abs() < SHELL_TOL * m * m,
        shell_residual,
        singular_values: svd.singular_values.iter().copied().collect(),
        basis,
    })
}

/// Largest entrywise gap between realized anticommutators of the given
/// generators and an exact target matrix.
pub fn compare_with(generators: &[Mat], target: &[Vec<Scalar>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in generators.iter().enumerate() {
        for (j, b) in generators.iter().enumerate() {
            let (re, im) = target[i][j].to_f64_pair();
            worst = worst.max(max_dev(&anti(a, b), &(Mat::identity() * c(re, im))));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_basis_relations() {
        let rep = build_representation();
        let r = check_anticommutators(&rep);
        assert_eq!(r.anticommutators.len(), 15);
        assert_eq!(r.clifford.len(), 10);
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn corruption_is_detected() {
        let mut rep = build_representation();
        rep.psi[1] = Mat::zeros();
        let r = check_anticommutators(&rep);
        let d = r
            .anticommutators
            .iter()
            .find(|x| x.name == "{psi1,psi1}")
            .unwrap();
        assert!((d.deviation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flipped_signature_is_detected() {
        let r = check_anticommutators(&build_with_metric([-1, 1, 1, 1]));
        assert!(r.max() > 0.5);
    }

    #[test]
    fn null_spaces() {
        let rep = build_representation();
        let at_rest = physical_states(&rep, [1.0, 0.0, 0.0, 0.0], 1.0).unwrap();
        assert!(at_rest.on_shell);
        assert_eq!(at_rest.dimension(), 2);
        for v in &at_rest.basis {
            let r = physical_operator(&rep, [1.0, 0.0, 0.0, 0.0], 1.0) * v;
            assert!(r.norm() < 1e-12);
        }
        let heavy = physical_states(&rep, [2.0, 0.0, 0.0, 0.0], 1.0).unwrap();
        assert!(!heavy.on_shell);
        assert_eq!(heavy.dimension(), 0);
        let zero = physical_states(&rep, [0.0; 4], 1.0).unwrap();
        assert!(!zero.on_shell);
        assert_eq!(zero.dimension(), 0);
        assert!(matches!(
            physical_states(&rep, [1.0, 0.0, 0.0, 0.0], 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn boosted_rest_frame_keeps_two_states() {
        let rep = build_representation();
        for eta in [0.1, 0.7, 1.5] {
            let (m, ch, sh): (f64, f64, f64) = (1.3, f64::cosh(eta), f64::sinh(eta));
            let p = [m * ch, -m * sh * 0.6, -m * sh * 0.8, 0.0];
            let s = physical_states(&rep, p, m).unwrap();
            assert!(s.on_shell);
            assert_eq!(s.dimension(), 2, "eta = {eta}");
        }
    }
}
