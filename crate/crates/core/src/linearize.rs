//! Linearization constructors and the determinant-ratio verifier.
//!
//! Every pencil built here has ansatz `e₁` in block form
//!
//! ```text
//! Ã₁ = [ e₁⊗A₂₀ | −Y₁ + e₁⊗A₁₁ | −Z₁ + e₁⊗A₁₀ ]
//! Ã₂ = [ Y₁     | e₁⊗A₀₂       | −Z₂ + e₁⊗A₀₁ ]
//! Ã₃ = [ Z₁     | Z₂           | e₁⊗A₀₀       ]
//! ```
//!
//! with `Y₁ = (Y₁₁; 0; 0)` and a nonsingular `Z = [Z₂₁ Z₂₂; Z₃₁ Z₃₂]`.
//! The same blocks serve both `λÃ₁ + μÃ₂ + Ã₃` and `Ã₁Γ₂ + Ã₂Γ̃₂ + Ã₃`.
//! Other ansatz vectors go through a constant block row transform `M ⊗ Iₙ`
//! with `Mv = e₁` (see [`construct_general_ansatz`]).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ansatz::{select_m, AnsatzVector, MonomialPencil, NewtonPencil, Pencil};
use crate::error::{Error, Result};
use crate::linalg::{c64, hadamard_bound, kron, ComplexMatrix, C64};
use crate::poly::{eval_newton_scalars, Coeff, MatrixPoly2, NewtonNodes};
use crate::random::random_matrix;
use crate::sampling::{sample_points, CheckConfig};

/// Relative threshold on `σ_min(Z) / ‖Z‖_F` below which the Z block counts as singular.
pub const Z_BLOCK_TOL: f64 = 1e-9;

/// Maximum number of random Z draws in [`construct_general_ansatz`].
pub const Z_SEARCH_RETRIES: usize = 32;

/// Free blocks `Y₁₁ (n×n)`, `Z₁ = (Z₁₁; Z₂₁; Z₃₁)` and `Z₂ = (Z₁₂; Z₂₂; Z₃₂)` (both `3n×n`).
#[derive(Clone, Debug, PartialEq)]
pub struct E1FreeParams {
    n: usize,
    pub y11: ComplexMatrix,
    pub z1: ComplexMatrix,
    pub z2: ComplexMatrix,
}

impl E1FreeParams {
    pub fn new(y11: ComplexMatrix, z1: ComplexMatrix, z2: ComplexMatrix) -> Result<Self> {
        let n = y11.rows();
        if n == 0 || y11.cols() != n {
            return Err(Error::Dimension(format!("Y11 is {}x{}", y11.rows(), y11.cols())));
        }
        for (name, z) in [("Z1", &z1), ("Z2", &z2)] {
            if z.rows() != 3 * n || z.cols() != n {
                return Err(Error::Dimension(format!("{name} is {}x{}, expected {}x{n}", z.rows(), z.cols(), 3 * n)));
            }
        }
        Ok(Self { n, y11, z1, z2 })
    }

    /// Parameters that reproduce the companion pencil:
    /// `Y₁₁ = 0`, `Z₁ = (A₁₀; 0; −I)`, `Z₂ = (A₀₁; −I; 0)`.
    pub fn companion(q: &MatrixPoly2) -> Self {
        let n = q.n();
        let zero = ComplexMatrix::zeros(n, n);
        let minus_i = ComplexMatrix::identity(n).scale(c64(-1.0, 0.0));
        let z1 = ComplexMatrix::from_blocks(&[&[q.coeff(Coeff::A10)], &[&zero], &[&minus_i]]).expect("n×n blocks");
        let z2 = ComplexMatrix::from_blocks(&[&[q.coeff(Coeff::A01)], &[&minus_i], &[&zero]]).expect("n×n blocks");
        Self { n, y11: zero, z1, z2 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Z_ij` as an `n × n` block, `i ∈ {1,2,3}`, `j ∈ {1,2}`.
    pub fn z(&self, i: usize, j: usize) -> ComplexMatrix {
        let col = if j == 1 { &self.z1 } else { &self.z2 };
        col.block((i - 1) * self.n, 0, self.n, self.n)
    }

    /// `[Z₂₁ Z₂₂; Z₃₁ Z₃₂]`.
    pub fn z_block(&self) -> ComplexMatrix {
        let n = self.n;
        ComplexMatrix::from_blocks(&[
            &[&self.z1.block(n, 0, 2 * n, n), &self.z2.block(n, 0, 2 * n, n)],
        ])
        .expect("2n×n columns")
    }

    pub fn z_block_sigma(&self) -> f64 {
        self.z_block().smallest_singular_value().expect("square")
    }

    /// Rejects a Z block with `σ_min ≤ tol·‖Z‖_F`.
    pub fn check_admissible(&self, tol: f64) -> Result<()> {
        let z = self.z_block();
        let sigma_min = z.smallest_singular_value()?;
        if z.norm_fro() == 0.0 || sigma_min <= tol * z.norm_fro() {
            return Err(Error::SingularZBlock { sigma_min });
        }
        Ok(())
    }

    /// Parameters of `(M ⊗ Iₙ)·L` in e₁ form: `Ŷ₁₁ = m₁₁Y₁₁`, `Ẑ = (M ⊗ Iₙ)Z`.
    ///
    /// Only meaningful when `m₂₁ = m₃₁ = 0` or `Y₁₁ = 0`.
    pub fn transformed(&self, m: &ComplexMatrix) -> Self {
        let mk = kron(m, &ComplexMatrix::identity(self.n));
        Self {
            n: self.n,
            y11: self.y11.scale(m[(0, 0)]),
            z1: &mk * &self.z1,
            z2: &mk * &self.z2,
        }
    }
}

/// Standard companion pencil `C(λ,μ) = λL₁ + μL₂ + L₀` of the coefficient blocks.
///
/// The blocks are read as monomial coefficients whatever the basis tag; for a
/// Newton-tagged polynomial this is the companion of its monomial partner.
pub fn companion_pencil(q: &MatrixPoly2) -> MonomialPencil {
    let n = q.n();
    let z = ComplexMatrix::zeros(n, n);
    let i = ComplexMatrix::identity(n);
    let mi = i.scale(c64(-1.0, 0.0));
    let a = |c: Coeff| q.coeff(c);
    let l1 = ComplexMatrix::from_blocks(&[&[a(Coeff::A20), a(Coeff::A11), &z], &[&z, &z, &z], &[&z, &z, &i]]);
    let l2 = ComplexMatrix::from_blocks(&[&[&z, a(Coeff::A02), &z], &[&z, &z, &i], &[&z, &z, &z]]);
    let l0 = ComplexMatrix::from_blocks(&[&[a(Coeff::A10), a(Coeff::A01), a(Coeff::A00)], &[&z, &mi, &z], &[&mi, &z, &z]]);
    MonomialPencil::new(n, l1.expect("n×n"), l2.expect("n×n"), l0.expect("n×n")).expect("3n×3n")
}

/// The three e₁-form blocks, without checking the Z condition.
pub fn e1_form_blocks(q: &MatrixPoly2, params: &E1FreeParams) -> Result<[ComplexMatrix; 3]> {
    let n = q.n();
    if params.n != n {
        return Err(Error::Dimension(format!("parameters for n = {}, polynomial n = {n}", params.n)));
    }
    let e1 = ComplexMatrix::from_real(3, 1, &[1.0, 0.0, 0.0]).expect("finite");
    let e1k = |c: Coeff| kron(&e1, q.coeff(c));
    let y1 = kron(&e1, &params.y11);
    let a1 = ComplexMatrix::from_blocks(&[&[
        &e1k(Coeff::A20),
        &(&e1k(Coeff::A11) - &y1),
        &(&e1k(Coeff::A10) - &params.z1),
    ]])?;
    let a2 = ComplexMatrix::from_blocks(&[&[&y1, &e1k(Coeff::A02), &(&e1k(Coeff::A01) - &params.z2)]])?;
    let a3 = ComplexMatrix::from_blocks(&[&[&params.z1, &params.z2, &e1k(Coeff::A00)]])?;
    Ok([a1, a2, a3])
}

/// `λÃ₁ + μÃ₂ + Ã₃` with ansatz `e₁`; a linearization when the Z block is nonsingular.
pub fn construct_e1_monomial(q: &MatrixPoly2, params: &E1FreeParams) -> Result<MonomialPencil> {
    params.check_admissible(Z_BLOCK_TOL)?;
    let [a1, a2, a3] = e1_form_blocks(q, params)?;
    MonomialPencil::new(q.n(), a1, a2, a3)
}

/// `Ã₁Γ₂ + Ã₂Γ̃₂ + Ã₃` over the nodes of `qn`, with ansatz `e₁`.
pub fn construct_e1_newton(qn: &MatrixPoly2, params: &E1FreeParams) -> Result<NewtonPencil> {
    let nodes = *qn.nodes().ok_or(Error::WrongBasis { expected: "newton" })?;
    params.check_admissible(Z_BLOCK_TOL)?;
    let [a1, a2, a3] = e1_form_blocks(qn, params)?;
    NewtonPencil::new(qn.n(), nodes, a1, a2, a3)
}

/// Unimodular `Ẽ(λ,μ)` and `F̃(λ,μ)` with `F̃·L_N·Ẽ = diag(Q_N, I₂ₙ)`.
///
/// ```text
/// Ẽ = [ n₁I  I  0 ]      F̃ = [ I  −W̃Z⁻¹ ]
///     [ m₁I  0  I ]          [ 0    Z⁻¹  ]
///     [ I    0  0 ]
/// ```
///
/// where `W̃ = [W̃₁ W̃₂]` is the top block row of `L_N·Ẽ` beyond its first block:
/// `W̃₁ = A₂₀γ₂ + Y₁₁γ̃₁ + Z₁₁` and `W̃₂ = (A₁₁ − Y₁₁)γ₁ + A₀₂γ̃₂ + Z₁₂`.
#[derive(Clone, Debug)]
pub struct UnimodularWitnessPair {
    n: usize,
    nodes: NewtonNodes,
    z_inv: ComplexMatrix,
    det_z: C64,
    /// Coefficients of `γ₂`, `γ̃₁`, `1` in `W̃₁`.
    w1: [ComplexMatrix; 3],
    /// Coefficients of `γ₁`, `γ̃₂`, `1` in `W̃₂`.
    w2: [ComplexMatrix; 3],
}

impl UnimodularWitnessPair {
    pub fn e_tilde(&self, lambda: C64, mu: C64) -> ComplexMatrix {
        let n = self.n;
        let s = eval_newton_scalars(&self.nodes, lambda, mu);
        let i = ComplexMatrix::identity(n);
        let z = ComplexMatrix::zeros(n, n);
        ComplexMatrix::from_blocks(&[&[&i.scale(s.n1), &i, &z], &[&i.scale(s.m1), &z, &i], &[&i, &z, &z]])
            .expect("n×n blocks")
    }

    pub fn w_tilde(&self, lambda: C64, mu: C64) -> ComplexMatrix {
        let NewtonNodes { alpha1, alpha2, beta1, beta2 } = self.nodes;
        let (g1, g2) = (lambda - alpha1, lambda - alpha2);
        let (gt1, gt2) = (mu - beta1, mu - beta2);
        let w1 = &(&self.w1[0].scale(g2) + &self.w1[1].scale(gt1)) + &self.w1[2];
        let w2 = &(&self.w2[0].scale(g1) + &self.w2[1].scale(gt2)) + &self.w2[2];
        ComplexMatrix::from_blocks(&[&[&w1, &w2]]).expect("n×n blocks")
    }

    pub fn f_tilde(&self, lambda: C64, mu: C64) -> ComplexMatrix {
        let n = self.n;
        let top_right = (&self.w_tilde(lambda, mu) * &self.z_inv).scale(c64(-1.0, 0.0));
        ComplexMatrix::from_blocks(&[
            &[&ComplexMatrix::identity(n), &top_right],
            &[&ComplexMatrix::zeros(2 * n, n), &self.z_inv],
        ])
        .expect("consistent blocks")
    }

    /// `γ = 1 / (det F̃ · det Ẽ) = det Z`, since `det Ẽ = 1` and `det F̃ = 1/det Z`.
    pub fn predicted_gamma(&self) -> C64 {
        self.det_z
    }

    /// Largest relative `‖F̃·L_N·Ẽ − diag(Q_N, I₂ₙ)‖_F` over `points`.
    pub fn reduction_residual(&self, ln: &NewtonPencil, qn: &MatrixPoly2, points: &[(C64, C64)]) -> f64 {
        let n = self.n;
        points
            .iter()
            .map(|&(l, m)| {
                let reduced = &(&self.f_tilde(l, m) * &ln.eval(l, m)) * &self.e_tilde(l, m);
                let q = qn.eval(l, m);
                let mut target = ComplexMatrix::identity(3 * n);
                target.set_block(0, 0, &q);
                (&reduced - &target).norm_fro() / (q.norm_fro() + ((2 * n) as f64).sqrt())
            })
            .fold(0.0, f64::max)
    }
}

/// Builds the witness pair of an e₁-form Newton pencil and checks the reduction
/// identity at the default sample points.
pub fn unimodular_witnesses(qn: &MatrixPoly2, ln: &NewtonPencil, params: &E1FreeParams) -> Result<UnimodularWitnessPair> {
    let nodes = *qn.nodes().ok_or(Error::WrongBasis { expected: "newton" })?;
    if nodes != ln.nodes {
        return Err(Error::NodeMismatch);
    }
    if params.n != qn.n() || ln.n() != qn.n() {
        return Err(Error::Dimension("pencil, polynomial and parameters disagree on n".into()));
    }
    params.check_admissible(Z_BLOCK_TOL)?;
    let z = params.z_block();
    let z_inv = z.inverse()?;
    let pair = UnimodularWitnessPair {
        n: qn.n(),
        nodes,
        det_z: z.det()?,
        z_inv,
        w1: [qn.coeff(Coeff::A20).clone(), params.y11.clone(), params.z(1, 1)],
        w2: [qn.coeff(Coeff::A11) - &params.y11, qn.coeff(Coeff::A02).clone(), params.z(1, 2)],
    };
    let residual = pair.reduction_residual(ln, qn, &CheckConfig::default().points());
    if residual > 1e-8 {
        return Err(Error::WitnessMismatch { residual });
    }
    Ok(pair)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// `det Q` is numerically zero at every sample; no ratio can be formed.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearizationReport {
    pub gamma_estimate: C64,
    pub max_relative_deviation: f64,
    pub sample_count: usize,
    /// Sample index where `|det Q|` is largest; γ is read there.
    pub reference_index: usize,
    pub verdict: Verdict,
}

/// Below this `|det Q| / Hadamard(Q)` at every sample, the check is inconclusive.
const DEGENERATE_DET_TOL: f64 = 1e-13;

/// Determinant-ratio test `det L = γ det Q` over seeded samples, for any pencil.
pub fn verify_linearization_with<P: Pencil + ?Sized>(pencil: &P, q: &MatrixPoly2, cfg: &CheckConfig) -> Result<LinearizationReport> {
    if pencil.n() != q.n() {
        return Err(Error::Dimension(format!("pencil block size {}, polynomial {}", pencil.n(), q.n())));
    }
    let points = sample_points(cfg.samples, cfg.seed);
    let mut dets = Vec::with_capacity(points.len());
    let mut best = (0usize, -1.0f64);
    let mut degenerate = true;
    for (k, &(l, m)) in points.iter().enumerate() {
        let qv = q.eval(l, m);
        let dq = qv.det()?;
        let dl = pencil.eval(l, m).det()?;
        let bound = hadamard_bound(&qv);
        if bound > 0.0 && dq.norm() > DEGENERATE_DET_TOL * bound {
            degenerate = false;
        }
        if dq.norm() > best.1 {
            best = (k, dq.norm());
        }
        dets.push((dl, dq));
    }
    if points.is_empty() || degenerate {
        return Ok(LinearizationReport {
            gamma_estimate: c64(0.0, 0.0),
            max_relative_deviation: f64::INFINITY,
            sample_count: points.len(),
            reference_index: best.0,
            verdict: Verdict::Inconclusive,
        });
    }
    let (dl0, dq0) = dets[best.0];
    let gamma = dl0 / dq0;
    let max_dev = dets
        .iter()
        .map(|&(dl, dq)| {
            let predicted = gamma * dq;
            let dev = (dl - predicted).norm();
            if dev == 0.0 {
                0.0
            } else {
                dev / predicted.norm()
            }
        })
        .fold(0.0, f64::max);
    let pass = max_dev < cfg.tol && gamma.norm() > cfg.tol;
    Ok(LinearizationReport {
        gamma_estimate: gamma,
        max_relative_deviation: max_dev,
        sample_count: points.len(),
        reference_index: best.0,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    })
}

/// Determinant-ratio test for a Newton pencil against `Q_N` with matching nodes.
pub fn verify_linearization(ln: &NewtonPencil, qn: &MatrixPoly2, cfg: &CheckConfig) -> Result<LinearizationReport> {
    let nodes = qn.nodes().ok_or(Error::WrongBasis { expected: "newton" })?;
    if *nodes != ln.nodes {
        return Err(Error::NodeMismatch);
    }
    verify_linearization_with(ln, qn, cfg)
}

/// How the Z block of a general-ansatz construction was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZChoice {
    Supplied,
    /// `Z₁₁ = Z₁₂ = 0` and the transformed Z block equal to `I₂ₙ`.
    Deterministic,
    Randomized { attempts: usize },
}

/// Result of the block row transform construction for an arbitrary ansatz.
#[derive(Clone, Debug)]
pub struct GeneralAnsatz {
    pub m: ComplexMatrix,
    pub m_inv: ComplexMatrix,
    /// `Y₁₁`, `Z₁`, `Z₂` before the transform (`Y₁₁` already forced to zero when required).
    pub params: E1FreeParams,
    /// Parameters of the e₁-form pencil `L̂_N = (M ⊗ Iₙ)L_N`.
    pub transformed_params: E1FreeParams,
    /// `L̂_N`, ansatz `e₁`.
    pub e1_pencil: NewtonPencil,
    /// `L_N = (M⁻¹ ⊗ Iₙ)L̂_N`, ansatz `v`.
    pub pencil: NewtonPencil,
    pub z_choice: ZChoice,
}

/// Linearization of `Q_N` with a prescribed nonzero ansatz `v`.
///
/// `M` comes from the pattern table ([`select_m`]). `Y₁₁` is kept only when
/// `m₂₁ = m₃₁ = 0`, otherwise it is zeroed. Without supplied parameters the Z
/// block is solved so the transformed Z block is `I₂ₙ`; when the lower-right
/// 2×2 of `M` is singular, random Z blocks are drawn from `seed` instead.
pub fn construct_general_ansatz(
    qn: &MatrixPoly2,
    v: &AnsatzVector,
    params: Option<&E1FreeParams>,
    seed: u64,
) -> Result<GeneralAnsatz> {
    let nodes = *qn.nodes().ok_or(Error::WrongBasis { expected: "newton" })?;
    if v.is_zero() {
        return Err(Error::ZeroAnsatz);
    }
    let n = qn.n();
    let m = select_m(v)?;
    let m_inv = m.inverse()?;
    let zero = c64(0.0, 0.0);
    let keep_y11 = m[(1, 0)] == zero && m[(2, 0)] == zero;

    let (mut base, z_choice) = match params {
        Some(p) => {
            if p.n != n {
                return Err(Error::Dimension(format!("parameters for n = {}, polynomial n = {n}", p.n)));
            }
            let trial = p.transformed(&m);
            trial.check_admissible(Z_BLOCK_TOL)?;
            (p.clone(), ZChoice::Supplied)
        }
        None => default_z(&m, n, seed)?,
    };
    if !keep_y11 {
        base.y11 = ComplexMatrix::zeros(n, n);
    }
    let transformed_params = base.transformed(&m);
    let [a1, a2, a3] = e1_form_blocks(qn, &transformed_params)?;
    let e1_pencil = NewtonPencil::new(n, nodes, a1, a2, a3)?;
    let pencil = e1_pencil.left_mul(&m_inv);
    Ok(GeneralAnsatz { m, m_inv, params: base, transformed_params, e1_pencil, pencil, z_choice })
}

fn default_z(m: &ComplexMatrix, n: usize, seed: u64) -> Result<(E1FreeParams, ZChoice)> {
    let zero_n = ComplexMatrix::zeros(n, n);
    let lower = m.block(1, 1, 2, 2);
    let lower_det = lower.det()?;
    if lower_det.norm() > 1e-12 * lower.norm_fro().powi(2) {
        // (lower ⊗ Iₙ)·[Z₂₁ Z₂₂; Z₃₁ Z₃₂] = I₂ₙ with Z₁₁ = Z₁₂ = 0.
        let zlow = kron(&lower.inverse()?, &ComplexMatrix::identity(n));
        let z1 = ComplexMatrix::from_blocks(&[&[&zero_n], &[&zlow.block(0, 0, 2 * n, n)]])?;
        let z2 = ComplexMatrix::from_blocks(&[&[&zero_n], &[&zlow.block(0, n, 2 * n, n)]])?;
        let p = E1FreeParams::new(zero_n.clone(), z1, z2)?;
        if p.transformed(m).check_admissible(Z_BLOCK_TOL).is_ok() {
            return Ok((p, ZChoice::Deterministic));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=Z_SEARCH_RETRIES {
        let p = E1FreeParams::new(zero_n.clone(), random_matrix(&mut rng, 3 * n, n), random_matrix(&mut rng, 3 * n, n))?;
        if p.transformed(m).check_admissible(1e-6).is_ok() {
            return Ok((p, ZChoice::Randomized { attempts: attempt }));
        }
    }
    Err(Error::ZSearchFailed(Z_SEARCH_RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{membership_monomial, membership_newton, partner, transfer_to_newton};
    use crate::poly::Basis;
    use crate::random::{random_e1_params, random_newton_poly, random_nodes, random_poly};

    fn r(x: f64) -> C64 {
        c64(x, 0.0)
    }

    fn e1() -> [C64; 3] {
        [r(1.0), r(0.0), r(0.0)]
    }

    /// Explicit 3×3 cofactor expansion along the first row.
    fn det3(m: &ComplexMatrix) -> C64 {
        m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
            - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
            + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
    }

    #[test]
    fn scalar_companion_determinant_is_minus_q() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = random_poly(&mut rng, 1, Basis::Monomial);
        let c = companion_pencil(&q);
        for (l, m) in sample_points(20, 2) {
            let want = -q.eval(l, m)[(0, 0)];
            let oracle = det3(&c.eval(l, m));
            assert!((oracle - want).norm() < 1e-13 * want.norm().max(1.0));
            assert!((c.eval(l, m).det().unwrap() - want).norm() < 1e-12 * want.norm().max(1.0));
        }
    }

    #[test]
    fn companion_annihilates_lifted_eigenvectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let q = random_poly(&mut rng, 1, Basis::Monomial);
        let c = companion_pencil(&q);
        let a = |k: Coeff| q.coeff(k)[(0, 0)];
        let mu = c64(0.4, -0.9);
        // λ² a20 + λ(a11 μ + a10) + (a02 μ² + a01 μ + a00) = 0
        let (qa, qb, qc) = (a(Coeff::A20), a(Coeff::A11) * mu + a(Coeff::A10), a(Coeff::A02) * mu * mu + a(Coeff::A01) * mu + a(Coeff::A00));
        let disc = (qb * qb - qa * qc * 4.0).sqrt();
        for lam in [(-qb + disc) / (qa * 2.0), (-qb - disc) / (qa * 2.0)] {
            let w = [lam, mu, r(1.0)];
            let out = c.eval(lam, mu).mul_vec(&w);
            assert!(out.iter().all(|z| z.norm() < 1e-12), "{out:?}");
        }
    }

    #[test]
    fn companion_params_reproduce_companion() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = random_poly(&mut rng, 2, Basis::Monomial);
        let built = construct_e1_monomial(&q, &E1FreeParams::companion(&q)).unwrap();
        assert_eq!(built, companion_pencil(&q));
    }

    #[test]
    fn random_params_give_ansatz_e1() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let q = random_poly(&mut rng, 2, Basis::Monomial);
        let l = construct_e1_monomial(&q, &random_e1_params(&mut rng, 2)).unwrap();
        let m = membership_monomial(&l, &q, &CheckConfig::default()).unwrap();
        assert!(m.ansatz().unwrap().max_abs_diff(&e1()) < 1e-10);
    }

    #[test]
    fn identity_z_pattern_is_admissible() {
        let n = 2;
        let (i, z) = (ComplexMatrix::identity(n), ComplexMatrix::zeros(n, n));
        let z1 = ComplexMatrix::from_blocks(&[&[&z], &[&i], &[&z]]).unwrap();
        let z2 = ComplexMatrix::from_blocks(&[&[&z], &[&z], &[&i]]).unwrap();
        let p = E1FreeParams::new(z.clone(), z1, z2).unwrap();
        p.check_admissible(Z_BLOCK_TOL).unwrap();
        assert!((p.z_block().det().unwrap().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_z_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_newton_poly(&mut rng, 2);
        let mut p = random_e1_params(&mut rng, 2);
        p.z1 = ComplexMatrix::zeros(6, 2);
        assert!(matches!(construct_e1_newton(&q, &p), Err(Error::SingularZBlock { .. })));
    }

    #[test]
    fn newton_with_zero_nodes_matches_monomial_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let qn = random_poly(&mut rng, 2, Basis::Newton(NewtonNodes::zero()));
        let p = random_e1_params(&mut rng, 2);
        let ln = construct_e1_newton(&qn, &p).unwrap();
        let l = construct_e1_monomial(&partner(&qn), &p).unwrap();
        for (x, y) in sample_points(8, 1) {
            assert!(ln.eval(x, y).rel_diff(&l.eval(x, y)) < 1e-15);
        }
    }

    #[test]
    fn companion_params_give_transferred_companion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let qn = random_newton_poly(&mut rng, 2);
        let ln = construct_e1_newton(&qn, &E1FreeParams::companion(&qn)).unwrap();
        assert_eq!(ln, transfer_to_newton(&companion_pencil(&partner(&qn)), &qn).unwrap());
        let m = membership_newton(&ln, &qn, &CheckConfig::default()).unwrap();
        assert!(m.ansatz().unwrap().max_abs_diff(&e1()) < 1e-10);
    }

    #[test]
    fn random_newton_construction_verifies() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let qn = random_newton_poly(&mut rng, 2);
        let p = random_e1_params(&mut rng, 2);
        let ln = construct_e1_newton(&qn, &p).unwrap();
        let rep = verify_linearization(&ln, &qn, &CheckConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep:?}");
        let w = unimodular_witnesses(&qn, &ln, &p).unwrap();
        assert!((rep.gamma_estimate - w.predicted_gamma()).norm() < 1e-8 * w.predicted_gamma().norm());
    }

    #[test]
    fn witness_e_tilde_has_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let qn = random_newton_poly(&mut rng, 1);
        let p = random_e1_params(&mut rng, 1);
        let ln = construct_e1_newton(&qn, &p).unwrap();
        let w = unimodular_witnesses(&qn, &ln, &p).unwrap();
        for (l, m) in sample_points(12, 4) {
            // Row 3 of Ẽ is (1, 0, 0): det = +1·det[[1,0],[0,1]].
            assert!((det3(&w.e_tilde(l, m)) - r(1.0)).norm() < 1e-14);
            let df = w.f_tilde(l, m).det().unwrap();
            assert!((df * w.predicted_gamma() - r(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn witness_reduction_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let qn = random_newton_poly(&mut rng, 2);
        let p = random_e1_params(&mut rng, 2);
        let ln = construct_e1_newton(&qn, &p).unwrap();
        let w = unimodular_witnesses(&qn, &ln, &p).unwrap();
        let pts = sample_points(12, 5);
        assert!(w.reduction_residual(&ln, &qn, &pts) < 1e-9);
        let (l, m) = pts[0];
        let reduced = &(&w.f_tilde(l, m) * &ln.eval(l, m)) * &w.e_tilde(l, m);
        assert!(reduced.block(0, 2, 2, 4).max_abs() < 1e-12);
        assert!(reduced.block(2, 0, 4, 2).max_abs() < 1e-12);
    }

    #[test]
    fn witnesses_reject_foreign_pencil() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let qn = random_newton_poly(&mut rng, 2);
        let ln = construct_e1_newton(&qn, &random_e1_params(&mut rng, 2)).unwrap();
        let other = random_e1_params(&mut rng, 2);
        assert!(matches!(unimodular_witnesses(&qn, &ln, &other), Err(Error::WitnessMismatch { .. })));
    }

    #[test]
    fn companion_gamma_is_minus_one_for_scalars() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let q = random_poly(&mut rng, 1, Basis::Monomial);
        let rep = verify_linearization_with(&companion_pencil(&q), &q, &CheckConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!((rep.gamma_estimate - r(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_z_block_fails_verification() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let nodes = random_nodes(&mut rng);
        let qn = random_poly(&mut rng, 2, Basis::Newton(nodes));
        let mut p = random_e1_params(&mut rng, 2);
        let zero = ComplexMatrix::zeros(2, 2);
        p.z1.set_block(2, 0, &zero);
        p.z1.set_block(4, 0, &zero);
        p.z2.set_block(2, 0, &zero);
        p.z2.set_block(4, 0, &zero);
        let [a1, a2, a3] = e1_form_blocks(&qn, &p).unwrap();
        let ln = NewtonPencil::new(2, nodes, a1, a2, a3).unwrap();
        for (l, m) in sample_points(12, 0) {
            assert!(ln.eval(l, m).det().unwrap().norm() < 1e-13 * hadamard_bound(&ln.eval(l, m)).max(1.0));
        }
        let rep = verify_linearization(&ln, &qn, &CheckConfig::default()).unwrap();
        assert_ne!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn inconclusive_for_vanishing_polynomial() {
        let q = MatrixPoly2::scalar(Basis::Newton(NewtonNodes::zero()), [r(0.0); 6]);
        let ln = NewtonPencil::zero(1, NewtonNodes::zero());
        let rep = verify_linearization(&ln, &q, &CheckConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn general_ansatz_e1_uses_table_m() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let qn = random_newton_poly(&mut rng, 2);
        let g = construct_general_ansatz(&qn, &AnsatzVector::e1(), None, 0).unwrap();
        assert_eq!(g.m, ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0]).unwrap());
        assert_eq!(g.z_choice, ZChoice::Deterministic);
        let cfg = CheckConfig::default();
        for p in [&g.e1_pencil, &g.pencil] {
            let m = membership_newton(p, &qn, &cfg).unwrap();
            assert!(m.ansatz().unwrap().max_abs_diff(&e1()) < 1e-10);
        }
        // L̂ is exactly the e₁ construction with the transformed parameters.
        assert_eq!(g.e1_pencil, construct_e1_newton(&qn, &g.transformed_params).unwrap());
    }

    #[test]
    fn general_ansatz_e3_is_a_linearization() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let qn = random_newton_poly(&mut rng, 2);
        let g = construct_general_ansatz(&qn, &AnsatzVector::real([0.0, 0.0, 1.0], 1e-9), None, 0).unwrap();
        assert!(matches!(g.z_choice, ZChoice::Randomized { .. }));
        let rep = verify_linearization(&g.pencil, &qn, &CheckConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{rep:?}");
    }

    #[test]
    fn general_ansatz_recovers_v() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let qn = random_newton_poly(&mut rng, 2);
        let v = AnsatzVector::real([1.0, 1.0, 1.0], 1e-9);
        let g = construct_general_ansatz(&qn, &v, None, 0).unwrap();
        let m = membership_newton(&g.pencil, &qn, &CheckConfig::default()).unwrap();
        assert!(m.ansatz().unwrap().max_abs_diff(&v.values()) < 1e-9);
        assert!(matches!(construct_general_ansatz(&qn, &AnsatzVector::real([0.0; 3], 1e-9), None, 0), Err(Error::ZeroAnsatz)));
    }

    #[test]
    fn general_ansatz_zeroes_y11_when_required() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let qn = random_newton_poly(&mut rng, 1);
        let p = random_e1_params(&mut rng, 1);
        let kept = construct_general_ansatz(&qn, &AnsatzVector::e1(), Some(&p), 0).unwrap();
        assert_eq!(kept.params.y11, p.y11);
        let zeroed = construct_general_ansatz(&qn, &AnsatzVector::real([1.0, 1.0, 1.0], 1e-9), Some(&p), 0).unwrap();
        assert_eq!(zeroed.params.y11, ComplexMatrix::zeros(1, 1));
        assert_eq!(zeroed.z_choice, ZChoice::Supplied);
    }
}
