//! Pencil spaces defined by a right ansatz vector.
//!
//! A pencil `L` belongs to the monomial space of `Q` when
//! `L(λ,μ)(Λ ⊗ Iₙ) = v ⊗ Q(λ,μ)` with `Λ = (λ, μ, 1)`, and to the Newton
//! space of `Q_N` when the same holds with `N = (n₁(λ), m₁(μ), 1)` and `Q_N`.
//! Membership is decided numerically: the ansatz vector is recovered by a
//! block least-squares fit over seeded sample points and accepted when the
//! relative residual stays below the tolerance.

use crate::error::{Error, Result};
use crate::linalg::{c64, kron, ComplexMatrix, C64};
use crate::poly::{basis_vectors, Basis, MatrixPoly2, NewtonNodes};
use crate::sampling::CheckConfig;

/// Anything that evaluates to a square `3n × 3n` matrix at `(λ, μ)`.
pub trait Pencil {
    /// Block size `n` of the underlying polynomial.
    fn n(&self) -> usize;
    fn eval(&self, lambda: C64, mu: C64) -> ComplexMatrix;
}

/// `λL₁ + μL₂ + L₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialPencil {
    n: usize,
    pub l1: ComplexMatrix,
    pub l2: ComplexMatrix,
    pub l0: ComplexMatrix,
}

/// `A₁Γ₂(λ) + A₂Γ̃₂(μ) + A₃` over fixed Newton nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPencil {
    n: usize,
    pub nodes: NewtonNodes,
    pub a1: ComplexMatrix,
    pub a2: ComplexMatrix,
    pub a3: ComplexMatrix,
}

fn check_pencil_blocks(n: usize, blocks: [&ComplexMatrix; 3]) -> Result<()> {
    if n == 0 {
        return Err(Error::Dimension("block size must be at least 1".into()));
    }
    for b in blocks {
        if b.rows() != 3 * n || b.cols() != 3 * n {
            return Err(Error::Dimension(format!(
                "pencil block is {}x{}, expected {}x{}",
                b.rows(),
                b.cols(),
                3 * n,
                3 * n
            )));
        }
    }
    Ok(())
}

/// Multiplies block column `k` (width `n`) by `scales[k]`.
fn scale_block_columns(m: &ComplexMatrix, n: usize, scales: [C64; 3]) -> ComplexMatrix {
    let mut out = m.clone();
    for (k, s) in scales.iter().enumerate() {
        let col = m.block(0, k * n, m.rows(), n).scale(*s);
        out.set_block(0, k * n, &col);
    }
    out
}

fn kron_identity(m: &ComplexMatrix, n: usize) -> ComplexMatrix {
    kron(m, &ComplexMatrix::identity(n))
}

impl MonomialPencil {
    pub fn new(n: usize, l1: ComplexMatrix, l2: ComplexMatrix, l0: ComplexMatrix) -> Result<Self> {
        check_pencil_blocks(n, [&l1, &l2, &l0])?;
        Ok(Self { n, l1, l2, l0 })
    }

    pub fn zero(n: usize) -> Self {
        let z = ComplexMatrix::zeros(3 * n, 3 * n);
        Self { n, l1: z.clone(), l2: z.clone(), l0: z }
    }

    /// `(M ⊗ Iₙ)·L` for a 3×3 `M`.
    pub fn left_mul(&self, m: &ComplexMatrix) -> Self {
        let mk = kron_identity(m, self.n);
        Self { n: self.n, l1: &mk * &self.l1, l2: &mk * &self.l2, l0: &mk * &self.l0 }
    }

    /// `L·(M ⊗ Iₙ)` for a 3×3 `M`.
    pub fn right_mul(&self, m: &ComplexMatrix) -> Self {
        let mk = kron_identity(m, self.n);
        Self { n: self.n, l1: &self.l1 * &mk, l2: &self.l2 * &mk, l0: &self.l0 * &mk }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { n: self.n, l1: self.l1.scale(s), l2: self.l2.scale(s), l0: self.l0.scale(s) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("block sizes {} and {}", self.n, other.n)));
        }
        Ok(Self { n: self.n, l1: &self.l1 + &other.l1, l2: &self.l2 + &other.l2, l0: &self.l0 + &other.l0 })
    }
}

impl Pencil for MonomialPencil {
    fn n(&self) -> usize {
        self.n
    }

    fn eval(&self, lambda: C64, mu: C64) -> ComplexMatrix {
        &(&self.l1.scale(lambda) + &self.l2.scale(mu)) + &self.l0
    }
}

impl NewtonPencil {
    pub fn new(n: usize, nodes: NewtonNodes, a1: ComplexMatrix, a2: ComplexMatrix, a3: ComplexMatrix) -> Result<Self> {
        check_pencil_blocks(n, [&a1, &a2, &a3])?;
        Ok(Self { n, nodes, a1, a2, a3 })
    }

    pub fn zero(n: usize, nodes: NewtonNodes) -> Self {
        let z = ComplexMatrix::zeros(3 * n, 3 * n);
        Self { n, nodes, a1: z.clone(), a2: z.clone(), a3: z }
    }

    /// `(M ⊗ Iₙ)·L_N` for a 3×3 `M`.
    pub fn left_mul(&self, m: &ComplexMatrix) -> Self {
        let mk = kron_identity(m, self.n);
        Self { n: self.n, nodes: self.nodes, a1: &mk * &self.a1, a2: &mk * &self.a2, a3: &mk * &self.a3 }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { n: self.n, nodes: self.nodes, a1: self.a1.scale(s), a2: self.a2.scale(s), a3: self.a3.scale(s) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("block sizes {} and {}", self.n, other.n)));
        }
        if self.nodes != other.nodes {
            return Err(Error::NodeMismatch);
        }
        Ok(Self {
            n: self.n,
            nodes: self.nodes,
            a1: &self.a1 + &other.a1,
            a2: &self.a2 + &other.a2,
            a3: &self.a3 + &other.a3,
        })
    }

    /// Splits `L_N(λ, μ₀) = λ·A₁ + K` for a fixed `μ₀`; returns `(A₁, K)`.
    ///
    /// `Γ₂(λ) = λI − diag(α₂, α₁, α₁) ⊗ Iₙ`, so the pencil is linear in λ.
    pub fn lambda_linear_at(&self, mu: C64) -> (ComplexMatrix, ComplexMatrix) {
        let n = self.n;
        let NewtonNodes { alpha1, alpha2, beta1, beta2 } = self.nodes;
        let shift = scale_block_columns(&self.a1, n, [-alpha2, -alpha1, -alpha1]);
        let mu_part = scale_block_columns(&self.a2, n, [mu - beta1, mu - beta2, mu - beta1]);
        (self.a1.clone(), &(&mu_part + &self.a3) + &shift)
    }
}

impl Pencil for NewtonPencil {
    fn n(&self) -> usize {
        self.n
    }

    fn eval(&self, lambda: C64, mu: C64) -> ComplexMatrix {
        let NewtonNodes { alpha1, alpha2, beta1, beta2 } = self.nodes;
        let g = [lambda - alpha2, lambda - alpha1, lambda - alpha1];
        let gt = [mu - beta1, mu - beta2, mu - beta1];
        let t1 = scale_block_columns(&self.a1, self.n, g);
        let t2 = scale_block_columns(&self.a2, self.n, gt);
        &(&t1 + &t2) + &self.a3
    }
}

/// `Γ₂(λ) = diag(λ−α₂, λ−α₁, λ−α₁) ⊗ Iₙ` and `Γ̃₂(μ) = diag(μ−β₁, μ−β₂, μ−β₁) ⊗ Iₙ`.
pub fn gamma_blocks(nodes: &NewtonNodes, n: usize, lambda: C64, mu: C64) -> (ComplexMatrix, ComplexMatrix) {
    let expand = |d: [C64; 3]| {
        let diag: Vec<C64> = d.iter().flat_map(|&z| std::iter::repeat_n(z, n)).collect();
        ComplexMatrix::from_diagonal(&diag)
    };
    (
        expand([lambda - nodes.alpha2, lambda - nodes.alpha1, lambda - nodes.alpha1]),
        expand([mu - nodes.beta1, mu - nodes.beta2, mu - nodes.beta1]),
    )
}

/// Right ansatz vector with its zero pattern.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnsatzVector {
    v: [C64; 3],
    nonzero: [bool; 3],
}

impl AnsatzVector {
    /// Classifies components with `|v_i| ≤ tol` as zero. The same tolerance
    /// is used for membership residuals.
    pub fn new(v: [C64; 3], tol: f64) -> Self {
        Self { v, nonzero: v.map(|z| z.norm() > tol) }
    }

    pub fn real(v: [f64; 3], tol: f64) -> Self {
        Self::new(v.map(|x| c64(x, 0.0)), tol)
    }

    pub fn e1() -> Self {
        Self::real([1.0, 0.0, 0.0], 0.0)
    }

    pub fn values(&self) -> [C64; 3] {
        self.v
    }

    /// `true` where the component is classified nonzero.
    pub fn pattern(&self) -> [bool; 3] {
        self.nonzero
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero == [false; 3]
    }

    pub fn max_abs_diff(&self, other: &[C64; 3]) -> f64 {
        self.v.iter().zip(other).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Outcome of a membership test.
#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    Member { ansatz: AnsatzVector, residual: f64 },
    NotMember { best_fit: [C64; 3], residual: f64 },
}

impl Membership {
    pub fn ansatz(&self) -> Option<&AnsatzVector> {
        match self {
            Membership::Member { ansatz, .. } => Some(ansatz),
            Membership::NotMember { .. } => None,
        }
    }

    pub fn residual(&self) -> f64 {
        match self {
            Membership::Member { residual, .. } | Membership::NotMember { residual, .. } => *residual,
        }
    }

    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    /// The least-squares ansatz, member or not.
    pub fn fitted(&self) -> [C64; 3] {
        match self {
            Membership::Member { ansatz, .. } => ansatz.values(),
            Membership::NotMember { best_fit, .. } => *best_fit,
        }
    }
}

/// Which degree-1 basis the ansatz identity multiplies by.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AnsatzBasis {
    /// `Λ = (λ, μ, 1)`.
    Monomial,
    /// `N = (λ − α₁, μ − β₁, 1)`.
    Newton(NewtonNodes),
}

impl AnsatzBasis {
    pub fn vector(&self, lambda: C64, mu: C64) -> [C64; 3] {
        match self {
            AnsatzBasis::Monomial => basis_vectors(&NewtonNodes::zero(), lambda, mu).lambda3,
            AnsatzBasis::Newton(nodes) => basis_vectors(nodes, lambda, mu).n3,
        }
    }
}

/// Recovers `v` in `L(λ,μ)(b ⊗ Iₙ) = v ⊗ Q(λ,μ)` with `b` from `basis`.
///
/// No basis-tag checks; [`membership_monomial`] and [`membership_newton`] add those.
pub fn membership<P: Pencil + ?Sized>(
    pencil: &P,
    basis: AnsatzBasis,
    q: &MatrixPoly2,
    cfg: &CheckConfig,
) -> Result<Membership> {
    let n = pencil.n();
    if q.n() != n {
        return Err(Error::Dimension(format!("pencil block size {n}, polynomial {}", q.n())));
    }
    let mut samples = Vec::with_capacity(cfg.samples);
    let mut num = [c64(0.0, 0.0); 3];
    let mut den = 0.0;
    for (lambda, mu) in cfg.points() {
        let l = pencil.eval(lambda, mu);
        let b = basis.vector(lambda, mu);
        let mut r = ComplexMatrix::zeros(3 * n, n);
        for (k, bk) in b.iter().enumerate() {
            r = &r + &l.block(0, k * n, 3 * n, n).scale(*bk);
        }
        let qv = q.eval(lambda, mu);
        for (i, acc) in num.iter_mut().enumerate() {
            let ri = r.block(i * n, 0, n, n);
            *acc += qv.inner().iter().zip(ri.inner().iter()).map(|(x, y)| x.conj() * y).sum::<C64>();
        }
        den += qv.norm_fro().powi(2);
        let scale = l.norm_fro() * b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        samples.push((r, qv, scale));
    }
    if den <= f64::MIN_POSITIVE {
        return Err(Error::IllPosed);
    }
    let v = num.map(|x| x / den);
    let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut residual: f64 = 0.0;
    for (r, qv, scale) in &samples {
        let fit = kron(&ComplexMatrix::column(&v), qv);
        let err = (r - &fit).norm_fro();
        if err > 0.0 {
            residual = residual.max(err / (scale + vnorm * qv.norm_fro()));
        }
    }
    Ok(if residual <= cfg.tol {
        Membership::Member { ansatz: AnsatzVector::new(v, cfg.tol), residual }
    } else {
        Membership::NotMember { best_fit: v, residual }
    })
}

/// Ansatz of `L` in the monomial space of a monomial-tagged `Q`.
pub fn membership_monomial(l: &MonomialPencil, q: &MatrixPoly2, cfg: &CheckConfig) -> Result<Membership> {
    if q.nodes().is_some() {
        return Err(Error::WrongBasis { expected: "monomial" });
    }
    membership(l, AnsatzBasis::Monomial, q, cfg)
}

/// Ansatz of `L_N` in the Newton space of `Q_N`; the nodes must agree.
pub fn membership_newton(ln: &NewtonPencil, qn: &MatrixPoly2, cfg: &CheckConfig) -> Result<Membership> {
    let nodes = qn.nodes().ok_or(Error::WrongBasis { expected: "newton" })?;
    if *nodes != ln.nodes {
        return Err(Error::NodeMismatch);
    }
    membership(ln, AnsatzBasis::Newton(*nodes), qn, cfg)
}

/// Change of basis `S` with `SΛ = N`, and its inverse.
pub fn s_map(nodes: &NewtonNodes) -> (ComplexMatrix, ComplexMatrix) {
    let (one, zero) = (c64(1.0, 0.0), c64(0.0, 0.0));
    let (a, b) = (nodes.alpha1, nodes.beta1);
    let s = ComplexMatrix::new(3, 3, vec![one, zero, -a, zero, one, -b, zero, zero, one]).expect("finite nodes");
    let s_inv = ComplexMatrix::new(3, 3, vec![one, zero, a, zero, one, b, zero, zero, one]).expect("finite nodes");
    (s, s_inv)
}

/// `L ↦ L(S⁻¹ ⊗ Iₙ)`: carries the monomial space of `Q` onto pencils whose
/// `N`-identity reproduces `v ⊗ Q` with the same `v`.
pub fn isomorphism_f(l: &MonomialPencil, nodes: &NewtonNodes) -> MonomialPencil {
    let (_, s_inv) = s_map(nodes);
    l.right_mul(&s_inv)
}

/// Inverse of [`isomorphism_f`]: `T ↦ T(S ⊗ Iₙ)`.
pub fn isomorphism_g(t: &MonomialPencil, nodes: &NewtonNodes) -> MonomialPencil {
    let (s, _) = s_map(nodes);
    t.right_mul(&s)
}

/// Reuses the blocks `(A₁, A₂, A₃)` of `λA₁ + μA₂ + A₃` as the Newton pencil
/// `A₁Γ₂ + A₂Γ̃₂ + A₃` over the nodes of `qn`.
///
/// Both pencils carry the same ansatz vector when the monomial one belongs to
/// the space of the partner polynomial; check with [`membership_newton`].
pub fn transfer_to_newton(l: &MonomialPencil, qn: &MatrixPoly2) -> Result<NewtonPencil> {
    let nodes = *qn.nodes().ok_or(Error::WrongBasis { expected: "newton" })?;
    if qn.n() != l.n {
        return Err(Error::Dimension(format!("pencil block size {}, polynomial {}", l.n, qn.n())));
    }
    NewtonPencil::new(l.n, nodes, l.l1.clone(), l.l2.clone(), l.l0.clone())
}

/// The monomial partner `Q` of a Newton-tagged `Q_N` (same blocks).
pub fn partner(qn: &MatrixPoly2) -> MatrixPoly2 {
    qn.retagged(Basis::Monomial)
}

/// Two table rows exist for the pattern `a ≠ 0, b = 0, c ≠ 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TableRow {
    #[default]
    First,
    Alternate,
}

/// Nonsingular `M` with `Mv = e₁`, chosen by the zero pattern of `v`.
pub fn select_m(v: &AnsatzVector) -> Result<ComplexMatrix> {
    select_m_with(v, TableRow::First)
}

pub fn select_m_with(v: &AnsatzVector, variant: TableRow) -> Result<ComplexMatrix> {
    let [a, b, c] = v.values();
    let (o, z) = (c64(1.0, 0.0), c64(0.0, 0.0));
    let rows: [C64; 9] = match v.pattern() {
        [true, true, true] => [o / a, z, z, o / a, -o / b, z, o / a, z, -o / c],
        [false, true, true] => [z, o / b, z, z, -o / b, o / c, o, z, z],
        [false, false, true] => [o, o, o / c, o, o, z, z, o, z],
        [true, false, true] => match variant {
            TableRow::First => [o / a, z, z, z, o, z, -o / a, z, o / c],
            TableRow::Alternate => [o / a, z, z, o / a, z, -o / c, z, o, z],
        },
        [true, false, false] => [o / a, z, z, z, o, z, z, o, o],
        [true, true, false] => [o / a, z, o, o / a, -o / b, o, -o / a, o / b, z],
        [false, true, false] => [o, o / b, z, o, z, z, o, z, o],
        [false, false, false] => return Err(Error::ZeroAnsatz),
    };
    ComplexMatrix::new(3, 3, rows.to_vec())
}
