//! Pairs of quadratic two-parameter problems over shared Newton nodes.
//!
//! Each pencil of a pair is `L_{N_i} = A⁽ⁱ⁾Γ₂ + B⁽ⁱ⁾Γ̃₂ + C⁽ⁱ⁾`. The operator
//! determinants are
//!
//! ```text
//! Δ₀ = B⁽¹⁾⊗C⁽²⁾ − C⁽¹⁾⊗B⁽²⁾
//! Δ₁ = C⁽¹⁾⊗A⁽²⁾ − A⁽¹⁾⊗C⁽²⁾
//! Δ₂ = A⁽¹⁾⊗B⁽²⁾ − B⁽¹⁾⊗A⁽²⁾
//! ```
//!
//! For e₁-form pencils every `B⁽ⁱ⁾` is singular (its last two block rows only
//! touch the last block column), and `Δ₀(x₁⊗x₂) = 0` for null vectors `xᵢ` of
//! `B⁽ⁱ⁾`. The coupled problem is built and certified here, not solved.

use crate::ansatz::{NewtonPencil, Pencil};
use crate::bipoly::{common_zeros, BiPoly};
use crate::error::{Error, Result};
use crate::linalg::{hadamard_bound, kron, small_dense_eigen, ComplexMatrix, GenEigenvalue, C64};
use crate::linearize::{construct_e1_newton, E1FreeParams};
use crate::poly::{Basis, Coeff, MatrixPoly2, NewtonNodes};
use crate::sampling::sample_points;

/// Two Newton-basis polynomials of sizes `p₁`, `p₂` over the same nodes.
///
/// Coefficient roles: `F ↔ n₂`, `E ↔ n₁m₁`, `D ↔ m₂`, `C ↔ n₁`, `B ↔ m₁`, `A ↔ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QtepPair {
    q1: MatrixPoly2,
    q2: MatrixPoly2,
}

impl QtepPair {
    pub fn new(q1: MatrixPoly2, q2: MatrixPoly2) -> Result<Self> {
        match (q1.nodes(), q2.nodes()) {
            (Some(a), Some(b)) if a == b => Ok(Self { q1, q2 }),
            (Some(_), Some(_)) => Err(Error::NodeMismatch),
            _ => Err(Error::WrongBasis { expected: "newton" }),
        }
    }

    pub fn q1(&self) -> &MatrixPoly2 {
        &self.q1
    }

    pub fn q2(&self) -> &MatrixPoly2 {
        &self.q2
    }

    pub fn nodes(&self) -> &NewtonNodes {
        self.q1.nodes().expect("checked in new")
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.q1.n(), self.q2.n())
    }

    /// Generic number of isolated eigenvalues, `4p₁p₂`.
    pub fn bezout_bound(&self) -> usize {
        4 * self.q1.n() * self.q2.n()
    }
}

/// Builds `F n₂ + E n₁m₁ + D m₂ + C n₁ + B m₁ + A` from its role-named blocks.
pub fn qtep_polynomial(nodes: NewtonNodes, [f, e, d, c, b, a]: [ComplexMatrix; 6]) -> Result<MatrixPoly2> {
    MatrixPoly2::newton(nodes, [f, e, d, c, b, a])
}

/// e₁-form linearizations of both members of the pair.
pub fn pair_linearize(pair: &QtepPair, params1: &E1FreeParams, params2: &E1FreeParams) -> Result<(NewtonPencil, NewtonPencil)> {
    Ok((construct_e1_newton(&pair.q1, params1)?, construct_e1_newton(&pair.q2, params2)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaTriple {
    pub d0: ComplexMatrix,
    pub d1: ComplexMatrix,
    pub d2: ComplexMatrix,
}

impl DeltaTriple {
    pub fn new(d0: ComplexMatrix, d1: ComplexMatrix, d2: ComplexMatrix) -> Result<Self> {
        let k = d0.rows();
        if [&d0, &d1, &d2].iter().any(|d| d.rows() != k || d.cols() != k) {
            return Err(Error::Dimension("Δ matrices must be square and of one size".into()));
        }
        Ok(Self { d0, d1, d2 })
    }

    pub fn dim(&self) -> usize {
        self.d0.rows()
    }
}

/// `Δ₀, Δ₁, Δ₂` of a pencil pair, with `A ↦ a1`, `B ↦ a2`, `C ↦ a3`.
pub fn delta_operators(l1: &NewtonPencil, l2: &NewtonPencil) -> DeltaTriple {
    delta_from_triples([&l1.a1, &l1.a2, &l1.a3], [&l2.a1, &l2.a2, &l2.a3])
}

/// `Δ₀, Δ₁, Δ₂` from raw coefficient triples `(A, B, C)` of any sizes.
pub fn delta_from_triples([a1, b1, c1]: [&ComplexMatrix; 3], [a2, b2, c2]: [&ComplexMatrix; 3]) -> DeltaTriple {
    DeltaTriple {
        d0: &kron(b1, c2) - &kron(c1, b2),
        d1: &kron(c1, a2) - &kron(a1, c2),
        d2: &kron(a1, b2) - &kron(b1, a2),
    }
}

/// Permutation `P` with `P(x ⊗ y) = y ⊗ x` for `x ∈ ℂ^{k1}`, `y ∈ ℂ^{k2}`.
pub fn perfect_shuffle(k1: usize, k2: usize) -> ComplexMatrix {
    let one = C64::new(1.0, 0.0);
    ComplexMatrix::from_fn(k1 * k2, k1 * k2, |r, c| {
        let (i, j) = (c / k2, c % k2);
        if r == j * k1 + i {
            one
        } else {
            C64::default()
        }
    })
}

/// Default relative threshold for calling `Δ₀` singular.
pub const SINGULAR_TOL: f64 = 1e-7;

/// `Δ₀` in a `g × g` block grid is block triangular with singular diagonal blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockTriangular {
    pub grid: usize,
    pub upper: bool,
    pub singular_diagonal_blocks: Vec<usize>,
}

/// `Δ₀(x₁ ⊗ x₂) ≈ 0` for `xᵢ` spanning the numerical kernel of `B⁽ⁱ⁾`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelWitness {
    /// `σ_min(B⁽ⁱ⁾) / ‖B⁽ⁱ⁾‖_F`.
    pub b_relative_sigma: [f64; 2],
    /// `‖Δ₀(x₁ ⊗ x₂)‖ / ‖Δ₀‖_F`.
    pub residual: f64,
    pub vector: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularityCertificate {
    pub is_singular: bool,
    pub sigma_min: f64,
    pub norm_fro: f64,
    pub numerical_rank: usize,
    pub dim: usize,
    pub block_triangular: Option<BlockTriangular>,
    pub kernel_witness: Option<KernelWitness>,
}

/// `is_singular ⇔ σ_min(Δ₀) ≤ tol·‖Δ₀‖_F`, plus numerical rank and any
/// block-triangular structure with singular diagonal blocks.
pub fn certify_singular(delta: &DeltaTriple, tol: f64) -> SingularityCertificate {
    let d0 = &delta.d0;
    let norm = d0.norm_fro();
    let sv = d0.singular_values();
    let sigma_min = sv.last().copied().unwrap_or(0.0);
    let cut = tol * norm;
    SingularityCertificate {
        is_singular: sigma_min <= cut,
        sigma_min,
        norm_fro: norm,
        numerical_rank: sv.iter().filter(|&&s| s > cut).count(),
        dim: d0.rows(),
        block_triangular: detect_block_triangular(d0, tol),
        kernel_witness: None,
    }
}

/// [`certify_singular`] on the pair's Δ triple, with the Kronecker kernel witness attached.
pub fn certify_pair_singular(l1: &NewtonPencil, l2: &NewtonPencil, tol: f64) -> (DeltaTriple, SingularityCertificate) {
    let delta = delta_operators(l1, l2);
    let mut cert = certify_singular(&delta, tol);
    let (s1, x1) = l1.a2.smallest_right_singular_vector();
    let (s2, x2) = l2.a2.smallest_right_singular_vector();
    let v = kron(&ComplexMatrix::column(&x1), &ComplexMatrix::column(&x2)).to_row_major();
    let image = delta.d0.mul_vec(&v);
    let residual = image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / cert.norm_fro.max(f64::MIN_POSITIVE);
    let rel = |s: f64, m: &ComplexMatrix| s / m.norm_fro().max(f64::MIN_POSITIVE);
    cert.kernel_witness = Some(KernelWitness {
        b_relative_sigma: [rel(s1, &l1.a2), rel(s2, &l2.a2)],
        residual,
        vector: v,
    });
    (delta, cert)
}

fn detect_block_triangular(d: &ComplexMatrix, tol: f64) -> Option<BlockTriangular> {
    let dim = d.rows();
    let norm = d.norm_fro();
    if norm == 0.0 {
        return None;
    }
    for grid in (2..=dim.min(6)).filter(|g| dim.is_multiple_of(*g)) {
        let s = dim / grid;
        let blk = |i: usize, j: usize| d.block(i * s, j * s, s, s);
        let small = |i: usize, j: usize| blk(i, j).max_abs() <= tol * norm;
        let lower_zero = (0..grid).all(|i| (0..i).all(|j| small(i, j)));
        let upper_zero = (0..grid).all(|i| (i + 1..grid).all(|j| small(i, j)));
        if !(lower_zero || upper_zero) {
            continue;
        }
        let singular_diagonal_blocks: Vec<usize> = (0..grid)
            .filter(|&i| blk(i, i).smallest_singular_value().map_or(true, |m| m <= tol * norm))
            .collect();
        if !singular_diagonal_blocks.is_empty() {
            return Some(BlockTriangular { grid, upper: lower_zero, singular_diagonal_blocks });
        }
    }
    None
}

/// Backward-error bound for keeping a slice eigenvalue.
pub const SLICE_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct SliceSpectrum {
    pub mu: C64,
    /// Finite eigenvalues, sorted by real then imaginary part.
    pub eigenvalues: Vec<C64>,
    /// `2n`; fewer finite values mean a singular leading coefficient.
    pub expected: usize,
    pub rejected: usize,
}

/// Finite eigenvalues of `λ ↦ Q(λ, μ₀)` from the `2n × 2n` companion pencil
/// `([0 I; −K₀ −K₁], [I 0; 0 K₂])` of `Q(λ, μ₀) = λ²K₂ + λK₁ + K₀`.
pub fn spectrum_slice(q: &MatrixPoly2, mu: C64) -> Result<SliceSpectrum> {
    let mono = match q.basis() {
        Basis::Monomial => q.clone(),
        Basis::Newton(_) => q.to_monomial()?,
    };
    let n = q.n();
    let a = |c: Coeff| mono.coeff(c);
    let k2 = a(Coeff::A20).clone();
    let k1 = &a(Coeff::A11).scale(mu) + a(Coeff::A10);
    let k0 = &(&a(Coeff::A02).scale(mu * mu) + &a(Coeff::A01).scale(mu)) + a(Coeff::A00);
    let (i, z) = (ComplexMatrix::identity(n), ComplexMatrix::zeros(n, n));
    let lhs = ComplexMatrix::from_blocks(&[&[&z, &i], &[&-&k0, &-&k1]])?;
    let rhs = ComplexMatrix::from_blocks(&[&[&i, &z], &[&z, &k2]])?;
    let mut eigenvalues = Vec::new();
    let mut rejected = 0;
    for pair in small_dense_eigen(&lhs, &rhs)? {
        let GenEigenvalue::Finite(lambda) = pair.value else { continue };
        let (top, bottom) = pair.vector.split_at(n);
        let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let x = if norm(top) >= norm(bottom) { top } else { bottom };
        let qv = &(&k2.scale(lambda * lambda) + &k1.scale(lambda)) + &k0;
        let scale = k2.norm_fro() * lambda.norm_sqr() + k1.norm_fro() * lambda.norm() + k0.norm_fro();
        let backward = norm(&qv.mul_vec(x)) / (scale.max(f64::MIN_POSITIVE) * norm(x));
        if backward <= SLICE_RESIDUAL_TOL {
            eigenvalues.push(lambda);
        } else {
            rejected += 1;
        }
    }
    Ok(SliceSpectrum { mu, eigenvalues, expected: 2 * n, rejected })
}

/// Matching tolerance: `|λ_Q − λ_L| ≤ MATCH_TOL · max(1, |λ_Q|)`.
pub const MATCH_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SliceMatch {
    pub mu: C64,
    pub polynomial: Vec<C64>,
    pub pencil_finite: Vec<C64>,
    pub pencil_infinite: usize,
    /// Distance from each polynomial eigenvalue to its nearest pencil eigenvalue.
    pub distances: Vec<f64>,
    /// `det L_N(·, μ₀) ≡ 0`: every λ is an eigenvalue.
    pub singular_pencil: bool,
    pub contained: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumMatchReport {
    pub slices: Vec<SliceMatch>,
    pub all_contained: bool,
}

/// Checks that each finite eigenvalue of `Q_N(·, μ₀)` is an eigenvalue of the
/// `3n × 3n` pencil `L_N(·, μ₀)` for `slices` seeded values `μ₀`.
pub fn verify_spectrum_match(qn: &MatrixPoly2, ln: &NewtonPencil, slices: usize, seed: u64) -> Result<SpectrumMatchReport> {
    let nodes = qn.nodes().ok_or(Error::WrongBasis { expected: "newton" })?;
    if *nodes != ln.nodes {
        return Err(Error::NodeMismatch);
    }
    if ln.n() != qn.n() {
        return Err(Error::Dimension(format!("pencil block size {}, polynomial {}", ln.n(), qn.n())));
    }
    let mut out = Vec::with_capacity(slices);
    for (_, mu) in sample_points(slices, seed) {
        let polynomial = spectrum_slice(qn, mu)?.eigenvalues;
        let (a1, k) = ln.lambda_linear_at(mu);
        let (pencil_finite, pencil_infinite, singular_pencil) = match small_dense_eigen(&-&k, &a1) {
            Ok(pairs) => {
                let fin: Vec<C64> = pairs.iter().filter_map(|p| p.value.finite()).collect();
                let inf = pairs.len() - fin.len();
                (fin, inf, false)
            }
            Err(Error::SingularPencil) => (Vec::new(), 0, true),
            Err(e) => return Err(e),
        };
        let distances: Vec<f64> = polynomial
            .iter()
            .map(|&l| pencil_finite.iter().map(|&m| (l - m).norm()).fold(f64::INFINITY, f64::min))
            .collect();
        let contained = !singular_pencil
            && polynomial.iter().zip(&distances).all(|(l, &d)| d <= MATCH_TOL * l.norm().max(1.0));
        out.push(SliceMatch { mu, polynomial, pencil_finite, pencil_infinite, distances, singular_pencil, contained });
    }
    let all_contained = out.iter().all(|s| s.contained);
    Ok(SpectrumMatchReport { slices: out, all_contained })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumPoint {
    pub lambda: C64,
    pub mu: C64,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSample {
    pub points: Vec<SpectrumPoint>,
    pub total_multiplicity: usize,
    pub bezout_bound: usize,
    pub rejected: usize,
}

/// `det Q` as a bivariate monomial polynomial, interpolated on a `(2p+1)²` grid.
pub fn det_polynomial(q: &MatrixPoly2) -> BiPoly {
    let d = 2 * q.n();
    let mut f = BiPoly::interpolate(|l, m| q.eval(l, m).det().expect("square"), d, d, 1.0, 1.5);
    f.truncate_total_degree(d);
    f.chop(1e-13);
    f
}

/// Isolated common zeros of `det Q_{N_1}` and `det Q_{N_2}` with multiplicities.
pub fn spectrum_pair_oracle(pair: &QtepPair) -> Result<SpectrumSample> {
    let f = det_polynomial(&pair.q1);
    let g = det_polynomial(&pair.q2);
    let zeros = common_zeros(&f, &g)?;
    let points: Vec<SpectrumPoint> = zeros
        .points
        .iter()
        .map(|z| SpectrumPoint { lambda: z.lambda, mu: z.mu, multiplicity: z.multiplicity, residual: z.residual })
        .collect();
    Ok(SpectrumSample {
        total_multiplicity: points.iter().map(|p| p.multiplicity).sum(),
        bezout_bound: pair.bezout_bound(),
        rejected: zeros.rejected,
        points,
    })
}

/// `|det L(λ, μ)| / Hadamard(L(λ, μ))`.
pub fn relative_det<P: Pencil + ?Sized>(pencil: &P, lambda: C64, mu: C64) -> Result<f64> {
    let m = pencil.eval(lambda, mu);
    let bound = hadamard_bound(&m);
    Ok(if bound == 0.0 { 0.0 } else { m.det()?.norm() / bound })
}
