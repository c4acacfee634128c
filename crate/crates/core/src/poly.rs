//! Quadratic bivariate matrix polynomials in the monomial or Newton basis.

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix, C64};

/// Interpolation nodes `(α₁, α₂)` in λ and `(β₁, β₂)` in μ.
///
/// Nodes may coincide; nothing special happens when they do.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonNodes {
    pub alpha1: C64,
    pub alpha2: C64,
    pub beta1: C64,
    pub beta2: C64,
}

impl NewtonNodes {
    pub fn new(alpha1: C64, alpha2: C64, beta1: C64, beta2: C64) -> Result<Self> {
        for (k, z) in [alpha1, alpha2, beta1, beta2].iter().enumerate() {
            if !z.is_finite() {
                return Err(Error::NonFinite { row: 0, col: k });
            }
        }
        Ok(Self { alpha1, alpha2, beta1, beta2 })
    }

    pub fn real(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Self {
        Self {
            alpha1: c64(alpha1, 0.0),
            alpha2: c64(alpha2, 0.0),
            beta1: c64(beta1, 0.0),
            beta2: c64(beta2, 0.0),
        }
    }

    /// All nodes at the origin; the Newton basis then coincides with the monomials.
    pub fn zero() -> Self {
        Self::real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

/// Values of `n₀, n₁, n₂` and `m₀, m₁, m₂` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonScalars {
    pub n0: C64,
    pub n1: C64,
    pub n2: C64,
    pub m0: C64,
    pub m1: C64,
    pub m2: C64,
}

/// Newton basis scalars through the recurrence `n₂ = n₁·(λ − α₂)`, `m₂ = m₁·(μ − β₂)`.
pub fn eval_newton_scalars(nodes: &NewtonNodes, lambda: C64, mu: C64) -> NewtonScalars {
    let one = c64(1.0, 0.0);
    let n1 = lambda - nodes.alpha1;
    let m1 = mu - nodes.beta1;
    NewtonScalars {
        n0: one,
        n1,
        n2: n1 * (lambda - nodes.alpha2),
        m0: one,
        m1,
        m2: m1 * (mu - nodes.beta2),
    }
}

/// The degree-1 and degree-2 basis vectors at a point.
///
/// `n6` is ordered `(n₂, n₁m₁, m₂, n₁, m₁, n₀)` to line up with
/// `lambda6 = (λ², λμ, μ², λ, μ, 1)` and with [`Coeff::ALL`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisVectors {
    pub n3: [C64; 3],
    pub n6: [C64; 6],
    pub lambda3: [C64; 3],
    pub lambda6: [C64; 6],
}

pub fn basis_vectors(nodes: &NewtonNodes, lambda: C64, mu: C64) -> BasisVectors {
    let s = eval_newton_scalars(nodes, lambda, mu);
    let one = c64(1.0, 0.0);
    BasisVectors {
        n3: [s.n1, s.m1, one],
        n6: [s.n2, s.n1 * s.m1, s.m2, s.n1, s.m1, s.n0],
        lambda3: [lambda, mu, one],
        lambda6: [lambda * lambda, lambda * mu, mu * mu, lambda, mu, one],
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Basis {
    Monomial,
    Newton(NewtonNodes),
}

impl Basis {
    pub fn nodes(&self) -> Option<&NewtonNodes> {
        match self {
            Basis::Monomial => None,
            Basis::Newton(nodes) => Some(nodes),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Basis::Monomial => "monomial",
            Basis::Newton(_) => "newton",
        }
    }

    /// The six basis functions at `(λ, μ)` in [`Coeff::ALL`] order.
    pub fn eval6(&self, lambda: C64, mu: C64) -> [C64; 6] {
        match self {
            Basis::Monomial => basis_vectors(&NewtonNodes::zero(), lambda, mu).lambda6,
            Basis::Newton(nodes) => basis_vectors(nodes, lambda, mu).n6,
        }
    }
}

/// Coefficient slots `A_ij`, `i + j ≤ 2`, in the canonical storage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    A20,
    A11,
    A02,
    A10,
    A01,
    A00,
}

impl Coeff {
    pub const ALL: [Coeff; 6] = [Coeff::A20, Coeff::A11, Coeff::A02, Coeff::A10, Coeff::A01, Coeff::A00];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Coeff::A20 => "A20",
            Coeff::A11 => "A11",
            Coeff::A02 => "A02",
            Coeff::A10 => "A10",
            Coeff::A01 => "A01",
            Coeff::A00 => "A00",
        }
    }

    /// Powers `(i, j)` of λ and μ.
    pub fn degrees(self) -> (usize, usize) {
        match self {
            Coeff::A20 => (2, 0),
            Coeff::A11 => (1, 1),
            Coeff::A02 => (0, 2),
            Coeff::A10 => (1, 0),
            Coeff::A01 => (0, 1),
            Coeff::A00 => (0, 0),
        }
    }
}

/// `Σ_{i+j≤2} A_ij b_ij(λ, μ)` with `n × n` blocks and a basis tag.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoly2 {
    n: usize,
    basis: Basis,
    coeffs: [ComplexMatrix; 6],
}

impl MatrixPoly2 {
    /// Coefficients in [`Coeff::ALL`] order: `A20, A11, A02, A10, A01, A00`.
    pub fn new(basis: Basis, coeffs: [ComplexMatrix; 6]) -> Result<Self> {
        let n = coeffs[0].rows();
        for (c, m) in Coeff::ALL.iter().zip(&coeffs) {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension(format!(
                    "{} is {}x{}, expected {n}x{n}",
                    c.name(),
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if n == 0 {
            return Err(Error::Dimension("block size must be at least 1".into()));
        }
        Ok(Self { n, basis, coeffs })
    }

    pub fn monomial(coeffs: [ComplexMatrix; 6]) -> Result<Self> {
        Self::new(Basis::Monomial, coeffs)
    }

    pub fn newton(nodes: NewtonNodes, coeffs: [ComplexMatrix; 6]) -> Result<Self> {
        Self::new(Basis::Newton(nodes), coeffs)
    }

    /// Scalar (`n = 1`) polynomial from six coefficients.
    pub fn scalar(basis: Basis, coeffs: [C64; 6]) -> Self {
        let blocks = coeffs.map(|z| ComplexMatrix::from_diagonal(&[z]));
        Self { n: 1, basis, coeffs: blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn nodes(&self) -> Option<&NewtonNodes> {
        self.basis.nodes()
    }

    pub fn coeff(&self, c: Coeff) -> &ComplexMatrix {
        &self.coeffs[c.index()]
    }

    pub fn coeffs(&self) -> &[ComplexMatrix; 6] {
        &self.coeffs
    }

    /// Same coefficient blocks under another basis tag.
    ///
    /// With `Basis::Monomial` this gives the partner polynomial of a Newton-form one.
    pub fn retagged(&self, basis: Basis) -> Self {
        Self { n: self.n, basis, coeffs: self.coeffs.clone() }
    }

    pub fn eval(&self, lambda: C64, mu: C64) -> ComplexMatrix {
        eval_poly(self, lambda, mu)
    }

    pub fn to_monomial(&self) -> Result<Self> {
        newton_to_monomial(self)
    }
}

pub fn eval_poly(p: &MatrixPoly2, lambda: C64, mu: C64) -> ComplexMatrix {
    let weights = p.basis.eval6(lambda, mu);
    let mut acc = ComplexMatrix::zeros(p.n, p.n);
    for (w, a) in weights.iter().zip(&p.coeffs) {
        acc = &acc + &a.scale(*w);
    }
    acc
}

/// Expands the Newton products into monomial coefficients.
pub fn newton_to_monomial(p: &MatrixPoly2) -> Result<MatrixPoly2> {
    let nodes = *p.nodes().ok_or(Error::WrongBasis { expected: "newton" })?;
    let NewtonNodes { alpha1, alpha2, beta1, beta2 } = nodes;
    let [a20, a11, a02, a10, a01, a00] = &p.coeffs;
    // n₂ = λ² − (α₁+α₂)λ + α₁α₂, n₁m₁ = λμ − β₁λ − α₁μ + α₁β₁,
    // m₂ = μ² − (β₁+β₂)μ + β₁β₂, n₁ = λ − α₁, m₁ = μ − β₁.
    let lin_l = &(&a10.clone() - &a20.scale(alpha1 + alpha2)) - &a11.scale(beta1);
    let lin_m = &(&a01.clone() - &a11.scale(alpha1)) - &a02.scale(beta1 + beta2);
    let constant = {
        let mut c = a00.clone();
        c = &c + &a20.scale(alpha1 * alpha2);
        c = &c + &a11.scale(alpha1 * beta1);
        c = &c + &a02.scale(beta1 * beta2);
        c = &c - &a10.scale(alpha1);
        &c - &a01.scale(beta1)
    };
    MatrixPoly2::monomial([a20.clone(), a11.clone(), a02.clone(), lin_l, lin_m, constant])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        c64(x, 0.0)
    }

    fn scalar_coeffs(p: &MatrixPoly2) -> Vec<C64> {
        p.coeffs().iter().map(|m| m[(0, 0)]).collect()
    }

    #[test]
    fn scalars_vanish_at_nodes() {
        let s = eval_newton_scalars(&NewtonNodes::real(1.0, 2.0, 0.0, 0.0), r(1.0), r(5.0));
        assert_eq!((s.n1, s.n2, s.m1, s.m2), (r(0.0), r(0.0), r(5.0), r(25.0)));
    }

    #[test]
    fn scalars_reduce_to_monomials() {
        let s = eval_newton_scalars(&NewtonNodes::zero(), r(3.0), r(4.0));
        assert_eq!([s.n0, s.n1, s.n2, s.m0, s.m1, s.m2], [1.0, 3.0, 9.0, 1.0, 4.0, 16.0].map(r));
    }

    #[test]
    fn scalars_direct_arithmetic() {
        let s = eval_newton_scalars(&NewtonNodes::real(1.0, 2.0, 0.0, 0.0), r(3.0), r(0.0));
        assert_eq!(s.n2, r(2.0));
        assert_eq!(s.m2, r(0.0));
    }

    #[test]
    fn basis_vectors_reduce_with_zero_nodes() {
        let b = basis_vectors(&NewtonNodes::zero(), c64(0.3, -1.2), c64(2.0, 0.5));
        assert_eq!(b.n3, b.lambda3);
        assert_eq!(b.n6, b.lambda6);
    }

    #[test]
    fn eval_all_ones_monomial() {
        let q = MatrixPoly2::scalar(Basis::Monomial, [r(1.0); 6]);
        assert_eq!(q.eval(r(1.0), r(1.0))[(0, 0)], r(6.0));
    }

    #[test]
    fn eval_all_ones_newton() {
        let q = MatrixPoly2::scalar(Basis::Newton(NewtonNodes::real(1.0, 2.0, 0.0, 0.0)), [r(1.0); 6]);
        assert_eq!(q.eval(r(2.0), r(1.0))[(0, 0)], r(5.0));
    }

    #[test]
    fn newton_with_zero_nodes_matches_monomial() {
        let coeffs = [1.0, -2.0, 0.5, 3.0, -1.0, 0.25].map(r);
        let qn = MatrixPoly2::scalar(Basis::Newton(NewtonNodes::zero()), coeffs);
        let qm = MatrixPoly2::scalar(Basis::Monomial, coeffs);
        let (l, m) = (c64(0.7, 0.2), c64(-1.1, 0.4));
        assert_eq!(qn.eval(l, m), qm.eval(l, m));
    }

    #[test]
    fn conversion_expands_n2() {
        let q = MatrixPoly2::scalar(Basis::Newton(NewtonNodes::real(1.0, 2.0, 7.0, 9.0)), [1.0, 0.0, 0.0, 0.0, 0.0, 0.0].map(r));
        let m = newton_to_monomial(&q).unwrap();
        assert_eq!(scalar_coeffs(&m), [1.0, 0.0, 0.0, -3.0, 0.0, 2.0].map(r).to_vec());
    }

    #[test]
    fn conversion_expands_n1m1() {
        let q = MatrixPoly2::scalar(Basis::Newton(NewtonNodes::real(1.0, 5.0, 2.0, 6.0)), [0.0, 1.0, 0.0, 0.0, 0.0, 0.0].map(r));
        let m = newton_to_monomial(&q).unwrap();
        assert_eq!(scalar_coeffs(&m), [0.0, 1.0, 0.0, -2.0, -1.0, 2.0].map(r).to_vec());
    }

    #[test]
    fn conversion_with_zero_nodes_is_identity() {
        let coeffs = [1.0, -2.0, 0.5, 3.0, -1.0, 0.25].map(r);
        let q = MatrixPoly2::scalar(Basis::Newton(NewtonNodes::zero()), coeffs);
        assert_eq!(scalar_coeffs(&newton_to_monomial(&q).unwrap()), coeffs.to_vec());
    }

    #[test]
    fn conversion_rejects_monomial_input() {
        let q = MatrixPoly2::scalar(Basis::Monomial, [r(1.0); 6]);
        assert!(matches!(newton_to_monomial(&q), Err(Error::WrongBasis { .. })));
    }

    #[test]
    fn constructor_checks_block_sizes() {
        let mut blocks: [ComplexMatrix; 6] = std::array::from_fn(|_| ComplexMatrix::identity(2));
        blocks[4] = ComplexMatrix::identity(3);
        assert!(matches!(MatrixPoly2::monomial(blocks), Err(Error::Dimension(_))));
    }
}
