//! Dense complex linear algebra at desk scale.
//!
//! [`ComplexMatrix`] is a thin newtype over `nalgebra::DMatrix<Complex64>` that
//! rejects non-finite data on construction and carries the block helpers the
//! pencil constructors need. Sizes here never exceed a few dozen rows.

use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::EntryCount {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(k) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
            });
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Builds a real-valued matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| c64(x, 0.0)).collect())
    }

    pub fn from_inner(m: DMatrix<C64>) -> Result<Self> {
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if !m[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    /// Column vector from a slice.
    pub fn column(values: &[C64]) -> Self {
        Self(DMatrix::from_column_slice(values.len(), 1, values))
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn norm_fro(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self(self.0.view((r0, c0), (nr, nc)).into_owned())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &ComplexMatrix) {
        self.0.view_mut((r0, c0), (b.rows(), b.cols())).copy_from(&b.0);
    }

    /// Assembles a matrix from a rectangular grid of blocks.
    pub fn from_blocks(grid: &[&[&ComplexMatrix]]) -> Result<Self> {
        let row_heights: Vec<usize> = grid
            .iter()
            .map(|row| row.first().map_or(0, |b| b.rows()))
            .collect();
        let col_widths: Vec<usize> = grid
            .first()
            .map(|row| row.iter().map(|b| b.cols()).collect())
            .unwrap_or_default();
        for (i, row) in grid.iter().enumerate() {
            if row.len() != col_widths.len() {
                return Err(Error::Dimension(format!("block row {i} has {} blocks", row.len())));
            }
            for (j, b) in row.iter().enumerate() {
                if b.rows() != row_heights[i] || b.cols() != col_widths[j] {
                    return Err(Error::Dimension(format!(
                        "block ({i},{j}) is {}x{}, expected {}x{}",
                        b.rows(),
                        b.cols(),
                        row_heights[i],
                        col_widths[j]
                    )));
                }
            }
        }
        let mut out = Self::zeros(row_heights.iter().sum(), col_widths.iter().sum());
        let mut r0 = 0;
        for (i, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (j, b) in row.iter().enumerate() {
                out.set_block(r0, c0, b);
                c0 += col_widths[j];
            }
            r0 += row_heights[i];
        }
        Ok(out)
    }

    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        kron(self, other)
    }

    pub fn det(&self) -> Result<C64> {
        det(self)
    }

    pub fn smallest_singular_value(&self) -> Result<f64> {
        smallest_singular_value(self)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.0.clone().svd(false, false).singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Unit right singular vector belonging to the smallest singular value.
    pub fn smallest_right_singular_vector(&self) -> (f64, Vec<C64>) {
        // The thin SVD of a wide matrix omits part of the null space; zero rows restore it.
        if self.rows() < self.cols() {
            let padded = self.0.clone().resize(self.cols(), self.cols(), C64::new(0.0, 0.0));
            return ComplexMatrix(padded).smallest_right_singular_vector();
        }
        let svd = self.0.clone().svd(false, true);
        let v_t = svd.v_t.expect("requested v_t");
        let (k, s) = svd
            .singular_values
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, 0.0));
        (s,v_t.row(k).iter().map(|z| z.conj()).collect())
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows(), cols: self.cols() });
        }
        self.0.clone().lu().try_inverse().map(Self).ok_or(Error::Singular)
    }

    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows(), cols: self.cols() });
        }
        self.0.clone().lu().solve(&rhs.0).map(Self).ok_or(Error::Singular)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (&self.0 * DVector::from_column_slice(v)).iter().copied().collect()
    }

    /// Relative distance `‖self − other‖_F / max(‖self‖_F, ‖other‖_F)`, zero for two zero matrices.
    pub fn rel_diff(&self, other: &ComplexMatrix) -> f64 {
        let d = (self - other).norm_fro();
        let s = self.norm_fro().max(other.norm_fro());
        if d == 0.0 {
            0.0
        } else {
            d / s
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Kronecker product, `(rA·rB) × (cA·cB)`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rb, cb) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * rb, a.cols() * cb, |i, j| {
        a.0[(i / rb, j / cb)] * b.0[(i % rb, j % cb)]
    })
}

/// Determinant through partially pivoted LU.
pub fn det(a: &ComplexMatrix) -> Result<C64> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if a.rows() == 0 {
        return Ok(c64(1.0, 0.0));
    }
    Ok(a.0.clone().lu().determinant())
}

pub fn smallest_singular_value(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if a.rows() == 0 {
        return Ok(0.0);
    }
    Ok(a.0
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

/// Hadamard bound `Π‖row_i‖₂` on `|det A|`, used to normalise determinants.
pub fn hadamard_bound(a: &ComplexMatrix) -> f64 {
    (0..a.rows())
        .map(|i| a.0.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .product()
}

/// Eigenvalues of a square matrix from its complex Schur form.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if a.rows() == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(a.0.clone(), f64::EPSILON, 100_000).ok_or(Error::Singular)?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenEigenvalue {
    Finite(C64),
    Infinite,
}

impl GenEigenvalue {
    pub fn finite(&self) -> Option<C64> {
        match self {
            GenEigenvalue::Finite(z) => Some(*z),
            GenEigenvalue::Infinite => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenEigenpair {
    pub value: GenEigenvalue,
    pub vector: Vec<C64>,
}

/// Relative size of `θ` below which `1/θ` is reported as an infinite eigenvalue.
const INFINITE_THETA_TOL: f64 = 1e-11;
/// A shifted pencil counts as singular when `σ_min(A − sB) / (‖A‖ + |s|‖B‖)` stays below this.
const SINGULAR_SHIFT_TOL: f64 = 1e-13;

/// Generalized eigenpairs of `A x = λ B x`.
///
/// Uses a shift-and-invert transform `T = (A − sB)⁻¹ B`, whose eigenvalues are
/// `θ = 1/(λ − s)`. The shift is picked from a fixed set as the best conditioned
/// `A − sB`; infinite eigenvalues show up as `θ ≈ 0`. If every trial shift is
/// numerically singular the pencil itself is singular and an error is returned.
///
/// Finite eigenvalues come first, sorted by real then imaginary part.
pub fn small_dense_eigen(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Vec<GenEigenpair>> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !b.is_square() {
        return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
    }
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!("pencil sizes {} and {}", a.rows(), b.rows())));
    }
    let dim = a.rows();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let na = a.norm_fro();
    let nb = b.norm_fro();
    let scale = if nb > 0.0 && na > 0.0 { na / nb } else { 1.0 };

    let mut best: Option<(f64, C64)> = None;
    for &(r, phi) in &[(1.0, 0.37), (0.7, 1.91), (1.3, 2.83), (0.9, 4.41), (1.1, 5.56), (2.0, 3.3)] {
        let s = C64::from_polar(r * scale, phi);
        let shifted = a - &b.scale(s);
        let smin = smallest_singular_value(&shifted)?;
        let rel = smin / (na + s.norm() * nb).max(f64::MIN_POSITIVE);
        if best.is_none_or(|(r0, _)| rel > r0) {
            best = Some((rel, s));
        }
    }
    let (rel, shift) = best.expect("shift list is non-empty");
    if rel <= SINGULAR_SHIFT_TOL * dim as f64 {
        return Err(Error::SingularPencil);
    }

    let t = (a - &b.scale(shift)).solve(b)?;
    let t_norm = t.norm_fro();
    let thetas = eigenvalues(&t)?;
    let ident = ComplexMatrix::identity(dim);

    let mut out: Vec<GenEigenpair> = thetas
        .into_iter()
        .map(|theta| {
            let (_, vector) = (&t - &ident.scale(theta)).smallest_right_singular_vector();
            let value = if theta.norm() <= INFINITE_THETA_TOL * t_norm {
                GenEigenvalue::Infinite
            } else {
                GenEigenvalue::Finite(shift + theta.inv())
            };
            GenEigenpair { value, vector }
        })
        .collect();
    out.sort_by(|x, y| match (x.value, y.value) {
        (GenEigenvalue::Finite(p), GenEigenvalue::Finite(q)) => {
            p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im))
        }
        (GenEigenvalue::Finite(_), GenEigenvalue::Infinite) => std::cmp::Ordering::Less,
        (GenEigenvalue::Infinite, GenEigenvalue::Finite(_)) => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Equal,
    });
    Ok(out)
}
