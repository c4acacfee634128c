//! Seeded random problem generators for experiments, examples and tests.

use rand::Rng;

use crate::linalg::{ComplexMatrix, C64};
use crate::linearize::E1FreeParams;
use crate::poly::{Basis, MatrixPoly2, NewtonNodes};
use crate::sampling::unit_box;

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let entries: Vec<C64> = (0..rows * cols).map(|_| unit_box(rng)).collect();
    ComplexMatrix::new(rows, cols, entries).expect("finite entries")
}

pub fn random_nodes<R: Rng + ?Sized>(rng: &mut R) -> NewtonNodes {
    NewtonNodes {
        alpha1: unit_box(rng),
        alpha2: unit_box(rng),
        beta1: unit_box(rng),
        beta2: unit_box(rng),
    }
}

pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, n: usize, basis: Basis) -> MatrixPoly2 {
    let coeffs = std::array::from_fn(|_| random_matrix(rng, n, n));
    MatrixPoly2::new(basis, coeffs).expect("consistent block sizes")
}

/// Random `(Y₁₁, Z₁, Z₂)` whose Z block is comfortably nonsingular.
pub fn random_e1_params<R: Rng + ?Sized>(rng: &mut R, n: usize) -> E1FreeParams {
    loop {
        let p = E1FreeParams::new(random_matrix(rng, n, n), random_matrix(rng, 3 * n, n), random_matrix(rng, 3 * n, n))
            .expect("consistent block sizes");
        let z = p.z_block();
        if z.smallest_singular_value().expect("square") > 1e-3 * z.norm_fro() {
            return p;
        }
    }
}

/// Random nodes followed by a random Newton-basis polynomial over them.
pub fn random_newton_poly<R: Rng + ?Sized>(rng: &mut R, n: usize) -> MatrixPoly2 {
    let nodes = random_nodes(rng);
    random_poly(rng, n, Basis::Newton(nodes))
}
