//! Linearizations of quadratic two-parameter matrix polynomials written in a Newton basis.
//!
//! The crate builds pencils in the ansatz spaces of a polynomial `Q(λ, μ)`, checks that
//! they are linearizations (by sampled determinant ratios and by explicit unimodular
//! factors), and forms the operator determinants of two-parameter eigenvalue pairs.
//! See the `examples/` directory for one runnable program per capability.

pub mod ansatz;
pub mod bipoly;
pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod linearize;
pub mod poly;
pub mod random;
pub mod sampling;
pub mod twoparam;

pub use ansatz::{
    membership_monomial, membership_newton, partner, select_m, transfer_to_newton, AnsatzVector, Membership,
    MonomialPencil, NewtonPencil, Pencil,
};
pub use error::{Error, Result};
pub use linalg::{c64, ComplexMatrix, C64};
pub use linearize::{
    companion_pencil, construct_e1_monomial, construct_e1_newton, construct_general_ansatz, unimodular_witnesses,
    verify_linearization, E1FreeParams, LinearizationReport, Verdict,
};
pub use poly::{newton_to_monomial, Basis, Coeff, MatrixPoly2, NewtonNodes};
pub use sampling::CheckConfig;
pub use twoparam::{
    certify_singular, delta_operators, pair_linearize, spectrum_pair_oracle, spectrum_slice, verify_spectrum_match,
    DeltaTriple, QtepPair,
};
