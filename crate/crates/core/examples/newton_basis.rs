// Newton-basis polynomials: evaluation, the Γ factors and conversion to monomial form.

use newton2pep::ansatz::gamma_blocks;
use newton2pep::poly::basis_vectors;
use newton2pep::{c64, newton_to_monomial, Basis, MatrixPoly2, NewtonNodes};

pub fn run_example() -> newton2pep::Result<()> {
    let nodes = NewtonNodes::real(1.0, 2.0, -0.5, 0.5);
    // q_N = n₂(λ) + 3·n₁(λ)m₁(μ) − m₂(μ) + 1
    let one = |x: f64| c64(x, 0.0);
    let qn = MatrixPoly2::scalar(Basis::Newton(nodes), [one(1.0), one(3.0), one(-1.0), one(0.0), one(0.0), one(1.0)]);
    let q = newton_to_monomial(&qn)?;
    println!("monomial coefficients [A20, A11, A02, A10, A01, A00]:");
    for c in q.coeffs() {
        println!("  {:.4}", c[(0, 0)]);
    }

    let (l, m) = (c64(0.3, 0.4), c64(-1.1, 0.2));
    println!("q_N({l}, {m}) = {:.12}", qn.eval(l, m)[(0, 0)]);
    println!("q  ({l}, {m}) = {:.12}", q.eval(l, m)[(0, 0)]);

    let b = basis_vectors(&nodes, l, m);
    let (g, gt) = gamma_blocks(&nodes, 1, l, m);
    println!("N3 = {:?}", b.n3.map(|z| format!("{z:.3}")));
    println!("diag Γ₂ = {:?}", (0..3).map(|i| format!("{:.3}", g[(i, i)])).collect::<Vec<_>>());
    println!("diag Γ̃₂ = {:?}", (0..3).map(|i| format!("{:.3}", gt[(i, i)])).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> newton2pep::Result<()> {
    run_example()
}
