// Standard companion pencil of a random monomial Q(λ, μ) and its defining identity
// C(λ,μ)(Λ ⊗ I) = e₁ ⊗ Q(λ,μ), plus the determinant ratio det C / det Q.

use newton2pep::linalg::kron;
use newton2pep::random::random_poly;
use newton2pep::sampling::sample_points;
use newton2pep::{c64, companion_pencil, Basis, CheckConfig, ComplexMatrix, Pencil};
use newton2pep::linearize::verify_linearization_with;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> newton2pep::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 2;
    let q = random_poly(&mut rng, n, Basis::Monomial);
    let c = companion_pencil(&q);

    let e1 = ComplexMatrix::from_real(3, 1, &[1.0, 0.0, 0.0])?;
    let mut worst = 0.0f64;
    for (l, m) in sample_points(12, 0) {
        let lam = ComplexMatrix::column(&[l, m, c64(1.0, 0.0)]);
        let lhs = &c.eval(l, m) * &kron(&lam, &ComplexMatrix::identity(n));
        worst = worst.max(lhs.rel_diff(&kron(&e1, &q.eval(l, m))));
    }
    println!("companion identity, worst relative residual over 12 points: {worst:.2e}");

    let rep = verify_linearization_with(&c, &q, &CheckConfig::default())?;
    println!("det C = γ det Q with γ = {:.6} ({:?})", rep.gamma_estimate, rep.verdict);
    Ok(())
}

#[allow(dead_code)]
fn main() -> newton2pep::Result<()> {
    run_example()
}
