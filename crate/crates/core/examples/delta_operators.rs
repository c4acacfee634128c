// Operator determinants of a linearized pair and the singularity certificate of Δ₀.

use newton2pep::random::{random_e1_params, random_newton_poly, random_poly};
use newton2pep::twoparam::{certify_pair_singular, SINGULAR_TOL};
use newton2pep::{pair_linearize, QtepPair};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> newton2pep::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for (p1, p2) in [(1, 1), (2, 1), (2, 2)] {
        let q1 = random_newton_poly(&mut rng, p1);
        let q2 = random_poly(&mut rng, p2, *q1.basis());
        let pair = QtepPair::new(q1, q2)?;
        let (l1, l2) = pair_linearize(&pair, &random_e1_params(&mut rng, p1), &random_e1_params(&mut rng, p2))?;
        let (delta, cert) = certify_pair_singular(&l1, &l2, SINGULAR_TOL);
        let w = cert.kernel_witness.as_ref().expect("pair certificate");
        println!(
            "p = ({p1}, {p2}): Δ is {n}x{n}, σ_min(Δ₀)/‖Δ₀‖ = {:.1e}, rank {} , kernel witness {:.1e}, singular = {}",
            cert.sigma_min / cert.norm_fro,
            cert.numerical_rank,
            w.residual,
            cert.is_singular,
            n = delta.dim()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> newton2pep::Result<()> {
    run_example()
}
