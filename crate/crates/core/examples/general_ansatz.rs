// Linearizations with an arbitrary ansatz vector through a constant row transform M ⊗ I
// with M v = e₁, one run per zero pattern of v.

use newton2pep::random::random_newton_poly;
use newton2pep::{construct_general_ansatz, membership_newton, verify_linearization, AnsatzVector, CheckConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> newton2pep::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let qn = random_newton_poly(&mut rng, 2);
    let cfg = CheckConfig::default();
    for v in [[2.0, -1.0, 0.5], [0.0, 1.0, 3.0], [0.0, 0.0, 1.0], [1.0, 0.0, 2.0], [1.5, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, -2.0, 0.0]] {
        let g = construct_general_ansatz(&qn, &AnsatzVector::real(v, 0.0), None, 0)?;
        let fit = membership_newton(&g.pencil, &qn, &cfg)?.fitted();
        let rep = verify_linearization(&g.pencil, &qn, &cfg)?;
        println!(
            "v = {v:?}: det M = {:+.3}, Z {:?}, recovered v = [{:.3}, {:.3}, {:.3}], {:?}",
            g.m.det()?.re,
            g.z_choice,
            fit[0].re,
            fit[1].re,
            fit[2].re,
            rep.verdict
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> newton2pep::Result<()> {
    run_example()
}
