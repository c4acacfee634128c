// e₁-form Newton linearization from random free blocks, checked two ways: sampled
// determinant ratios and the explicit unimodular factors Ẽ, F̃.

use newton2pep::random::{random_e1_params, random_newton_poly};
use newton2pep::{construct_e1_newton, membership_newton, unimodular_witnesses, verify_linearization, CheckConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> newton2pep::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let qn = random_newton_poly(&mut rng, 2);
    let params = random_e1_params(&mut rng, 2);
    let ln = construct_e1_newton(&qn, &params)?;
    let cfg = CheckConfig::default();

    let m = membership_newton(&ln, &qn, &cfg)?;
    println!("recovered ansatz: {:?} (residual {:.1e})", m.fitted().map(|z| format!("{z:.3}")), m.residual());

    let rep = verify_linearization(&ln, &qn, &cfg)?;
    println!("sampled γ = {:.10}, max deviation {:.1e}, {:?}", rep.gamma_estimate, rep.max_relative_deviation, rep.verdict);

    let w = unimodular_witnesses(&qn, &ln, &params)?;
    println!("det Z      = {:.10}", w.predicted_gamma());
    println!("F̃·L·Ẽ vs diag(Q, I): {:.1e}", w.reduction_residual(&ln, &qn, &cfg.points()));
    Ok(())
}

#[allow(dead_code)]
fn main() -> newton2pep::Result<()> {
    run_example()
}
