// Moving a monomial-space pencil to the Newton space keeps its ansatz vector.

use newton2pep::ansatz::{isomorphism_f, isomorphism_g};
use newton2pep::random::{random_e1_params, random_newton_poly};
use newton2pep::sampling::sample_points;
use newton2pep::{construct_e1_monomial, membership_monomial, membership_newton, partner, transfer_to_newton, CheckConfig, Pencil};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> newton2pep::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let qn = random_newton_poly(&mut rng, 2);
    let q = partner(&qn);
    let cfg = CheckConfig::default();

    let l = construct_e1_monomial(&q, &random_e1_params(&mut rng, 2))?.scale(newton2pep::c64(0.5, 0.25));
    let ln = transfer_to_newton(&l, &qn)?;
    println!("monomial ansatz: {:?}", membership_monomial(&l, &q, &cfg)?.fitted().map(|z| format!("{z:.4}")));
    println!("Newton ansatz:   {:?}", membership_newton(&ln, &qn, &cfg)?.fitted().map(|z| format!("{z:.4}")));

    let nodes = qn.nodes().copied().expect("Newton polynomial");
    let back = isomorphism_g(&isomorphism_f(&l, &nodes), &nodes);
    let worst = sample_points(6, 1).into_iter().map(|(a, b)| back.eval(a, b).rel_diff(&l.eval(a, b))).fold(0.0, f64::max);
    println!("g(f(L)) vs L: {worst:.1e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> newton2pep::Result<()> {
    run_example()
}
