// Slice spectra of Q_N against its pencil, and the common spectrum of a scalar pair.

use newton2pep::linearize::E1FreeParams;
use newton2pep::random::{random_newton_poly, random_poly};
use newton2pep::twoparam::relative_det;
use newton2pep::{construct_e1_newton, pair_linearize, spectrum_pair_oracle, verify_spectrum_match, QtepPair};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> newton2pep::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let qn = random_newton_poly(&mut rng, 2);
    let ln = construct_e1_newton(&qn, &E1FreeParams::companion(&qn))?;
    let rep = verify_spectrum_match(&qn, &ln, 3, 0)?;
    for s in &rep.slices {
        let worst = s.distances.iter().copied().fold(0.0, f64::max);
        println!(
            "μ₀ = {:.3}: {} eigenvalues of Q, pencil has {} finite + {} infinite, worst distance {worst:.1e}",
            s.mu,
            s.polynomial.len(),
            s.pencil_finite.len(),
            s.pencil_infinite
        );
    }

    let q1 = random_newton_poly(&mut rng, 1);
    let q2 = random_poly(&mut rng, 1, *q1.basis());
    let pair = QtepPair::new(q1, q2)?;
    let sample = spectrum_pair_oracle(&pair)?;
    let (l1, l2) = pair_linearize(&pair, &E1FreeParams::companion(pair.q1()), &E1FreeParams::companion(pair.q2()))?;
    println!("pair spectrum: {} points (bound {})", sample.points.len(), sample.bezout_bound);
    for p in &sample.points {
        let d = relative_det(&l1, p.lambda, p.mu)?.max(relative_det(&l2, p.lambda, p.mu)?);
        println!("  λ = {:.6}, μ = {:.6}, residual {:.1e}, pencil det {:.1e}", p.lambda, p.mu, p.residual, d);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> newton2pep::Result<()> {
    run_example()
}
