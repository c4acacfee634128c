use std::process::Command;
use std::time::Instant;

use nalgebra::DMatrix;
use newton2pep::ansatz::{membership_monomial, membership_newton, partner, transfer_to_newton};
use newton2pep::io::ProblemFile;
use newton2pep::linearize::{e1_form_blocks, E1FreeParams};
use newton2pep::random::{random_e1_params, random_matrix, random_newton_poly, random_poly};
use newton2pep::sampling::sample_points;
use newton2pep::twoparam::{delta_operators, spectrum_pair_oracle, verify_spectrum_match};
use newton2pep::{
    c64, companion_pencil, construct_e1_monomial, construct_e1_newton, construct_general_ansatz, pair_linearize,
    select_m, unimodular_witnesses, verify_linearization, AnsatzVector, Basis, CheckConfig, ComplexMatrix, MatrixPoly2,
    NewtonNodes, NewtonPencil, Pencil, QtepPair, Verdict, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn dm(m: &ComplexMatrix) -> DMatrix<C64> {
    m.inner().clone()
}

// Monomial evaluation written out term by term.
fn q_direct(q: &MatrixPoly2, l: C64, m: C64) -> DMatrix<C64> {
    let w = [l * l, l * m, m * m, l, m, c64(1.0, 0.0)];
    let mut acc = DMatrix::zeros(q.n(), q.n());
    for (c, s) in q.coeffs().iter().zip(w) {
        acc += dm(c) * s;
    }
    acc
}

fn rel(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

fn det3_cofactor(m: &DMatrix<C64>) -> C64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)]) - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

fn hadamard(m: &DMatrix<C64>) -> f64 {
    m.column_iter().map(|c| c.norm()).product()
}

fn crit1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for t in 0..100 {
        let n = 1 + t % 3;
        let q = random_poly(&mut rng, n, Basis::Monomial);
        let c = companion_pencil(&q);
        for (l, m) in sample_points(12, t as u64) {
            let lam = DMatrix::from_column_slice(3, 1, &[l, m, c64(1.0, 0.0)]);
            let lhs = dm(&c.eval(l, m)) * lam.kronecker(&DMatrix::identity(n, n));
            let mut e1 = DMatrix::zeros(3, 1);
            e1[(0, 0)] = c64(1.0, 0.0);
            worst = worst.max(rel(&lhs, &e1.kronecker(&q_direct(&q, l, m))));
        }
    }
    ensure(worst < 1e-10, || format!("worst residual {worst:.2e}"))?;
    Ok(format!("worst residual {worst:.2e}"))
}

fn crit2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let q = random_poly(&mut rng, 1, Basis::Monomial);
    let k: Vec<C64> = q.coeffs().iter().map(|c| c[(0, 0)]).collect();
    let (one, zero) = (c64(1.0, 0.0), c64(0.0, 0.0));
    let c = companion_pencil(&q);
    let mut worst = 0.0f64;
    for (l, m) in sample_points(50, 7) {
        let qv = q_direct(&q, l, m)[(0, 0)];
        // Blocks assembled by hand from the scalar coefficients.
        let hand = DMatrix::from_row_slice(
            3,
            3,
            &[k[0] * l + k[3], k[1] * l + k[2] * m + k[4], k[5], zero, -one, m, -one, zero, l],
        );
        let oracle = det3_cofactor(&hand);
        let lib = e(c.eval(l, m).det())?;
        ensure(rel(&hand, &dm(&c.eval(l, m))) < 1e-15, || "companion differs from hand assembly".into())?;
        worst = worst.max((oracle + qv).norm() / qv.norm()).max((lib + qv).norm() / qv.norm());
    }
    ensure(worst < 1e-10, || format!("det C + q relative {worst:.2e}"))?;
    Ok(format!("det C = -q, worst {worst:.2e}"))
}

fn crit3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let q = random_poly(&mut rng, 2, Basis::Monomial);
    let qn = q.retagged(Basis::Newton(NewtonNodes::zero()));
    let c = companion_pencil(&q);
    let ln = e(transfer_to_newton(&c, &qn))?;
    for (l, m) in sample_points(100, 3) {
        ensure(ln.eval(l, m) == c.eval(l, m), || format!("blocks differ at ({l}, {m})"))?;
    }
    Ok("exact equality at 100 points".into())
}

fn crit4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let cfg = CheckConfig::default();
    let mut worst = 0.0f64;
    for t in 0..100 {
        let n = 1 + t % 3;
        let qn = random_newton_poly(&mut rng, n);
        let q = partner(&qn);
        let s = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let l = e(construct_e1_monomial(&q, &random_e1_params(&mut rng, n)))?.scale(s);
        let ln = e(transfer_to_newton(&l, &qn))?;
        let a = e(membership_monomial(&l, &q, &cfg))?.fitted();
        let b = e(membership_newton(&ln, &qn, &cfg))?.fitted();
        for i in 0..3 {
            worst = worst.max((a[i] - b[i]).norm());
        }
        worst = worst.max((a[0] - s).norm());
    }
    ensure(worst < 1e-8, || format!("ansatz gap {worst:.2e}"))?;
    Ok(format!("ansatz gap {worst:.2e}"))
}

fn crit5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let cfg = CheckConfig::default();
    let (mut dev, mut red, mut gmin) = (0.0f64, 0.0f64, f64::INFINITY);
    for t in 0..100 {
        let n = 1 + t % 3;
        let qn = random_newton_poly(&mut rng, n);
        let params = random_e1_params(&mut rng, n);
        let ln = e(construct_e1_newton(&qn, &params))?;
        let r = e(verify_linearization(&ln, &qn, &cfg))?;
        ensure(r.verdict == Verdict::Pass, || format!("draw {t}: verdict {:?}", r.verdict))?;
        let w = e(unimodular_witnesses(&qn, &ln, &params))?;
        dev = dev.max(r.max_relative_deviation);
        gmin = gmin.min(r.gamma_estimate.norm());
        red = red.max(w.reduction_residual(&ln, &qn, &sample_points(12, t as u64)));
    }
    ensure(gmin > 1e-12 && dev < 1e-8 && red < 1e-8, || format!("|γ|min {gmin:.2e}, dev {dev:.2e}, reduction {red:.2e}"))?;
    Ok(format!("|γ| ≥ {gmin:.2e}, deviation {dev:.2e}, reduction {red:.2e}"))
}

fn crit6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let cfg = CheckConfig::default();
    let patterns = [[1, 1, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let (mut mv, mut dmin) = (0.0f64, f64::INFINITY);
    for pat in patterns {
        for t in 0..100 {
            let mag = |r: &mut ChaCha8Rng| {
                let x: f64 = r.gen_range(0.1..10.0);
                if r.gen_bool(0.5) {
                    -x
                } else {
                    x
                }
            };
            let v = [0, 1, 2].map(|i| if pat[i] == 1 { mag(&mut rng) } else { 0.0 });
            let av = AnsatzVector::real(v, 0.0);
            let m = e(select_m(&av))?;
            let prod = dm(&m) * DMatrix::from_column_slice(3, 1, &av.values());
            mv = mv.max((prod[(0, 0)] - c64(1.0, 0.0)).norm()).max(prod[(1, 0)].norm()).max(prod[(2, 0)].norm());
            dmin = dmin.min(e(m.det())?.norm());
            let n = 1 + t % 3;
            let qn = random_newton_poly(&mut rng, n);
            let g = e(construct_general_ansatz(&qn, &av, None, t as u64))?;
            let r = e(verify_linearization(&g.pencil, &qn, &cfg))?;
            ensure(r.verdict == Verdict::Pass, || format!("pattern {pat:?} draw {t}: {:?}", r.verdict))?;
        }
    }
    ensure(mv < 1e-13 && dmin > 1e-13, || format!("Mv gap {mv:.2e}, min |det M| {dmin:.2e}"))?;
    Ok(format!("700 draws, Mv gap {mv:.2e}, min |det M| {dmin:.2e}"))
}

fn crit7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let cfg = CheckConfig::default();
    for t in 0..10 {
        let n = 1 + t % 3;
        let qn = random_newton_poly(&mut rng, n);
        let zero = ComplexMatrix::zeros(3 * n, n);
        let p = e(E1FreeParams::new(random_matrix(&mut rng, n, n), zero.clone(), zero))?;
        ensure(construct_e1_newton(&qn, &p).is_err(), || "zero Z accepted by the checked constructor".into())?;
        let [a1, a2, a3] = e(e1_form_blocks(&qn, &p))?;
        let ln = e(NewtonPencil::new(n, *qn.nodes().unwrap(), a1, a2, a3))?;
        for (l, m) in sample_points(12, t as u64) {
            let x = dm(&ln.eval(l, m));
            let d = x.clone().determinant().norm() / hadamard(&x);
            ensure(d < 1e-13, || format!("det L_N relative {d:.2e}"))?;
        }
        let r = e(verify_linearization(&ln, &qn, &cfg))?;
        ensure(r.verdict != Verdict::Pass, || "zeroed Z block passed".into())?;
    }
    Ok("det ≡ 0 and no pass across 10 draws".into())
}

fn crit8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut worst = 0.0f64;
    let mut sigma = 0.0f64;
    for t in 0..20 {
        let n = 1 + t % 3;
        let qn = random_newton_poly(&mut rng, n);
        let v = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let ln = e(construct_general_ansatz(&qn, &AnsatzVector::real(v, 0.0), None, t as u64))?.pencil;
        let r = e(verify_spectrum_match(&qn, &ln, 5, t as u64))?;
        ensure(r.slices.len() == 5 && r.all_contained, || format!("pair {t}: not contained"))?;
        for s in &r.slices {
            ensure(s.polynomial.len() == 2 * n, || format!("pair {t}: {} slice eigenvalues", s.polynomial.len()))?;
            worst = s.distances.iter().copied().fold(worst, f64::max);
            // Each eigenvalue of Q must make the evaluated pencil rank deficient.
            for &lam in &s.polynomial {
                let x = dm(&ln.eval(lam, s.mu));
                let sv = x.singular_values();
                sigma = sigma.max(sv.min() / sv.max());
            }
        }
    }
    ensure(worst < 1e-6 && sigma < 1e-8, || format!("distance {worst:.2e}, pencil σ_min ratio {sigma:.2e}"))?;
    Ok(format!("100 slices, distance {worst:.2e}, pencil σ_min ratio {sigma:.2e}"))
}

fn crit9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut worst = 0.0f64;
    for t in 0..100 {
        let (p1, p2) = (1 + t % 3, 1 + (t / 3) % 3);
        let q1 = random_newton_poly(&mut rng, p1);
        let q2 = random_poly(&mut rng, p2, *q1.basis());
        let pair = e(QtepPair::new(q1, q2))?;
        let (l1, l2) = e(pair_linearize(&pair, &random_e1_params(&mut rng, p1), &random_e1_params(&mut rng, p2)))?;
        let d0 = dm(&delta_operators(&l1, &l2).d0);
        let ratio = d0.singular_values().min() / d0.norm();
        ensure(ratio < 1e-7, || format!("trial {t} (p = {p1},{p2}): σ_min/‖Δ₀‖ = {ratio:.2e}"))?;
        worst = worst.max(ratio);
    }
    Ok(format!("worst σ_min/‖Δ₀‖ {worst:.2e}"))
}

fn scalar_residual(q: &MatrixPoly2, l: C64, m: C64) -> f64 {
    let w = q.basis().eval6(l, m);
    let k: Vec<C64> = q.coeffs().iter().map(|c| c[(0, 0)]).collect();
    let val: C64 = k.iter().zip(&w).map(|(a, b)| a * b).sum();
    let scale: f64 = k.iter().zip(&w).map(|(a, b)| (a * b).norm()).sum();
    val.norm() / scale
}

fn crit10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let (mut res, mut det) = (0.0f64, 0.0f64);
    for t in 0..50 {
        let q1 = random_newton_poly(&mut rng, 1);
        let q2 = random_poly(&mut rng, 1, *q1.basis());
        let pair = e(QtepPair::new(q1, q2))?;
        let s = e(spectrum_pair_oracle(&pair))?;
        ensure(s.points.len() == 4 && s.points.iter().all(|p| p.multiplicity == 1), || {
            format!("pair {t}: {} points", s.points.len())
        })?;
        let (l1, l2) = e(pair_linearize(&pair, &E1FreeParams::companion(pair.q1()), &E1FreeParams::companion(pair.q2())))?;
        for p in &s.points {
            res = res.max(p.residual).max(scalar_residual(pair.q1(), p.lambda, p.mu)).max(scalar_residual(pair.q2(), p.lambda, p.mu));
            for l in [&l1, &l2] {
                let x = dm(&l.eval(p.lambda, p.mu));
                det = det.max(x.clone().determinant().norm() / hadamard(&x));
            }
        }
    }
    ensure(res < 1e-8 && det < 1e-7, || format!("residual {res:.2e}, pencil det {det:.2e}"))?;
    Ok(format!("50 pairs × 4 points, residual {res:.2e}, pencil det {det:.2e}"))
}

fn crit11() -> Check {
    let dir = e(tempfile::TempDir::new())?;
    let q = dir.path().join("q.json");
    let q2 = dir.path().join("q2.json");
    let p = dir.path().join("p.json");
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let qn = random_newton_poly(&mut rng, 1);
    e(ProblemFile::from_poly(&qn).write(&q))?;
    e(ProblemFile::from_poly(&random_poly(&mut rng, 1, *qn.basis())).write(&q2))?;
    let s = |x: &std::path::Path| x.to_str().unwrap().to_string();
    let runs: [Vec<String>; 5] = [
        vec!["construct".into(), s(&q), "--ansatz".into(), "0,0,1".into(), "--out".into(), s(&p), "--seed".into(), "5".into()],
        vec!["verify".into(), s(&q), s(&p), "--seed".into(), "5".into()],
        vec!["delta".into(), s(&q), s(&q2), "--check-singular".into()],
        vec!["spectrum".into(), s(&q), s(&p), "--seed".into(), "5".into()],
        vec!["spectrum".into(), s(&q), "--pair".into(), s(&q2)],
    ];
    for args in &runs {
        let go = || Command::new(env!("CARGO_BIN_EXE_newton2pep")).args(args).env_remove("NEWTON2PEP_SEED").output();
        let (a, b) = (e(go())?, e(go())?);
        ensure(a.status.success() && a.stdout == b.stdout, || format!("{} differs or failed", args[0]))?;
    }
    Ok("5 commands byte-identical".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("companion identity", crit1),
        ("scalar companion determinant", crit2),
        ("zero-node transfer", crit3),
        ("ansatz preserved by transfer", crit4),
        ("e1-form linearization", crit5),
        ("row transform table", crit6),
        ("singular Z block", crit7),
        ("slice spectrum containment", crit8),
        ("delta singularity", crit9),
        ("pair spectrum count", crit10),
        ("cli determinism", crit11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
