//! `newton2pep <construct|verify|delta|spectrum>`.
//!
//! Reports are pretty JSON on stdout, with sorted keys and no clock readings, so
//! identical inputs, flags and seed give byte-identical output. `--timings` writes
//! elapsed time to stderr only.
//!
//! Exit codes: 0 pass, 1 fail, 2 usage or parse error, 3 inconclusive.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::ansatz::{membership_monomial, membership_newton, AnsatzVector, Membership, MonomialPencil, NewtonPencil, Pencil};
use crate::error::{Error, Result};
use crate::io::{read_params, AnyPencil, ProblemFile, Provenance};
use crate::linalg::{ComplexMatrix, C64};
use crate::linearize::{
    companion_pencil, construct_e1_newton, construct_general_ansatz, unimodular_witnesses, verify_linearization,
    verify_linearization_with, E1FreeParams, LinearizationReport, Verdict, ZChoice,
};
use crate::poly::{Basis, MatrixPoly2, NewtonNodes};
use crate::random::random_e1_params;
use crate::sampling::{CheckConfig, MIN_SAMPLES};
use crate::twoparam::{
    certify_pair_singular, delta_operators, pair_linearize, relative_det, spectrum_pair_oracle, verify_spectrum_match,
    QtepPair, SingularityCertificate, SINGULAR_TOL,
};

pub const SEED_ENV: &str = "NEWTON2PEP_SEED";
pub const DEFAULT_SLICES: usize = 5;
pub const CSV_HEADER: &str = "re_lambda,im_lambda,re_mu,im_mu,residual";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "newton2pep", version, about = "Linearizations of quadratic two-parameter matrix polynomials in the Newton basis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print elapsed time to stderr.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a linearization and write it as a pencil file.
    Construct(ConstructArgs),
    /// Check a pencil file against a polynomial file.
    Verify(VerifyArgs),
    /// Build the operator determinants of a pair and optionally certify singularity.
    Delta(DeltaArgs),
    /// Compare slice spectra, or compute the common spectrum of a scalar-size pair.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    pub file: PathBuf,
    /// Ansatz vector `a,b,c` (real entries).
    #[arg(long, required_unless_present = "companion", conflicts_with = "companion", allow_hyphen_values = true)]
    pub ansatz: Option<String>,
    /// Standard companion pencil (Newton files get its transferred form).
    #[arg(long)]
    pub companion: bool,
    /// Free parameters: `seed:N` for seeded random blocks, or a parameter file.
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub qfile: PathBuf,
    pub pencilfile: PathBuf,
    #[arg(long, default_value_t = 12)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    pub q1file: PathBuf,
    pub q2file: PathBuf,
    /// `companion` (default), `seed:N`, or `FILE1,FILE2`.
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub check_singular: bool,
    #[arg(long, default_value_t = SINGULAR_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    pub qfile: PathBuf,
    pub pencilfile: Option<PathBuf>,
    #[arg(long, conflicts_with = "pair")]
    pub slices: Option<usize>,
    #[arg(long)]
    pub pair: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs the CLI with `args[0]` as the program name, reading the seed fallback from the environment.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_env(args, std::env::var(SEED_ENV).ok())
}

pub fn run_with_env<I, S>(args: I, env_seed: Option<String>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code }
            } else {
                Outcome { stdout: text, stderr: String::new(), code }
            };
        }
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Construct(a) => cmd_construct(a, env_seed.as_deref()),
        Command::Verify(a) => cmd_verify(a, env_seed.as_deref()),
        Command::Delta(a) => cmd_delta(a),
        Command::Spectrum(a) => cmd_spectrum(a, env_seed.as_deref()),
    };
    let mut stderr = String::new();
    if cli.timings {
        let _ = writeln!(stderr, "elapsed_ms: {:.3}", start.elapsed().as_secs_f64() * 1e3);
    }
    match result {
        Ok((report, code)) => Outcome {
            stdout: serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
            stderr,
            code,
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            Outcome { stdout: String::new(), stderr, code: error_code(&e) }
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_)
        | Error::Parse(_)
        | Error::Io(_)
        | Error::ZeroAnsatz
        | Error::NodeMismatch
        | Error::WrongBasis { .. }
        | Error::Dimension(_)
        | Error::EntryCount { .. }
        | Error::NonFinite { .. } => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(text)) => text
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("{SEED_ENV}={text:?} is not an unsigned integer"))),
        (None, None) => Ok(0),
    }
}

fn cx(z: C64) -> Value {
    json!([z.re, z.im])
}

fn cx_list(zs: &[C64]) -> Value {
    Value::Array(zs.iter().copied().map(cx).collect())
}

fn matrix_rows(m: &ComplexMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| Value::Array((0..m.cols()).map(|c| cx(m[(r, c)])).collect())).collect())
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// The polynomial as a Newton-tagged one; monomial files get zero nodes.
fn as_newton(q: &MatrixPoly2) -> MatrixPoly2 {
    match q.basis() {
        Basis::Newton(_) => q.clone(),
        Basis::Monomial => q.retagged(Basis::Newton(NewtonNodes::zero())),
    }
}

fn monomial_from_newton(p: &NewtonPencil) -> MonomialPencil {
    MonomialPencil::new(p.n(), p.a1.clone(), p.a2.clone(), p.a3.clone()).expect("same block sizes")
}

fn newton_from_monomial(p: &MonomialPencil) -> NewtonPencil {
    NewtonPencil::new(p.n(), NewtonNodes::zero(), p.l1.clone(), p.l2.clone(), p.l0.clone()).expect("same block sizes")
}

fn parse_ansatz(text: &str) -> Result<AnsatzVector> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Usage(format!("--ansatz expects three comma-separated numbers, got {text:?}")));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| Error::Usage(format!("--ansatz entry {p:?} is not a finite number")))?;
    }
    let v = AnsatzVector::real(v, 0.0);
    if v.is_zero() {
        return Err(Error::ZeroAnsatz);
    }
    Ok(v)
}

fn parse_seed_spec(text: &str) -> Option<u64> {
    text.strip_prefix("seed:").unwrap_or(text).parse().ok()
}

fn parse_params(text: &str, n: usize) -> Result<E1FreeParams> {
    match parse_seed_spec(text) {
        Some(seed) => Ok(random_e1_params(&mut ChaCha8Rng::seed_from_u64(seed), n)),
        None => read_params(Path::new(text), n),
    }
}

fn membership_json(m: &Membership) -> Value {
    json!({
        "member": m.is_member(),
        "ansatz": cx_list(&m.fitted()),
        "residual": m.residual(),
    })
}

fn linearization_json(r: &LinearizationReport) -> Value {
    json!({
        "verdict": r.verdict.as_str(),
        "gamma": cx(r.gamma_estimate),
        "max_relative_deviation": r.max_relative_deviation,
        "samples": r.sample_count,
        "reference_index": r.reference_index,
    })
}

fn z_choice_json(z: ZChoice) -> Value {
    match z {
        ZChoice::Supplied => json!("supplied"),
        ZChoice::Deterministic => json!("deterministic"),
        ZChoice::Randomized { attempts } => json!({ "randomized_attempts": attempts }),
    }
}

fn cmd_construct(a: &ConstructArgs, env_seed: Option<&str>) -> Result<(Value, i32)> {
    let seed = resolve_seed(a.seed, env_seed)?;
    let file = ProblemFile::read(&a.file)?;
    let q = file.poly()?;
    let n = q.n();
    let qn = as_newton(&q);
    let monomial = matches!(q.basis(), Basis::Monomial);
    let cfg = CheckConfig::default().with_seed(seed);

    let (newton, prov, extra) = if a.companion {
        if a.params.is_some() {
            return Err(Error::Usage("--params cannot be combined with --companion".into()));
        }
        let params = E1FreeParams::companion(&qn);
        let ln = construct_e1_newton(&qn, &params)?;
        let prov = Provenance { source: "companion".into(), ansatz: AnsatzVector::e1().values(), m: None, e1_params: params };
        (ln, prov, json!({}))
    } else {
        let v = parse_ansatz(a.ansatz.as_deref().expect("clap requires --ansatz without --companion"))?;
        let supplied = a.params.as_deref().map(|p| parse_params(p, n)).transpose()?;
        let g = construct_general_ansatz(&qn, &v, supplied.as_ref(), seed)?;
        let prov = Provenance { source: "ansatz".into(), ansatz: v.values(), m: Some(g.m.clone()), e1_params: g.transformed_params.clone() };
        let extra = json!({ "M": matrix_rows(&g.m), "z_choice": z_choice_json(g.z_choice) });
        (g.pencil, prov, extra)
    };

    let (pencil, membership) = if monomial {
        let l = if a.companion { companion_pencil(&q) } else { monomial_from_newton(&newton) };
        let m = membership_monomial(&l, &q, &cfg)?;
        (AnyPencil::Monomial(l), m)
    } else {
        let m = membership_newton(&newton, &qn, &cfg)?;
        (AnyPencil::Newton(newton), m)
    };
    ProblemFile::from_poly(&q).with_pencil(&pencil).with_provenance(&prov).write(&a.out)?;

    let mut report = json!({
        "command": "construct",
        "input": path_str(&a.file),
        "output": path_str(&a.out),
        "seed": seed,
        "n": n,
        "basis": q.basis().name(),
        "pencil_kind": if monomial { "monomial" } else { "newton" },
        "source": prov.source,
        "requested_ansatz": cx_list(&prov.ansatz),
        "membership": membership_json(&membership),
    });
    if let (Value::Object(r), Value::Object(e)) = (&mut report, extra) {
        r.extend(e);
    }
    Ok((report, EXIT_PASS))
}

fn cmd_verify(a: &VerifyArgs, env_seed: Option<&str>) -> Result<(Value, i32)> {
    if a.samples < MIN_SAMPLES {
        return Err(Error::Usage(format!("--samples must be at least {MIN_SAMPLES}, got {}", a.samples)));
    }
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(Error::Usage(format!("--tol must be positive, got {}", a.tol)));
    }
    let seed = resolve_seed(a.seed, env_seed)?;
    let cfg = CheckConfig::default().with_samples(a.samples).with_tol(a.tol).with_seed(seed);
    let q = ProblemFile::read(&a.qfile)?.poly()?;
    let pf = ProblemFile::read(&a.pencilfile)?;
    let pencil = pf.pencil()?.ok_or_else(|| Error::Parse(format!("{}: no pencil object", path_str(&a.pencilfile))))?;
    if pf.n != q.n() {
        return Err(Error::Dimension(format!("pencil file has n = {}, polynomial n = {}", pf.n, q.n())));
    }

    let (membership, lin, newton_view) = match &pencil {
        AnyPencil::Newton(ln) => {
            let m = membership_newton(ln, &q, &cfg)?;
            let r = verify_linearization(ln, &q, &cfg)?;
            (m, r, ln.clone())
        }
        AnyPencil::Monomial(l) => {
            if q.nodes().is_some() {
                return Err(Error::WrongBasis { expected: "monomial" });
            }
            let m = membership_monomial(l, &q, &cfg)?;
            let r = verify_linearization_with(l, &q, &cfg)?;
            (m, r, newton_from_monomial(l))
        }
    };

    let mut witness_ok = true;
    let witness = match pf.provenance()? {
        None => Value::Null,
        Some(prov) => {
            let qn = as_newton(&q);
            let (l_hat, det_m) = match &prov.m {
                Some(m) => (newton_view.left_mul(m), m.det()?),
                None => (newton_view.clone(), C64::new(1.0, 0.0)),
            };
            match unimodular_witnesses(&qn, &l_hat, &prov.e1_params) {
                Ok(w) => {
                    let predicted = w.predicted_gamma() / det_m.powu(q.n() as u32);
                    let reduction = w.reduction_residual(&l_hat, &qn, &cfg.points());
                    let gamma_gap = if lin.verdict == Verdict::Inconclusive {
                        Value::Null
                    } else {
                        let gap = (predicted - lin.gamma_estimate).norm() / predicted.norm();
                        witness_ok = gap < 1e-6;
                        json!(gap)
                    };
                    json!({
                        "status": "ok",
                        "predicted_gamma": cx(predicted),
                        "reduction_residual": reduction,
                        "gamma_relative_gap": gamma_gap,
                    })
                }
                Err(Error::WitnessMismatch { residual }) => {
                    witness_ok = false;
                    json!({ "status": "mismatch", "reduction_residual": residual })
                }
                Err(Error::SingularZBlock { sigma_min }) => {
                    witness_ok = false;
                    json!({ "status": "singular_z", "sigma_min": sigma_min })
                }
                Err(e) => return Err(e),
            }
        }
    };

    let code = match (lin.verdict, witness_ok) {
        (Verdict::Inconclusive, _) => EXIT_INCONCLUSIVE,
        (Verdict::Pass, true) => EXIT_PASS,
        _ => EXIT_FAIL,
    };
    let overall = match code {
        EXIT_PASS => "pass",
        EXIT_INCONCLUSIVE => "inconclusive",
        _ => "fail",
    };
    Ok((
        json!({
            "command": "verify",
            "polynomial": path_str(&a.qfile),
            "pencil": path_str(&a.pencilfile),
            "seed": seed,
            "tolerance": a.tol,
            "samples": a.samples,
            "membership": membership_json(&membership),
            "linearization": linearization_json(&lin),
            "witnesses": witness,
            "verdict": overall,
        }),
        code,
    ))
}

fn read_pair(p1: &Path, p2: &Path) -> Result<QtepPair> {
    let q1 = ProblemFile::read(p1)?.poly()?;
    let q2 = ProblemFile::read(p2)?.poly()?;
    match (q1.basis(), q2.basis()) {
        (Basis::Monomial, Basis::Monomial) => QtepPair::new(as_newton(&q1), as_newton(&q2)),
        _ => QtepPair::new(q1, q2),
    }
}

fn pair_params(spec: Option<&str>, pair: &QtepPair) -> Result<(E1FreeParams, E1FreeParams, String)> {
    let (p1, p2) = pair.sizes();
    match spec.unwrap_or("companion") {
        "companion" => Ok((E1FreeParams::companion(pair.q1()), E1FreeParams::companion(pair.q2()), "companion".into())),
        s => {
            if let Some(seed) = parse_seed_spec(s) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_e1_params(&mut rng, p1);
                let b = random_e1_params(&mut rng, p2);
                return Ok((a, b, format!("seed:{seed}")));
            }
            let files: Vec<&str> = s.split(',').collect();
            if files.len() != 2 {
                return Err(Error::Usage(format!("--params expects companion, seed:N or FILE1,FILE2, got {s:?}")));
            }
            Ok((read_params(Path::new(files[0]), p1)?, read_params(Path::new(files[1]), p2)?, s.to_string()))
        }
    }
}

/// Report fragment for a singularity certificate.
pub fn singularity_json(cert: &SingularityCertificate, tol: f64) -> Value {
    json!({
        "verdict": if cert.is_singular { "singular" } else { "nonsingular" },
        "sigma_min": cert.sigma_min,
        "relative_sigma_min": if cert.norm_fro > 0.0 { cert.sigma_min / cert.norm_fro } else { 0.0 },
        "norm_fro": cert.norm_fro,
        "numerical_rank": cert.numerical_rank,
        "dim": cert.dim,
        "tolerance": tol,
        "block_triangular": cert.block_triangular.as_ref().map(|b| json!({
            "grid": b.grid,
            "upper": b.upper,
            "singular_diagonal_blocks": b.singular_diagonal_blocks,
        })),
        "kernel_witness": cert.kernel_witness.as_ref().map(|w| json!({
            "b_relative_sigma_min": w.b_relative_sigma,
            "residual": w.residual,
        })),
    })
}

fn cmd_delta(a: &DeltaArgs) -> Result<(Value, i32)> {
    let pair = read_pair(&a.q1file, &a.q2file)?;
    let (params1, params2, label) = pair_params(a.params.as_deref(), &pair)?;
    let (l1, l2) = pair_linearize(&pair, &params1, &params2)?;
    let (p1, p2) = pair.sizes();
    let delta = delta_operators(&l1, &l2);
    let mut report = json!({
        "command": "delta",
        "q1": path_str(&a.q1file),
        "q2": path_str(&a.q2file),
        "params": label,
        "sizes": [p1, p2],
        "pencil_sizes": [3 * p1, 3 * p2],
        "delta_dim": delta.dim(),
        "delta_norms": [delta.d0.norm_fro(), delta.d1.norm_fro(), delta.d2.norm_fro()],
    });
    if a.check_singular {
        let (_, cert) = certify_pair_singular(&l1, &l2, a.tol);
        report["singularity"] = singularity_json(&cert, a.tol);
    }
    Ok((report, EXIT_PASS))
}

fn fmt_f(x: f64) -> String {
    format!("{x:e}")
}

fn csv_row(out: &mut String, l: C64, m: C64, residual: f64) {
    let _ = writeln!(out, "{},{},{},{},{}", fmt_f(l.re), fmt_f(l.im), fmt_f(m.re), fmt_f(m.im), fmt_f(residual));
}

fn cmd_spectrum(a: &SpectrumArgs, env_seed: Option<&str>) -> Result<(Value, i32)> {
    let seed = resolve_seed(a.seed, env_seed)?;
    let mut csv = format!("{CSV_HEADER}\n");
    let (report, code) = if let Some(q2file) = &a.pair {
        if a.pencilfile.is_some() {
            return Err(Error::Usage("a pencil file is not used with --pair".into()));
        }
        let pair = read_pair(&a.qfile, q2file)?;
        match spectrum_pair_oracle(&pair) {
            Ok(s) => {
                let p1 = E1FreeParams::companion(pair.q1());
                let p2 = E1FreeParams::companion(pair.q2());
                let (l1, l2) = pair_linearize(&pair, &p1, &p2)?;
                let mut pencil_det = 0.0f64;
                let mut points = Vec::new();
                for p in &s.points {
                    pencil_det = pencil_det.max(relative_det(&l1, p.lambda, p.mu)?).max(relative_det(&l2, p.lambda, p.mu)?);
                    csv_row(&mut csv, p.lambda, p.mu, p.residual);
                    points.push(json!({
                        "lambda": cx(p.lambda),
                        "mu": cx(p.mu),
                        "multiplicity": p.multiplicity,
                        "residual": p.residual,
                    }));
                }
                (
                    json!({
                        "command": "spectrum",
                        "mode": "pair",
                        "q1": path_str(&a.qfile),
                        "q2": path_str(q2file),
                        "status": "ok",
                        "points": points,
                        "distinct_points": s.points.len(),
                        "total_multiplicity": s.total_multiplicity,
                        "bezout_bound": s.bezout_bound,
                        "count_matches_bound": s.total_multiplicity == s.bezout_bound,
                        "rejected_candidates": s.rejected,
                        "max_pencil_relative_det": pencil_det,
                    }),
                    EXIT_PASS,
                )
            }
            Err(Error::SharedFactor) => (
                json!({
                    "command": "spectrum",
                    "mode": "pair",
                    "q1": path_str(&a.qfile),
                    "q2": path_str(q2file),
                    "status": "shared_factor",
                }),
                EXIT_FAIL,
            ),
            Err(e) => return Err(e),
        }
    } else {
        let slices = a.slices.unwrap_or(DEFAULT_SLICES);
        if slices == 0 {
            return Err(Error::Usage("--slices must be at least 1".into()));
        }
        let q = ProblemFile::read(&a.qfile)?.poly()?;
        let qn = as_newton(&q);
        let (ln, pencil_label) = match &a.pencilfile {
            Some(path) => {
                let pencil = ProblemFile::read(path)?.pencil()?.ok_or_else(|| Error::Parse(format!("{}: no pencil object", path_str(path))))?;
                let ln = match pencil {
                    AnyPencil::Newton(ln) => ln,
                    AnyPencil::Monomial(l) => newton_from_monomial(&l),
                };
                (ln, path_str(path))
            }
            None => (construct_e1_newton(&qn, &E1FreeParams::companion(&qn))?, "companion".to_string()),
        };
        let rep = verify_spectrum_match(&qn, &ln, slices, seed)?;
        let mut table = Vec::new();
        for s in &rep.slices {
            for (l, d) in s.polynomial.iter().zip(&s.distances) {
                csv_row(&mut csv, *l, s.mu, *d);
            }
            table.push(json!({
                "mu": cx(s.mu),
                "polynomial_eigenvalues": cx_list(&s.polynomial),
                "pencil_finite": s.pencil_finite.len(),
                "pencil_infinite": s.pencil_infinite,
                "max_distance": s.distances.iter().copied().fold(0.0, f64::max),
                "singular_pencil": s.singular_pencil,
                "contained": s.contained,
            }));
        }
        (
            json!({
                "command": "spectrum",
                "mode": "slices",
                "polynomial": path_str(&a.qfile),
                "pencil": pencil_label,
                "seed": seed,
                "slices": table,
                "all_contained": rep.all_contained,
            }),
            if rep.all_contained { EXIT_PASS } else { EXIT_FAIL },
        )
    };
    if let Some(out) = &a.out {
        std::fs::write(out, &csv)?;
    }
    Ok((report, code))
}
