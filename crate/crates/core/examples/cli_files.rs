// The file-based workflow: write a problem file, construct a pencil, verify it.

use newton2pep::cli::run_with_env;
use newton2pep::io::ProblemFile;
use newton2pep::random::random_newton_poly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> newton2pep::Result<()> {
    let dir = std::env::temp_dir().join(format!("newton2pep-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let q = dir.join("q.json");
    let p = dir.join("pencil.json");
    ProblemFile::from_poly(&random_newton_poly(&mut ChaCha8Rng::seed_from_u64(1), 2)).write(&q)?;
    let (qs, ps) = (q.display().to_string(), p.display().to_string());

    let built = run_with_env(["newton2pep", "construct", &qs, "--ansatz", "1,0,2", "--out", &ps], None);
    println!("construct exit {}", built.code);
    let checked = run_with_env(["newton2pep", "verify", &qs, &ps], None);
    println!("verify exit {}", checked.code);
    let report: serde_json::Value = serde_json::from_str(&checked.stdout).map_err(|e| newton2pep::Error::Parse(e.to_string()))?;
    println!("verdict {}, γ = {}", report["verdict"], report["linearization"]["gamma"]);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> newton2pep::Result<()> {
    run_example()
}
